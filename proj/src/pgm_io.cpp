#include "tvq1/pgm_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace tvq1 {

namespace {

// Header token reader: skips whitespace and '#' comments.
int next_header_int(std::istream& in, const char* what) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  if (ch == EOF || !std::isdigit(ch))
    throw IoError(std::string("read_pgm: malformed header (expected ") + what + ")");
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) throw IoError("read_pgm: malformed header (value overflow)");
    ch = in.get();
  }
  if (ch != EOF) in.unget();
  return static_cast<int>(value);
}

} // namespace

GridFunction read_pgm(const std::string& path, bool periodic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_pgm: cannot open '" + path + "'");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '2' && m1 != '5'))
    throw IoError("read_pgm: malformed header (not a P2/P5 PGM)");
  const bool binary = m1 == '5';

  const int width = next_header_int(in, "width");
  const int height = next_header_int(in, "height");
  const int maxval = next_header_int(in, "maxval");
  if (width < 2 || height < 2)
    throw IoError("read_pgm: image dimensions must be at least 2x2");
  if (maxval < 1 || maxval > 65535) throw IoError("read_pgm: maxval out of range");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> pixels(count);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    in.get();
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      throw IoError("read_pgm: unexpected end of pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned value = bytes == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
      pixels[i] = static_cast<double>(value) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long value = 0;
      if (!(in >> value)) throw IoError("read_pgm: unexpected end of pixel data");
      if (value < 0 || value > maxval)
        throw IoError("read_pgm: pixel value out of range");
      pixels[i] = static_cast<double>(value) / maxval;
    }
  }

  const DomainSpec d = periodic ? DomainSpec::torus(width, height)
                                : DomainSpec::square(width - 1, height - 1);
  return {d, std::move(pixels)};
}

void write_pgm(const GridFunction& u, const std::string& path, int maxval) {
  if (maxval < 1 || maxval > 65535)
    throw IoError("write_pgm: maxval out of range");
  const DomainSpec& d = u.domain();
  const int width = d.n1 + 1; // torus: seam column/row duplicated
  const int height = d.n2 + 1;
  const int bytes = maxval > 255 ? 2 : 1;

  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height * bytes);
  std::size_t at = 0;
  for (int l = 0; l < height; ++l)
    for (int k = 0; k < width; ++k) {
      const double clamped = std::min(1.0, std::max(0.0, u(k, l)));
      const long q = static_cast<long>(std::nearbyint(clamped * maxval));
      if (bytes == 2) {
        raw[at++] = static_cast<unsigned char>((q >> 8) & 0xff);
        raw[at++] = static_cast<unsigned char>(q & 0xff);
      } else {
        raw[at++] = static_cast<unsigned char>(q);
      }
    }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write_pgm: cannot open '" + tmp + "'");
    out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write_pgm: write failed for '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("write_pgm: cannot rename onto '" + path + "'");
  }
}

} // namespace tvq1
