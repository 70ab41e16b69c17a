#include "tvq1/pgm_io.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

using namespace tvq1;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/tvq1_test_") + name;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("read_pgm: P2 and P5 encodings of the same image agree") {
  const std::string p2 = temp_path("a.p2.pgm");
  const std::string p5 = temp_path("a.p5.pgm");
  write_file(p2, "P2\n# comment\n2 2\n255\n0 255\n255 0\n");
  write_file(p5, std::string("P5\n2 2\n255\n") + '\x00' + '\xff' + '\xff' + '\x00');

  const GridFunction a = read_pgm(p2);
  const GridFunction b = read_pgm(p5);
  CHECK(a.domain() == DomainSpec::square(1, 1));
  CHECK(a(0, 0) == 0.0);
  CHECK(a(1, 0) == 1.0);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(1, 1) == 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values()[i] == b.values()[i]);
}

TEST_CASE("read_pgm: 16-bit binary rasters are big-endian") {
  const std::string path = temp_path("wide.pgm");
  std::string bytes = "P5\n2 2\n65535\n";
  const unsigned char raster[] = {0x00, 0x00, 0xff, 0xff, 0x80, 0x00, 0x00, 0x01};
  bytes.append(reinterpret_cast<const char*>(raster), sizeof raster);
  write_file(path, bytes);
  const GridFunction u = read_pgm(path);
  CHECK(u(0, 0) == 0.0);
  CHECK(u(1, 0) == 1.0);
  CHECK(u(0, 1) == doctest::Approx(32768.0 / 65535.0));
  CHECK(u(1, 1) == doctest::Approx(1.0 / 65535.0));
}

TEST_CASE("read_pgm: the periodic flag maps pixels to one torus period") {
  const std::string path = temp_path("torus.pgm");
  write_file(path, "P2\n4 2\n255\n0 1 2 3\n4 5 6 7\n");
  const GridFunction u = read_pgm(path, true);
  CHECK(u.domain() == DomainSpec::torus(4, 2));
  CHECK(u(0, 0) == 0.0);
  CHECK(u(3, 1) == doctest::Approx(7.0 / 255.0));
}

TEST_CASE("read_pgm failure modes are distinct") {
  const std::string path = temp_path("bad.pgm");

  CHECK_THROWS_WITH_AS(read_pgm(temp_path("missing.pgm")),
                       doctest::Contains("cannot open"), IoError);

  write_file(path, "P6\n2 2\n255\n");
  CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("malformed header"), IoError);

  write_file(path, "P2\n1 5\n255\n0 0 0 0 0\n");
  CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("at least 2x2"), IoError);

  write_file(path, "P2\n2 2\n255\n0 255 255\n");
  CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("unexpected end of pixel data"),
                       IoError);

  write_file(path, std::string("P5\n2 2\n255\n") + '\x00' + '\x01');
  CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("unexpected end of pixel data"),
                       IoError);

  write_file(path, "P2\n2 2\n99999\n0 0 0 0\n");
  CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("maxval"), IoError);
}

TEST_CASE("write_pgm: round trip is within the quantization bound") {
  const DomainSpec s = DomainSpec::square(7, 5);
  GridFunction u = testing::random_grid(s, 99);
  const std::string path = temp_path("round.pgm");
  write_pgm(u, path);
  const GridFunction back = read_pgm(path);
  REQUIRE(back.domain() == s);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(back.values()[i] - u.values()[i]) <= 0.5 / 255 + 1e-12);
}

TEST_CASE("write_pgm: clamping and extreme levels") {
  const DomainSpec s = DomainSpec::square(1, 1);
  GridFunction u(s);
  u.node(0, 0) = -0.5; // clamps to 0
  u.node(1, 0) = 1.5;  // clamps to 1
  u.node(0, 1) = 0.0;
  u.node(1, 1) = 1.0;
  const std::string path = temp_path("clamp.pgm");
  write_pgm(u, path);
  const std::string bytes = read_file(path);
  const std::string raster = bytes.substr(bytes.size() - 4);
  CHECK(static_cast<unsigned char>(raster[0]) == 0);
  CHECK(static_cast<unsigned char>(raster[1]) == 255);
  CHECK(static_cast<unsigned char>(raster[2]) == 0);
  CHECK(static_cast<unsigned char>(raster[3]) == 255);
}

TEST_CASE("write_pgm rounds half to even") {
  const DomainSpec s = DomainSpec::square(1, 1);
  GridFunction u(s);
  u.node(0, 0) = 0.5 / 255.0; // exactly between 0 and 1 -> 0
  u.node(1, 0) = 1.5 / 255.0; // exactly between 1 and 2 -> 2
  u.node(0, 1) = 0.0;
  u.node(1, 1) = 0.0;
  const std::string path = temp_path("halfeven.pgm");
  write_pgm(u, path);
  const std::string bytes = read_file(path);
  const std::string raster = bytes.substr(bytes.size() - 4);
  CHECK(static_cast<unsigned char>(raster[0]) == 0);
  CHECK(static_cast<unsigned char>(raster[1]) == 2);
}

TEST_CASE("write_pgm duplicates the torus seam") {
  const DomainSpec t = DomainSpec::torus(3, 2);
  const GridFunction u = testing::random_grid(t, 4);
  const std::string path = temp_path("seam.pgm");
  write_pgm(u, path);
  const GridFunction back = read_pgm(path); // 4x3 pixels -> 3x2 square cells
  CHECK(back.domain() == DomainSpec::square(3, 2));
  CHECK(std::abs(back(0, 0) - back(3, 0)) <= 1.0 / 255 + 1e-12); // seam column copies
  CHECK(std::abs(back(1, 0) - u(1, 0)) <= 0.5 / 255 + 1e-12);
}

TEST_CASE("write_pgm leaves no partial file on failure") {
  const DomainSpec s = DomainSpec::square(2, 2);
  const GridFunction u(s, 0.5);
  const std::string path = "/nonexistent-dir/out.pgm";
  CHECK_THROWS_AS(write_pgm(u, path), IoError);
  std::ifstream probe(path);
  CHECK(!probe.good());
}
