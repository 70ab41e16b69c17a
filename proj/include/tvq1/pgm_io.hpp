#pragma once

#include <stdexcept>
#include <string>

#include "tvq1/grid.hpp"

namespace tvq1 {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a P2 (ASCII) or P5 (binary) PGM image, maxval <= 65535. Pixel values
// scale to [0,1] nodal values; a W x H image maps to the unit square with
// W-1 x H-1 cells, or (with periodic=true) to the torus with W x H cells,
// the pixel grid being one period.
GridFunction read_pgm(const std::string& path, bool periodic = false);

// Writes binary (P5) PGM. Values are clamped to [0,1] and rounded
// half-to-even onto 0..maxval. A torus function is unrolled with the seam
// column and row duplicated. The file appears atomically (temp + rename).
void write_pgm(const GridFunction& u, const std::string& path, int maxval = 255);

} // namespace tvq1
