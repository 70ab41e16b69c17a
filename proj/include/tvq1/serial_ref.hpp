#pragma once

#include "tvq1/grid.hpp"

namespace tvq1::serial {

// Plain single-threaded reference implementations of the hot kernels,
// written as straight loops with naive left-to-right accumulation. Kept for
// testing the OpenMP kernels against and for the benchmark target.

double directional_variation(const GridFunction& u, int axis);

double tv_iso(const GridFunction& u, int quad_order);

double lp_norm(const GridFunction& u, double p);

// Box-average interpolation of a fine Q1 function onto the coarse mesh,
// integrating the fine function exactly (torus only).
GridFunction box_average_interpolant(const GridFunction& fine, const DomainSpec& coarse);

} // namespace tvq1::serial
