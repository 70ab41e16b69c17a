#pragma once

#include "tvq1/grid.hpp"

namespace tvq1 {

// Exact integral of |a + (b-a) t/length| over t in [0,length]: the per-cell
// building block of the directional variation of a Q1 function.
double segment_abs_integral(double a, double b, double length);

// Exact directional variation: the integral of |d_i u| over the domain for
// the Q1 function u, axis i in {1,2}. On each cell d_1 u is constant along
// x1 and linear along x2, so the cell contribution is closed-form.
double directional_variation(const GridFunction& u, int axis);

// Isotropic total variation: tensor Gauss quadrature of |grad u| with
// quad_order^2 points per cell. Deterministic for a fixed order.
double tv_iso(const GridFunction& u, int quad_order = 4);

// Bundle of the variation quantities of one grid function.
struct TvBreakdown {
  double v1 = 0;    // exact integral of |d_1 u|
  double v2 = 0;    // exact integral of |d_2 u|
  double aniso = 0; // v1 + v2
  double iso = 0;   // quadrature value of the isotropic TV
  int quad_order = 0;
};

TvBreakdown tv_breakdown(const GridFunction& u, int quad_order = 4);

} // namespace tvq1
