#pragma once

#include <functional>

#include "tvq1/grid.hpp"

namespace tvq1 {

// A function to be interpolated: either an analytic callable, integrated by
// composite midpoint quadrature with quad_res points per box axis, or a grid
// function on a compatibly finer mesh, integrated exactly. Discontinuous
// analytic inputs are the caller's responsibility: raise quad_res or supply
// a fine-grid rendering.
class InputField {
 public:
  using Callable = std::function<double(double, double)>;

  static InputField analytic(Callable f, int quad_res = 16);
  static InputField fine_grid(GridFunction u);

  bool is_analytic() const { return static_cast<bool>(f_); }
  int quad_res() const { return quad_res_; }
  const Callable& callable() const;
  const GridFunction& grid() const;

  // Pointwise value; fine-grid fields evaluate their Q1 interpolant.
  double operator()(double x, double y) const;

  // Kind compatibility with a target mesh; fine-grid cell counts must be
  // integer multiples of the target's.
  void require_compatible(const DomainSpec& target) const;

 private:
  InputField() = default;
  Callable f_;
  int quad_res_ = 0;
  GridFunction grid_;
  bool has_grid_ = false;
};

// Nodal interpolation u(z) = w(z): the baseline (non-TVD) comparator.
GridFunction lagrange_interpolate(const InputField& w, const DomainSpec& d);

} // namespace tvq1
