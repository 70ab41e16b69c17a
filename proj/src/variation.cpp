#include "tvq1/variation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tvq1/parallel.hpp"
#include "tvq1/quadrature.hpp"

namespace tvq1 {

double segment_abs_integral(double a, double b, double length) {
  if (!(length > 0)) throw std::invalid_argument("segment_abs_integral: length must be positive");
  if (a * b >= 0) return length * (std::abs(a) + std::abs(b)) / 2;
  // Sign change: two triangles, apex where the linear function vanishes.
  return length * (a * a + b * b) / (2 * (std::abs(a) + std::abs(b)));
}

namespace {

// Per-row accumulation combined in a fixed order, so the result does not
// depend on the worker count.
template <typename RowBody>
double accumulate_rows(int rows, RowBody&& body) {
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < rows; ++l) partial[l] = body(l);
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

} // namespace

double directional_variation(const GridFunction& u, int axis) {
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("directional_variation: axis must be 1 or 2");
  const DomainSpec& d = u.domain();
  const double h1 = d.h1(), h2 = d.h2();
  if (axis == 1) {
    return accumulate_rows(d.n2, [&](int l) {
      double acc = 0.0;
      for (int k = 0; k < d.n1; ++k) {
        const double lo = (u(k + 1, l) - u(k, l)) / h1;
        const double hi = (u(k + 1, l + 1) - u(k, l + 1)) / h1;
        if (lo != 0.0 || hi != 0.0) acc += h1 * segment_abs_integral(lo, hi, h2);
      }
      return acc;
    });
  }
  return accumulate_rows(d.n2, [&](int l) {
    double acc = 0.0;
    for (int k = 0; k < d.n1; ++k) {
      const double lo = (u(k, l + 1) - u(k, l)) / h2;
      const double hi = (u(k + 1, l + 1) - u(k + 1, l)) / h2;
      if (lo != 0.0 || hi != 0.0) acc += h2 * segment_abs_integral(lo, hi, h1);
    }
    return acc;
  });
}

double tv_iso(const GridFunction& u, int quad_order) {
  if (quad_order < 2) throw std::invalid_argument("tv_iso: quadrature order must be >= 2");
  const DomainSpec& d = u.domain();
  const GaussRule& g = gauss_rule(quad_order);
  const double h1 = d.h1(), h2 = d.h2();
  const double area = h1 * h2;
  const int q = quad_order;
  const double total = accumulate_rows(d.n2, [&](int l) {
    double acc = 0.0;
    for (int k = 0; k < d.n1; ++k) {
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      const double gx_lo = (b - a) / h1, gx_hi = (dd - c) / h1;
      const double gy_lo = (c - a) / h2, gy_hi = (dd - b) / h2;
      double cell = 0.0;
      for (int j = 0; j < q; ++j) {
        const double t = g.nodes[j];
        const double gx = (1 - t) * gx_lo + t * gx_hi;
        for (int i = 0; i < q; ++i) {
          const double s = g.nodes[i];
          const double gy = (1 - s) * gy_lo + s * gy_hi;
          cell += g.weights[i] * g.weights[j] * std::sqrt(gx * gx + gy * gy);
        }
      }
      acc += cell;
    }
    return acc;
  });
  return area * total;
}

TvBreakdown tv_breakdown(const GridFunction& u, int quad_order) {
  TvBreakdown out;
  out.v1 = directional_variation(u, 1);
  out.v2 = directional_variation(u, 2);
  out.aniso = out.v1 + out.v2;
  out.iso = tv_iso(u, quad_order);
  out.quad_order = quad_order;
  return out;
}

} // namespace tvq1
