#include "tvq1/serial_ref.hpp"

#include <cmath>
#include <stdexcept>

#include "tvq1/quadrature.hpp"
#include "tvq1/variation.hpp"

namespace tvq1::serial {

double directional_variation(const GridFunction& u, int axis) {
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("serial::directional_variation: axis must be 1 or 2");
  const DomainSpec& d = u.domain();
  const double h1 = d.h1(), h2 = d.h2();
  double total = 0.0;
  for (int l = 0; l < d.n2; ++l)
    for (int k = 0; k < d.n1; ++k) {
      if (axis == 1) {
        const double lo = (u(k + 1, l) - u(k, l)) / h1;
        const double hi = (u(k + 1, l + 1) - u(k, l + 1)) / h1;
        if (lo != 0.0 || hi != 0.0) total += h1 * segment_abs_integral(lo, hi, h2);
      } else {
        const double lo = (u(k, l + 1) - u(k, l)) / h2;
        const double hi = (u(k + 1, l + 1) - u(k + 1, l)) / h2;
        if (lo != 0.0 || hi != 0.0) total += h2 * segment_abs_integral(lo, hi, h1);
      }
    }
  return total;
}

double tv_iso(const GridFunction& u, int quad_order) {
  if (quad_order < 2)
    throw std::invalid_argument("serial::tv_iso: quadrature order must be >= 2");
  const DomainSpec& d = u.domain();
  const GaussRule& g = gauss_rule(quad_order);
  const double h1 = d.h1(), h2 = d.h2();
  double total = 0.0;
  for (int l = 0; l < d.n2; ++l)
    for (int k = 0; k < d.n1; ++k) {
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      for (int j = 0; j < quad_order; ++j) {
        const double t = g.nodes[j];
        const double gx = ((1 - t) * (b - a) + t * (dd - c)) / h1;
        for (int i = 0; i < quad_order; ++i) {
          const double s = g.nodes[i];
          const double gy = ((1 - s) * (c - a) + s * (dd - b)) / h2;
          total += g.weights[i] * g.weights[j] * std::sqrt(gx * gx + gy * gy);
        }
      }
    }
  return total * h1 * h2;
}

double lp_norm(const GridFunction& u, double p) {
  const DomainSpec& d = u.domain();
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (const double v : u.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (p != 1.0 && p != 2.0)
    throw std::invalid_argument("serial::lp_norm: p must be 1, 2 or inf");
  const GaussRule& g3 = gauss_rule(3);
  double total = 0.0;
  for (int l = 0; l < d.n2; ++l)
    for (int k = 0; k < d.n1; ++k) {
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      if (p == 2.0) {
        total += ((a * a + a * b + b * b) + (c * c + c * dd + dd * dd)) / 9.0 +
                 (2 * a * c + a * dd + b * c + 2 * b * dd) / 18.0;
      } else {
        const bool same_sign =
            (a >= 0 && b >= 0 && c >= 0 && dd >= 0) || (a <= 0 && b <= 0 && c <= 0 && dd <= 0);
        if (same_sign) {
          total += std::abs(a + b + c + dd) / 4.0;
        } else {
          for (std::size_t j = 0; j < g3.nodes.size(); ++j)
            for (std::size_t i = 0; i < g3.nodes.size(); ++i) {
              const double s = g3.nodes[i], t = g3.nodes[j];
              const double v = (1 - t) * ((1 - s) * a + s * b) + t * ((1 - s) * c + s * dd);
              total += g3.weights[i] * g3.weights[j] * std::abs(v);
            }
        }
      }
    }
  total *= d.h1() * d.h2();
  return p == 2.0 ? std::sqrt(total) : total;
}

GridFunction box_average_interpolant(const GridFunction& fine, const DomainSpec& coarse) {
  if (!coarse.periodic())
    throw std::invalid_argument("serial::box_average_interpolant: mesh must be a torus");
  if (fine.domain().n1 % coarse.n1 != 0 || fine.domain().n2 % coarse.n2 != 0)
    throw std::invalid_argument("serial::box_average_interpolant: incompatible fine mesh");
  const double a = coarse.h1() / 2, b = coarse.h2() / 2;
  GridFunction out(coarse);
  for (int l = 0; l < coarse.nodes2(); ++l)
    for (int k = 0; k < coarse.nodes1(); ++k) {
      const double cx = k * coarse.h1(), cy = l * coarse.h2();
      // Split the (possibly wrapping) box into in-range rectangles.
      const auto split = [](double lo, double hi, double seg[2][2]) {
        if (lo < 0) {
          seg[0][0] = lo + 1; seg[0][1] = 1; seg[1][0] = 0; seg[1][1] = hi;
          return 2;
        }
        if (hi > 1) {
          seg[0][0] = lo; seg[0][1] = 1; seg[1][0] = 0; seg[1][1] = hi - 1;
          return 2;
        }
        seg[0][0] = lo; seg[0][1] = hi;
        return 1;
      };
      double sx[2][2], sy[2][2];
      const int nx = split(cx - a, cx + a, sx);
      const int ny = split(cy - b, cy + b, sy);
      double integral = 0.0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          if (sx[i][1] <= sx[i][0] || sy[j][1] <= sy[j][0]) continue;
          integral += integrate_on_rect(fine, sx[i][0], sx[i][1], sy[j][0], sy[j][1]);
        }
      out.node(k, l) = integral / (4 * a * b);
    }
  return out;
}

} // namespace tvq1::serial
