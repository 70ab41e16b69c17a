#include "tvq1/interpolate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tvq1/parallel.hpp"

namespace tvq1 {

namespace {

// Composite midpoint mean of a callable over [cx-a,cx+a] x [cy-b,cy+b] with
// m x m panels. Torus coordinates wrap into [0,1) before evaluation.
double box_mean_midpoint(const InputField::Callable& f, int m, double cx, double cy,
                         double a, double b, bool wrap) {
  const double dx = 2 * a / m;
  const double dy = 2 * b / m;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    double y = cy - b + (j + 0.5) * dy;
    if (wrap) y -= std::floor(y);
    double row = 0.0;
    for (int i = 0; i < m; ++i) {
      double x = cx - a + (i + 0.5) * dx;
      if (wrap) x -= std::floor(x);
      row += f(x, y);
    }
    acc += row;
  }
  return acc / (static_cast<double>(m) * m);
}

// Midpoint mean over an explicit rectangle (used for clipped boundary boxes).
double rect_mean_midpoint(const InputField::Callable& f, int m, double x0, double x1,
                          double y0, double y1) {
  const double dx = (x1 - x0) / m;
  const double dy = (y1 - y0) / m;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double y = y0 + (j + 0.5) * dy;
    double row = 0.0;
    for (int i = 0; i < m; ++i) row += f(x0 + (i + 0.5) * dx, y);
    acc += row;
  }
  return acc / (static_cast<double>(m) * m);
}

struct Segment {
  double lo, hi;
};

// Split [lo,hi] (length <= 1) into its periodic parts within [0,1].
int split_periodic(double lo, double hi, std::array<Segment, 2>& parts) {
  if (lo < 0.0) {
    parts[0] = {lo + 1.0, 1.0};
    parts[1] = {0.0, hi};
    return 2;
  }
  if (hi > 1.0) {
    parts[0] = {lo, 1.0};
    parts[1] = {0.0, hi - 1.0};
    return 2;
  }
  parts[0] = {lo, hi};
  return 1;
}

// Exact integral of a fine-mesh Q1 function over a box that may wrap.
double box_integral_fine(const GridFunction& fine, double cx, double cy, double a,
                         double b, bool wrap) {
  std::array<Segment, 2> xs, ys;
  int nx = 1, ny = 1;
  if (wrap) {
    nx = split_periodic(cx - a, cx + a, xs);
    ny = split_periodic(cy - b, cy + b, ys);
  } else {
    xs[0] = {cx - a, cx + a};
    ys[0] = {cy - b, cy + b};
  }
  double acc = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (xs[i].hi <= xs[i].lo || ys[j].hi <= ys[j].lo) continue;
      acc += integrate_on_rect(fine, xs[i].lo, xs[i].hi, ys[j].lo, ys[j].hi);
    }
  return acc;
}

double box_mean(const InputField& w, const DomainSpec& d, double cx, double cy) {
  const Kernel ker = Kernel::for_mesh(d);
  if (w.is_analytic())
    return box_mean_midpoint(w.callable(), w.quad_res(), cx, cy, ker.half1, ker.half2,
                             d.periodic());
  return box_integral_fine(w.grid(), cx, cy, ker.half1, ker.half2, d.periodic()) /
         ker.area();
}

NodeIndex canonical_index(const DomainSpec& d, NodeIndex idx) {
  if (d.periodic()) return {wrap_index(idx.k, d.n1), wrap_index(idx.l, d.n2)};
  if (idx.k < 0 || idx.k > d.n1 || idx.l < 0 || idx.l > d.n2)
    throw std::out_of_range("averaged_nodal_value: node outside the mesh");
  return idx;
}

bool boundary_node(const DomainSpec& d, NodeIndex idx) {
  return idx.k == 0 || idx.k == d.n1 || idx.l == 0 || idx.l == d.n2;
}

} // namespace

double averaged_nodal_value(const InputField& w, const DomainSpec& d, NodeIndex idx) {
  w.require_compatible(d);
  idx = canonical_index(d, idx);
  if (!d.periodic() && boundary_node(d, idx))
    throw std::domain_error(
        "averaged_nodal_value: boundary node on the unit square; "
        "use the clipped or homothetic interpolant");
  const auto z = node_coords(d, idx);
  return box_mean(w, d, z[0], z[1]);
}

GridFunction box_average_interpolant(const InputField& w, const DomainSpec& d) {
  if (!d.periodic())
    throw std::invalid_argument("box_average_interpolant: mesh must be a torus");
  w.require_compatible(d);
  GridFunction out(d);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < d.nodes2(); ++l)
    for (int k = 0; k < d.nodes1(); ++k) out.node(k, l) = box_mean(w, d, k * d.h1(), l * d.h2());
  out.ensure_finite("box_average_interpolant");
  return out;
}

GridFunction homothetic_interpolant(const InputField& w, const DomainSpec& d,
                                    HomotheticParams p) {
  if (d.periodic())
    throw std::invalid_argument("homothetic_interpolant: mesh must be the unit square");
  if (!(p.epsilon > 0))
    throw std::invalid_argument("homothetic_interpolant: epsilon must be positive");
  w.require_compatible(d);

  const double scale = 1.0 + 2.0 * p.epsilon;
  const Kernel ker = Kernel::for_mesh(d);
  GridFunction out(d);

  if (w.is_analytic()) {
    // Rescaled-dilated field, evaluated by mapping sample points back into
    // the unit square; every kernel box lies inside the dilated domain.
    const auto& f = w.callable();
    const auto dilated = [&](double y1, double y2) {
      return f((y1 + p.epsilon) / scale, (y2 + p.epsilon) / scale) / scale;
    };
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < d.nodes2(); ++l)
      for (int k = 0; k < d.nodes1(); ++k)
        out.node(k, l) = box_mean_midpoint(dilated, w.quad_res(), k * d.h1(), l * d.h2(),
                                           ker.half1, ker.half2, /*wrap=*/false);
  } else {
    // Change of variables: the box mean of the dilated field equals
    // scale / |Q| times the exact integral over the mapped rectangle.
    const GridFunction& fine = w.grid();
    const auto map = [&](double v) { return std::clamp((v + p.epsilon) / scale, 0.0, 1.0); };
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < d.nodes2(); ++l)
      for (int k = 0; k < d.nodes1(); ++k) {
        const double cx = k * d.h1(), cy = l * d.h2();
        const double integral =
            integrate_on_rect(fine, map(cx - ker.half1), map(cx + ker.half1),
                              map(cy - ker.half2), map(cy + ker.half2));
        out.node(k, l) = scale * integral / ker.area();
      }
  }
  out.ensure_finite("homothetic_interpolant");
  return out;
}

GridFunction homothetic_interpolant(const InputField& w, const DomainSpec& d) {
  return homothetic_interpolant(w, d, HomotheticParams::for_mesh(d));
}

GridFunction clipped_average_interpolant(const InputField& w, const DomainSpec& d) {
  if (d.periodic())
    throw std::invalid_argument("clipped_average_interpolant: mesh must be the unit square");
  w.require_compatible(d);
  const Kernel ker = Kernel::for_mesh(d);
  GridFunction out(d);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < d.nodes2(); ++l)
    for (int k = 0; k < d.nodes1(); ++k) {
      const double cx = k * d.h1(), cy = l * d.h2();
      if (!boundary_node(d, {k, l})) {
        out.node(k, l) = box_mean(w, d, cx, cy);
        continue;
      }
      const double x0 = std::max(0.0, cx - ker.half1);
      const double x1 = std::min(1.0, cx + ker.half1);
      const double y0 = std::max(0.0, cy - ker.half2);
      const double y1 = std::min(1.0, cy + ker.half2);
      if (w.is_analytic()) {
        out.node(k, l) = rect_mean_midpoint(w.callable(), w.quad_res(), x0, x1, y0, y1);
      } else {
        out.node(k, l) =
            integrate_on_rect(w.grid(), x0, x1, y0, y1) / ((x1 - x0) * (y1 - y0));
      }
    }
  out.ensure_finite("clipped_average_interpolant");
  return out;
}

} // namespace tvq1
