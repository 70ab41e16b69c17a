#include "tvq1/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tvq1/parallel.hpp"
#include "tvq1/quadrature.hpp"

namespace tvq1 {

namespace {

void check_counts(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("DomainSpec: cell counts must be positive");
}

} // namespace

DomainSpec DomainSpec::torus(int n1, int n2) {
  check_counts(n1, n2);
  return {Domain::PeriodicTorus, n1, n2};
}

DomainSpec DomainSpec::square(int n1, int n2) {
  check_counts(n1, n2);
  return {Domain::UnitSquare, n1, n2};
}

GridFunction::GridFunction(const DomainSpec& d, double fill)
    : domain_(d), values_(d.node_count(), fill) {}

GridFunction::GridFunction(const DomainSpec& d, std::vector<double> values)
    : domain_(d), values_(std::move(values)) {
  if (values_.size() != domain_.node_count())
    throw std::invalid_argument("GridFunction: value count does not match the node count");
  ensure_finite("GridFunction");
}

std::size_t GridFunction::flat(int k, int l) const {
  const int nx = domain_.nodes1();
  if (domain_.periodic()) {
    k = wrap_index(k, domain_.n1);
    l = wrap_index(l, domain_.n2);
  } else {
    assert(k >= 0 && k <= domain_.n1 && l >= 0 && l <= domain_.n2);
  }
  return static_cast<std::size_t>(l) * nx + k;
}

double GridFunction::value_at(NodeIndex idx) const {
  if (!domain_.periodic() &&
      (idx.k < 0 || idx.k > domain_.n1 || idx.l < 0 || idx.l > domain_.n2))
    throw std::out_of_range("GridFunction: node index outside the unit square mesh");
  return (*this)(idx.k, idx.l);
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double GridFunction::mean_value() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / values_.size();
}

void GridFunction::ensure_finite(const char* context) const {
  for (const double v : values_)
    if (!std::isfinite(v))
      throw std::runtime_error(std::string(context) + ": non-finite nodal value");
}

std::array<double, 2> node_coords(const DomainSpec& d, NodeIndex idx) {
  if (d.periodic()) {
    idx.k = wrap_index(idx.k, d.n1);
    idx.l = wrap_index(idx.l, d.n2);
  } else if (idx.k < 0 || idx.k > d.n1 || idx.l < 0 || idx.l > d.n2) {
    throw std::out_of_range("node_coords: node index outside the unit square mesh");
  }
  return {idx.k * d.h1(), idx.l * d.h2()};
}

CellRef locate(const DomainSpec& d, double x, double y) {
  if (d.periodic()) {
    x -= std::floor(x);
    y -= std::floor(y);
  } else if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("locate: point outside the unit square");
  }
  // Cell index with the lower-cell rule for points sitting on an edge.
  const auto pick = [](double c, int n) {
    int i = static_cast<int>(std::floor(c * n));
    if (i >= n) i = n - 1;
    if (i > 0 && c * n == static_cast<double>(i)) --i;
    return i;
  };
  CellRef ref;
  ref.k = pick(x, d.n1);
  ref.l = pick(y, d.n2);
  ref.s = x * d.n1 - ref.k;
  ref.t = y * d.n2 - ref.l;
  return ref;
}

double eval(const GridFunction& u, double x, double y) {
  const DomainSpec& d = u.domain();
  const CellRef c = locate(d, x, y);
  const double a = u(c.k, c.l);
  const double b = u(c.k + 1, c.l);
  const double cc = u(c.k, c.l + 1);
  const double dd = u(c.k + 1, c.l + 1);
  return (1.0 - c.t) * ((1.0 - c.s) * a + c.s * b) + c.t * ((1.0 - c.s) * cc + c.s * dd);
}

namespace {

// Exact integral of the squared bilinear over one cell, corner values
// a = (k,l), b = (k+1,l), c = (k,l+1), d = (k+1,l+1).
double cell_l2_sq(double a, double b, double c, double d) {
  return ((a * a + a * b + b * b) + (c * c + c * d + d * d)) / 9.0 +
         (2 * a * c + a * d + b * c + 2 * b * d) / 18.0;
}

double cell_l1(double a, double b, double c, double d, const GaussRule& g3) {
  const bool same_sign = (a >= 0 && b >= 0 && c >= 0 && d >= 0) ||
                         (a <= 0 && b <= 0 && c <= 0 && d <= 0);
  if (same_sign) return std::abs(a + b + c + d) / 4.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < g3.nodes.size(); ++j) {
    const double t = g3.nodes[j];
    const double lo = (1 - t) * a + t * c;
    const double hi = (1 - t) * b + t * d;
    for (std::size_t i = 0; i < g3.nodes.size(); ++i) {
      const double s = g3.nodes[i];
      acc += g3.weights[i] * g3.weights[j] * std::abs((1 - s) * lo + s * hi);
    }
  }
  return acc;
}

} // namespace

double lp_norm(const GridFunction& u, double p) {
  const DomainSpec& d = u.domain();
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (const double v : u.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (p != 1.0 && p != 2.0) throw std::invalid_argument("lp_norm: p must be 1, 2 or inf");

  const GaussRule& g3 = gauss_rule(3);
  const double cell_area = d.h1() * d.h2();
  std::vector<double> row(d.n2, 0.0);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < d.n2; ++l) {
    double acc = 0.0;
    for (int k = 0; k < d.n1; ++k) {
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      acc += (p == 2.0) ? cell_l2_sq(a, b, c, dd) : cell_l1(a, b, c, dd, g3);
    }
    row[l] = acc;
  }
  double total = 0.0;
  for (const double r : row) total += r;
  total *= cell_area;
  return p == 2.0 ? std::sqrt(total) : total;
}

double integrate_on_rect(const GridFunction& u, double x0, double x1, double y0, double y1) {
  if (!(x0 <= x1 && y0 <= y1))
    throw std::invalid_argument("integrate_on_rect: empty rectangle");
  if (x0 < 0.0 || x1 > 1.0 || y0 < 0.0 || y1 > 1.0)
    throw std::domain_error("integrate_on_rect: rectangle outside the mesh");
  const DomainSpec& d = u.domain();
  const double h1 = d.h1(), h2 = d.h2();
  const double scale = h1 * h2;

  double total = 0.0;
  int l = std::max(0, static_cast<int>(std::floor(y0 * d.n2)));
  for (; l < d.n2 && l * h2 < y1; ++l) {
    const double ylo = std::max(y0, l * h2);
    const double yhi = std::min(y1, (l + 1) * h2);
    if (yhi <= ylo) continue;
    const double t0 = std::clamp(ylo * d.n2 - l, 0.0, 1.0);
    const double t1 = std::clamp(yhi * d.n2 - l, 0.0, 1.0);
    const double dt = t1 - t0;
    const double it = 0.5 * (t1 * t1 - t0 * t0);
    int k = std::max(0, static_cast<int>(std::floor(x0 * d.n1)));
    for (; k < d.n1 && k * h1 < x1; ++k) {
      const double xlo = std::max(x0, k * h1);
      const double xhi = std::min(x1, (k + 1) * h1);
      if (xhi <= xlo) continue;
      const double s0 = std::clamp(xlo * d.n1 - k, 0.0, 1.0);
      const double s1 = std::clamp(xhi * d.n1 - k, 0.0, 1.0);
      const double ds = s1 - s0;
      const double is = 0.5 * (s1 * s1 - s0 * s0);
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      total += scale * (a * ds * dt + (b - a) * is * dt + (c - a) * ds * it +
                        (a - b - c + dd) * is * it);
    }
  }
  return total;
}

GridFunction refine(const GridFunction& u, int factor) {
  if (factor < 1) throw std::invalid_argument("refine: factor must be >= 1");
  const DomainSpec& d = u.domain();
  DomainSpec fine = d;
  fine.n1 = d.n1 * factor;
  fine.n2 = d.n2 * factor;
  GridFunction out(fine);
  const double inv = 1.0 / factor;
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int L = 0; L < fine.nodes2(); ++L) {
    const int l = std::min(L / factor, d.n2 - 1);
    const double t = (L - l * factor) * inv;
    for (int K = 0; K < fine.nodes1(); ++K) {
      const int k = std::min(K / factor, d.n1 - 1);
      const double s = (K - k * factor) * inv;
      const double a = u(k, l);
      const double b = u(k + 1, l);
      const double c = u(k, l + 1);
      const double dd = u(k + 1, l + 1);
      out.node(K, L) =
          (1 - t) * ((1 - s) * a + s * b) + t * ((1 - s) * c + s * dd);
    }
  }
  return out;
}

namespace {

void require_same_domain(const GridFunction& a, const GridFunction& b, const char* op) {
  if (!(a.domain() == b.domain()))
    throw std::invalid_argument(std::string(op) + ": mismatched domains");
}

} // namespace

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_domain(a, b, "GridFunction difference");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - b.values()[i];
  return {a.domain(), std::move(v)};
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_domain(a, b, "GridFunction sum");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + b.values()[i];
  return {a.domain(), std::move(v)};
}

GridFunction operator*(double c, const GridFunction& u) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * u.values()[i];
  return {u.domain(), std::move(v)};
}

} // namespace tvq1
