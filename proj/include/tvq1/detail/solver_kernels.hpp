#pragma once

// Internal building blocks of the ROF solver, kept in a header so the test
// suite can pin them against dense linear-algebra oracles.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvq1/grid.hpp"
#include "tvq1/parallel.hpp"
#include "tvq1/quadrature.hpp"

namespace tvq1::detail {

class MassSolver1D {
 public:
  MassSolver1D() = default;

  MassSolver1D(int n_nodes, double h, bool periodic) : n_(n_nodes), periodic_(periodic) {
    const double off = h / 6.0;
    std::vector<double> diag;
    if (periodic_) {
      if (n_ == 1) {
        scalar_ = h; // single periodic node: the basis is the constant 1
        return;
      }
      if (n_ == 2) {
        // Both elements couple the same node pair, doubling the off entry.
        dense_ = {2 * h / 3.0, 2 * off};
        return;
      }
      diag.assign(n_, 2 * h / 3.0);
      // Sherman-Morrison split: remove a rank-one piece so the core matrix
      // is strictly tridiagonal.
      gamma_ = -diag[0];
      corner_ = off;
      diag[0] -= gamma_;
      diag[n_ - 1] -= off * off / gamma_;
      factor(diag, off);
      // Precompute T^{-1} u for the rank-one correction vector u.
      z_.assign(n_, 0.0);
      z_[0] = gamma_;
      z_[n_ - 1] = off;
      thomas(z_.data(), 1);
    } else {
      diag.assign(n_, 2 * h / 3.0);
      diag.front() = h / 3.0;
      diag.back() = h / 3.0;
      if (n_ == 1) {
        scalar_ = diag[0];
        return;
      }
      factor(diag, off);
    }
  }

  void solve(double* x, int stride) const {
    if (n_ == 1) {
      x[0] /= scalar_;
      return;
    }
    if (periodic_ && n_ == 2) {
      const double a = dense_[0], b = dense_[1];
      const double det = a * a - b * b;
      const double r0 = x[0], r1 = x[stride];
      x[0] = (a * r0 - b * r1) / det;
      x[stride] = (a * r1 - b * r0) / det;
      return;
    }
    thomas(x, stride);
    if (periodic_) {
      const double vy = x[0] + (corner_ / gamma_) * x[(n_ - 1) * stride];
      const double vz = z_[0] + (corner_ / gamma_) * z_[n_ - 1];
      const double s = vy / (1.0 + vz);
      for (int i = 0; i < n_; ++i) x[i * stride] -= s * z_[i];
    }
  }

  int size() const { return n_; }

 private:
  void factor(const std::vector<double>& diag, double off) {
    off_ = off;
    cp_.assign(n_, 0.0);
    inv_.assign(n_, 0.0);
    inv_[0] = 1.0 / diag[0];
    cp_[0] = off * inv_[0];
    for (int i = 1; i < n_; ++i) {
      inv_[i] = 1.0 / (diag[i] - off * cp_[i - 1]);
      cp_[i] = off * inv_[i];
    }
  }

  void thomas(double* x, int stride) const {
    x[0] *= inv_[0];
    for (int i = 1; i < n_; ++i)
      x[i * stride] = (x[i * stride] - off_ * x[(i - 1) * stride]) * inv_[i];
    for (int i = n_ - 2; i >= 0; --i) x[i * stride] -= cp_[i] * x[(i + 1) * stride];
  }

  int n_ = 0;
  bool periodic_ = false;
  double off_ = 0;
  double scalar_ = 1;
  double gamma_ = 0, corner_ = 0;
  std::array<double, 2> dense_{};
  std::vector<double> cp_, inv_, z_;
};

class MassSolver2D {
 public:
  explicit MassSolver2D(const DomainSpec& d)
      : nx_(d.nodes1()), ny_(d.nodes2()),
        along_x_(d.nodes1(), d.h1(), d.periodic()),
        along_y_(d.nodes2(), d.h2(), d.periodic()) {}

  // In-place solve of (My (x) Mx) w = rhs for nodal vectors.
  void solve(std::vector<double>& v) const {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < ny_; ++l) along_x_.solve(v.data() + static_cast<std::size_t>(l) * nx_, 1);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int k = 0; k < nx_; ++k) along_y_.solve(v.data() + k, nx_);
  }

 private:
  int nx_, ny_;
  MassSolver1D along_x_, along_y_;
};

// ---------------------------------------------------------------------------
// The gradient sampling operator: nodal values -> sqrt(omega_P) (d1 u, d2 u)
// at the tensor Gauss points of every cell, omega_P being the quadrature
// weight of the point. With the square root folded in symmetrically,
// K^T K is exactly the Q1 stiffness matrix, so ||K|| in the mass metric
// scales like 1/h (raw samples with the weights kept on the dual side would
// square that and cripple the step sizes). The Gauss TV is
// sum_P sqrt(omega_P) |(K u)_P| and the dual disks have radius sqrt(omega_P).

class GradientSampler {
 public:
  GradientSampler(const DomainSpec& d, int quad_order) : d_(d), q_(quad_order) {
    if (quad_order < 2)
      throw std::invalid_argument("rof_minimize: quadrature order must be >= 2");
    const GaussRule& rule = gauss_rule(q_);
    nodes_ = rule.nodes;
    weights_ = rule.weights;
    point_scale_.resize(static_cast<std::size_t>(q_) * q_);
    for (int j = 0; j < q_; ++j)
      for (int i = 0; i < q_; ++i)
        point_scale_[j * q_ + i] =
            std::sqrt(d_.h1() * d_.h2() * weights_[i] * weights_[j]);
  }

  // sqrt of the quadrature weight of in-cell point p; also the dual radius.
  double dual_radius(int p) const { return point_scale_[p]; }

  std::size_t num_points() const { return d_.cell_count() * q_ * q_; }
  std::size_t num_values() const { return 2 * num_points(); }
  const DomainSpec& domain() const { return d_; }
  int quad_order() const { return q_; }

  void apply(std::span<const double> u, std::span<double> g) const {
    const int n1 = d_.n1, n2 = d_.n2;
    const int nx = d_.nodes1();
    const double inv_h1 = n1, inv_h2 = n2;
    const int pp = q_ * q_;
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < n2; ++l) {
      const int lp = d_.periodic() ? (l + 1) % n2 : l + 1;
      for (int k = 0; k < n1; ++k) {
        const int kp = d_.periodic() ? (k + 1) % n1 : k + 1;
        const double a = u[idx(k, l, nx)];
        const double b = u[idx(kp, l, nx)];
        const double c = u[idx(k, lp, nx)];
        const double dd = u[idx(kp, lp, nx)];
        double* out = &g[(static_cast<std::size_t>(l) * n1 + k) * pp * 2];
        for (int j = 0; j < q_; ++j) {
          const double t = nodes_[j];
          const double gx = ((1 - t) * (b - a) + t * (dd - c)) * inv_h1;
          for (int i = 0; i < q_; ++i) {
            const double s = nodes_[i];
            const double w = point_scale_[j * q_ + i];
            out[(j * q_ + i) * 2] = w * gx;
            out[(j * q_ + i) * 2 + 1] = w * (((1 - s) * (c - a) + s * (dd - b)) * inv_h2);
          }
        }
      }
    }
  }

  // Gather form of K^T: every node collects the coefficients of the cells it
  // belongs to, in a fixed order, so the result is worker-count invariant.
  void apply_adjoint(std::span<const double> g, std::span<double> out) const {
    const int n1 = d_.n1, n2 = d_.n2;
    const int nx = d_.nodes1(), ny = d_.nodes2();
    const double inv_h1 = n1, inv_h2 = n2;
    const int pp = q_ * q_;
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < ny; ++l) {
      for (int k = 0; k < nx; ++k) {
        double acc = 0.0;
        // Role of this node in each incident cell: (dk, dl) is the cell
        // offset, (cs, ct) the local corner coordinates there.
        for (int role = 0; role < 4; ++role) {
          const int dk = role & 1;        // 1 when the node is the +x corner
          const int dl = (role >> 1) & 1; // 1 when the node is the +y corner
          int ck = k - dk, cl = l - dl;
          if (d_.periodic()) {
            ck = wrap_index(ck, n1);
            cl = wrap_index(cl, n2);
          } else if (ck < 0 || ck >= n1 || cl < 0 || cl >= n2) {
            continue;
          }
          const double* gp = &g[(static_cast<std::size_t>(cl) * n1 + ck) * pp * 2];
          const double sx = dk ? 1.0 : -1.0;
          const double sy = dl ? 1.0 : -1.0;
          for (int j = 0; j < q_; ++j) {
            const double t = nodes_[j];
            const double cx = sx * (dl ? t : 1 - t) * inv_h1;
            for (int i = 0; i < q_; ++i) {
              const double s = nodes_[i];
              const double cy = sy * (dk ? s : 1 - s) * inv_h2;
              const double w = point_scale_[j * q_ + i];
              acc += w * (cx * gp[(j * q_ + i) * 2] + cy * gp[(j * q_ + i) * 2 + 1]);
            }
          }
        }
        out[idx(k, l, nx)] = acc;
      }
    }
  }

  // sum_P sqrt(omega_P) |g_P| over scaled samples: the Gauss-discretized TV.
  double tv_value(std::span<const double> g) const {
    const int n1 = d_.n1, n2 = d_.n2;
    const int pp = q_ * q_;
    std::vector<double> partial(n2, 0.0);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < n2; ++l) {
      double acc = 0.0;
      for (int k = 0; k < n1; ++k) {
        const double* gp = &g[(static_cast<std::size_t>(l) * n1 + k) * pp * 2];
        for (int p = 0; p < pp; ++p)
          acc += point_scale_[p] *
                 std::sqrt(gp[2 * p] * gp[2 * p] + gp[2 * p + 1] * gp[2 * p + 1]);
      }
      partial[l] = acc;
    }
    double total = 0.0;
    for (const double v : partial) total += v;
    return total;
  }

  // Project every dual point onto its disk of radius sqrt(omega_P).
  void project_dual(std::span<double> p) const {
    const int n1 = d_.n1, n2 = d_.n2;
    const int pp = q_ * q_;
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int l = 0; l < n2; ++l)
      for (int k = 0; k < n1; ++k) {
        double* dp = &p[(static_cast<std::size_t>(l) * n1 + k) * pp * 2];
        for (int j = 0; j < pp; ++j) {
          const double r = point_scale_[j];
          const double nrm = std::sqrt(dp[2 * j] * dp[2 * j] + dp[2 * j + 1] * dp[2 * j + 1]);
          if (nrm > r) {
            const double scale = r / nrm;
            dp[2 * j] *= scale;
            dp[2 * j + 1] *= scale;
          }
        }
      }
  }

 private:
  static std::size_t idx(int k, int l, int nx) {
    return static_cast<std::size_t>(l) * nx + k;
  }

  DomainSpec d_;
  int q_;
  std::vector<double> nodes_, weights_, point_scale_;
};

// ---------------------------------------------------------------------------
// Worker-count-invariant reductions: fixed-size chunk partials combined in
// order.

inline double dot(std::span<const double> a, std::span<const double> b) {
  constexpr std::size_t chunk = 8192;
  const std::size_t n = a.size();
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += a[i] * b[i];
    partial[c] = acc;
  }
  double total = 0.0;
  for (const double v : partial) total += v;
  return total;
}

// Exact ||u - f||^2 in L2 of the Q1 space (per-cell closed form).
inline double l2_sq_diff(std::span<const double> u, std::span<const double> f,
                  const DomainSpec& d) {
  const int n1 = d.n1, n2 = d.n2, nx = d.nodes1();
  std::vector<double> partial(n2, 0.0);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < n2; ++l) {
    const int lp = d.periodic() ? (l + 1) % n2 : l + 1;
    double acc = 0.0;
    for (int k = 0; k < n1; ++k) {
      const int kp = d.periodic() ? (k + 1) % n1 : k + 1;
      const auto at = [&](int kk, int ll) {
        const std::size_t i = static_cast<std::size_t>(ll) * nx + kk;
        return u[i] - f[i];
      };
      const double a = at(k, l), b = at(kp, l), c = at(k, lp), dd = at(kp, lp);
      acc += ((a * a + a * b + b * b) + (c * c + c * dd + dd * dd)) / 9.0 +
             (2 * a * c + a * dd + b * c + 2 * b * dd) / 18.0;
    }
    partial[l] = acc;
  }
  double total = 0.0;
  for (const double v : partial) total += v;
  return total * d.h1() * d.h2();
}

// Operator norm of K in the mass metric: power iteration on K M^{-1} K^T,
// which shares its spectrum with M^{-1} K^T K but needs Euclidean norms only.
inline double operator_norm(const GradientSampler& K, const MassSolver2D& mass) {
  std::vector<double> z(K.num_values());
  std::uint64_t state = 0x2545f4914f6cdd1dull;
  for (double& v : z) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }
  std::vector<double> kt(K.domain().node_count());
  std::vector<double> w;
  double lambda = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double nrm = std::sqrt(dot(z, z));
    if (nrm == 0.0) break;
    for (double& v : z) v /= nrm;
    K.apply_adjoint(z, kt);
    w = kt;
    mass.solve(w);
    std::vector<double> z2(z.size());
    K.apply(w, z2);
    lambda = dot(z, z2);
    z.swap(z2);
  }
  return std::sqrt(std::max(lambda, 0.0));
}


} // namespace tvq1::detail
