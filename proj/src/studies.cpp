#include "tvq1/studies.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tvq1/quadrature.hpp"
#include "tvq1/variation.hpp"

namespace tvq1 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void require_dyadic(const std::vector<int>& mesh_sizes, std::size_t min_len) {
  if (mesh_sizes.size() < min_len)
    throw std::invalid_argument("study: need at least " + std::to_string(min_len) +
                                " mesh sizes");
  for (std::size_t i = 0; i < mesh_sizes.size(); ++i) {
    if (mesh_sizes[i] < 1) throw std::invalid_argument("study: mesh sizes must be positive");
    if (i > 0 && mesh_sizes[i] != 2 * mesh_sizes[i - 1])
      throw std::invalid_argument("study: mesh sizes must increase dyadically");
  }
}

DomainSpec make_domain(Domain kind, int n) {
  return kind == Domain::PeriodicTorus ? DomainSpec::torus(n, n) : DomainSpec::square(n, n);
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

const char* interpolant_name(Interpolant op) {
  switch (op) {
    case Interpolant::Box: return "box";
    case Interpolant::Homothetic: return "homothetic";
    case Interpolant::Clipped: return "clipped";
    case Interpolant::Lagrange: return "lagrange";
  }
  return "?";
}

std::optional<Interpolant> parse_interpolant(const std::string& name) {
  if (name == "box") return Interpolant::Box;
  if (name == "homothetic") return Interpolant::Homothetic;
  if (name == "clipped") return Interpolant::Clipped;
  if (name == "lagrange") return Interpolant::Lagrange;
  return std::nullopt;
}

GridFunction apply_interpolant(Interpolant op, const InputField& w, const DomainSpec& d) {
  switch (op) {
    case Interpolant::Box: return box_average_interpolant(w, d);
    case Interpolant::Homothetic: return homothetic_interpolant(w, d);
    case Interpolant::Clipped: return clipped_average_interpolant(w, d);
    case Interpolant::Lagrange: return lagrange_interpolate(w, d);
  }
  throw std::logic_error("apply_interpolant: unknown operator");
}

// ---------------------------------------------------------------------------
// Shapes

TestShape TestShape::constant(double c) {
  TestShape s;
  s.kind = Kind::Constant;
  s.name = "constant";
  s.value = c;
  s.known_tv = 0.0;
  s.known_linf = std::abs(c);
  return s;
}

TestShape TestShape::affine(double offset, double sx, double sy) {
  TestShape s;
  s.kind = Kind::Affine;
  s.name = "affine";
  s.value = offset;
  s.slope_x = sx;
  s.slope_y = sy;
  s.known_tv = std::sqrt(sx * sx + sy * sy); // unit square
  return s;
}

TestShape TestShape::smooth_sine() {
  TestShape s;
  s.kind = Kind::SmoothSine;
  s.name = "smooth_sine";
  s.known_linf = 1.0;
  return s;
}

TestShape TestShape::disk(double r, std::array<double, 2> center) {
  TestShape s;
  s.kind = Kind::DiskIndicator;
  s.name = "disk";
  s.radius = r;
  s.center = center;
  s.known_tv = 2 * M_PI * r;
  s.known_linf = 1.0;
  return s;
}

TestShape TestShape::half_plane(int axis, double threshold, Domain kind) {
  TestShape s;
  s.kind = Kind::HalfPlane;
  s.name = "half_plane";
  s.axis = axis;
  s.threshold = threshold;
  // Two jump lines on the torus (the set wraps), one on the square.
  s.known_tv = (kind == Domain::PeriodicTorus) ? 2.0 : 1.0;
  s.known_linf = 1.0;
  return s;
}

TestShape TestShape::random_fine(std::uint64_t seed, int n_fine) {
  TestShape s;
  s.kind = Kind::RandomFine;
  s.name = "random_fine";
  s.seed = seed;
  s.n_fine = n_fine;
  s.known_linf = 1.0;
  return s;
}

double TestShape::operator()(double x, double y) const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::Affine: return value + slope_x * x + slope_y * y;
    case Kind::SmoothSine: return std::sin(2 * M_PI * x) * std::sin(2 * M_PI * y);
    case Kind::DiskIndicator: {
      const double dx = x - center[0], dy = y - center[1];
      return dx * dx + dy * dy < radius * radius ? 1.0 : 0.0;
    }
    case Kind::HalfPlane: return ((axis == 1 ? x : y) < threshold) ? 1.0 : 0.0;
    case Kind::RandomFine: break;
  }
  throw std::logic_error("TestShape: not an analytic shape");
}

InputField TestShape::render(const DomainSpec& target, int quad_res) const {
  if (kind == Kind::RandomFine) {
    if (n_fine % target.n1 != 0 || n_fine % target.n2 != 0)
      throw std::invalid_argument("TestShape: fine resolution must refine the target mesh");
    DomainSpec fine = target;
    fine.n1 = fine.n2 = n_fine;
    return InputField::fine_grid(random_nodal_field(fine, seed));
  }
  const TestShape copy = *this;
  return InputField::analytic([copy](double x, double y) { return copy(x, y); }, quad_res);
}

bool TestShape::straddles(double x0, double x1, double y0, double y1) const {
  switch (kind) {
    case Kind::DiskIndicator: {
      const double cx = std::clamp(center[0], x0, x1);
      const double cy = std::clamp(center[1], y0, y1);
      const double near2 = (cx - center[0]) * (cx - center[0]) +
                           (cy - center[1]) * (cy - center[1]);
      double far2 = 0;
      for (const double xx : {x0, x1})
        for (const double yy : {y0, y1}) {
          const double dx = xx - center[0], dy = yy - center[1];
          far2 = std::max(far2, dx * dx + dy * dy);
        }
      return near2 <= radius * radius && radius * radius <= far2;
    }
    case Kind::HalfPlane: {
      const double lo = axis == 1 ? x0 : y0;
      const double hi = axis == 1 ? x1 : y1;
      return lo <= threshold && threshold <= hi;
    }
    default: return false;
  }
}

GridFunction random_nodal_field(const DomainSpec& d, std::uint64_t seed) {
  std::vector<double> values(d.node_count());
  std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ull;
  for (double& v : values) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    v = static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  return {d, std::move(values)};
}

// ---------------------------------------------------------------------------
// Error measurement

namespace {

struct NormAccumulator {
  double l1 = 0, l2 = 0, linf = 0;
  void sample(double diff, double weight) {
    const double a = std::abs(diff);
    l1 += weight * a;
    l2 += weight * diff * diff;
    linf = std::max(linf, a);
  }
};

void accumulate_rect(const TestShape& shape, const GridFunction& u, double x0, double x1,
                     double y0, double y1, const GaussRule& rule, NormAccumulator& acc) {
  const double wx = x1 - x0, wy = y1 - y0;
  if (wx <= 0 || wy <= 0) return;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double y = y0 + rule.nodes[j] * wy;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = x0 + rule.nodes[i] * wx;
      acc.sample(shape(x, y) - eval(u, x, y), rule.weights[i] * rule.weights[j] * wx * wy);
    }
  }
}

} // namespace

ErrorNorms shape_error_norms(const TestShape& shape, const GridFunction& u) {
  if (!shape.analytic())
    throw std::invalid_argument("shape_error_norms: analytic shapes only");
  const DomainSpec& d = u.domain();
  const GaussRule& smooth_rule = gauss_rule(6);
  const GaussRule& jump_rule = gauss_rule(2);
  NormAccumulator acc;
  for (int l = 0; l < d.n2; ++l)
    for (int k = 0; k < d.n1; ++k) {
      const double x0 = k * d.h1(), x1 = (k + 1) * d.h1();
      const double y0 = l * d.h2(), y1 = (l + 1) * d.h2();
      if (!shape.straddles(x0, x1, y0, y1)) {
        accumulate_rect(shape, u, x0, x1, y0, y1, smooth_rule, acc);
        continue;
      }
      if (shape.kind == TestShape::Kind::HalfPlane) {
        // Split exactly at the jump; both parts are smooth.
        if (shape.axis == 1) {
          accumulate_rect(shape, u, x0, shape.threshold, y0, y1, smooth_rule, acc);
          accumulate_rect(shape, u, shape.threshold, x1, y0, y1, smooth_rule, acc);
        } else {
          accumulate_rect(shape, u, x0, x1, y0, shape.threshold, smooth_rule, acc);
          accumulate_rect(shape, u, x0, x1, shape.threshold, y1, smooth_rule, acc);
        }
        continue;
      }
      // Curved jump: refine the cell 32x32.
      constexpr int sub = 32;
      for (int sj = 0; sj < sub; ++sj)
        for (int si = 0; si < sub; ++si)
          accumulate_rect(shape, u, x0 + si * (x1 - x0) / sub,
                          x0 + (si + 1) * (x1 - x0) / sub, y0 + sj * (y1 - y0) / sub,
                          y0 + (sj + 1) * (y1 - y0) / sub, jump_rule, acc);
    }
  return {acc.l1, std::sqrt(acc.l2), acc.linf};
}

RateFit fit_loglog(const std::vector<double>& h, const std::vector<double>& err) {
  RateFit fit;
  if (h.size() != err.size() || h.size() < 2) return fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0) || !(h[i] > 0)) return fit; // degenerate data: no rate
    x.push_back(std::log(h[i]));
    y.push_back(std::log(err[i]));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return fit;
  fit.rate = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.rate * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = intercept + fit.rate * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::string ConvergenceReport::csv() const {
  std::string out = "N,h,error_L1,error_L2,error_Linf,tv_ratio\n";
  for (std::size_t i = 0; i < mesh_sizes.size(); ++i) {
    out += std::to_string(mesh_sizes[i]);
    out += ',' + format_g17(h[i]);
    out += ',' + format_g17(err_l1[i]);
    out += ',' + format_g17(err_l2[i]);
    out += ',' + format_g17(err_linf[i]);
    out += ',' + format_g17(tv_ratio[i]);
    out += '\n';
  }
  return out;
}

ConvergenceReport interp_rate_study(const TestShape& shape, Domain kind, Interpolant op,
                                    const std::vector<double>& norms,
                                    const std::vector<int>& mesh_sizes, int quad_res) {
  if (norms.empty()) throw std::invalid_argument("interp_rate_study: empty norm list");
  require_dyadic(mesh_sizes, 3);
  if (!shape.analytic())
    throw std::invalid_argument("interp_rate_study: analytic shapes only");
  bool want_l1 = false, want_l2 = false, want_linf = false;
  for (const double p : norms) {
    if (p == 1) want_l1 = true;
    else if (p == 2) want_l2 = true;
    else if (std::isinf(p) && p > 0) want_linf = true;
    else throw std::invalid_argument("interp_rate_study: norms must be 1, 2 or inf");
  }

  ConvergenceReport report;
  report.shape = shape.name;
  for (const int n : mesh_sizes) {
    const DomainSpec d = make_domain(kind, n);
    const InputField w = shape.render(d, quad_res);
    const GridFunction u = apply_interpolant(op, w, d);
    const ErrorNorms err = shape_error_norms(shape, u);
    report.mesh_sizes.push_back(n);
    report.h.push_back(d.max_h());
    report.err_l1.push_back(want_l1 ? err.l1 : kNaN);
    report.err_l2.push_back(want_l2 ? err.l2 : kNaN);
    report.err_linf.push_back(want_linf ? err.linf : kNaN);
    const double tv_out = tv_iso(u, 4);
    report.tv_ratio.push_back(
        (shape.known_tv && *shape.known_tv > 0) ? tv_out / *shape.known_tv : kNaN);
  }
  if (want_l1) report.fit_l1 = fit_loglog(report.h, report.err_l1);
  if (want_l2) report.fit_l2 = fit_loglog(report.h, report.err_l2);
  if (want_linf) report.fit_linf = fit_loglog(report.h, report.err_linf);
  return report;
}

ConvergenceReport ch_boundary_rate_study(const TestShape& shape,
                                         const std::vector<int>& mesh_sizes, int quad_res) {
  return interp_rate_study(shape, Domain::UnitSquare, Interpolant::Clipped, {1.0},
                           mesh_sizes, quad_res);
}

// ---------------------------------------------------------------------------
// Property suites

std::string TvdSuiteResult::line() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "suite=tvd domain=%s operator=%s trials=%d violations: %d "
                "(directional %d, isotropic %d, skipped %d) worst_ratio=%.15g",
                domain_name.c_str(), operator_name.c_str(), trials,
                directional_violations + isotropic_violations, directional_violations,
                isotropic_violations, skipped_zero_variation, worst_directional_ratio);
  return buf;
}

std::string TvdSuiteResult::csv() const {
  std::string out =
      "trials,directional_violations,isotropic_violations,skipped,worst_directional_ratio,"
      "worst_isotropic_excess\n";
  out += std::to_string(trials) + ',' + std::to_string(directional_violations) + ',' +
         std::to_string(isotropic_violations) + ',' + std::to_string(skipped_zero_variation) +
         ',' + format_g17(worst_directional_ratio) + ',' +
         format_g17(worst_isotropic_excess) + '\n';
  return out;
}

TvdSuiteResult tvd_property_suite(int trials, std::uint64_t seed, Domain kind,
                                  Interpolant op, int coarse_n, int fine_factor,
                                  const FieldProvider& provider) {
  if (trials < 1) throw std::invalid_argument("tvd_property_suite: trials must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const DomainSpec coarse = make_domain(kind, coarse_n);
  DomainSpec fine = coarse;
  fine.n1 *= fine_factor;
  fine.n2 *= fine_factor;

  TvdSuiteResult res;
  res.domain_name = kind == Domain::PeriodicTorus ? "torus" : "square";
  res.operator_name = interpolant_name(op);
  res.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const GridFunction w =
        provider ? provider(t) : random_nodal_field(fine, mix(seed, t));
    const GridFunction u = apply_interpolant(op, InputField::fine_grid(w), coarse);
    bool skipped = false;
    for (const int axis : {1, 2}) {
      const double vin = directional_variation(w, axis);
      const double vout = directional_variation(u, axis);
      if (vin == 0.0 && vout == 0.0) {
        skipped = true; // 0/0 sentinel: no ratio recorded
        continue;
      }
      if (vout > vin * (1 + 1e-12)) ++res.directional_violations;
      if (vin > 0) {
        const double ratio = vout / vin;
        if (!(ratio <= res.worst_directional_ratio)) res.worst_directional_ratio = ratio;
      }
    }
    if (skipped) ++res.skipped_zero_variation;
    const double iso_in = tv_iso(w, 4);
    const double iso_out = tv_iso(u, 4);
    if (iso_out > iso_in + 1e-6) ++res.isotropic_violations;
    res.worst_isotropic_excess = std::max(res.worst_isotropic_excess, iso_out - iso_in);
  }
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string StabilitySuiteResult::line() const {
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "suite=stability domain=%s operator=%s trials=%d violations: %d "
                "worst_ratio=%.15g",
                domain_name.c_str(), operator_name.c_str(), trials, violations,
                worst_ratio);
  return buf;
}

std::string StabilitySuiteResult::csv() const {
  std::string out = "trials,violations,worst_ratio\n";
  out += std::to_string(trials) + ',' + std::to_string(violations) + ',' +
         format_g17(worst_ratio) + '\n';
  return out;
}

StabilitySuiteResult stability_suite(int trials, std::uint64_t seed, Domain kind,
                                     Interpolant op, const std::vector<double>& p_list,
                                     int coarse_n, int fine_factor,
                                     const FieldProvider& provider) {
  if (trials < 1) throw std::invalid_argument("stability_suite: trials must be >= 1");
  if (p_list.empty()) throw std::invalid_argument("stability_suite: empty norm list");
  const DomainSpec coarse = make_domain(kind, coarse_n);
  DomainSpec fine = coarse;
  fine.n1 *= fine_factor;
  fine.n2 *= fine_factor;

  StabilitySuiteResult res;
  res.domain_name = kind == Domain::PeriodicTorus ? "torus" : "square";
  res.operator_name = interpolant_name(op);
  res.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const GridFunction w =
        provider ? provider(t) : random_nodal_field(fine, mix(seed ^ 0x5f5f5f5f, t));
    const GridFunction u = apply_interpolant(op, InputField::fine_grid(w), coarse);
    for (const double p : p_list) {
      const double nin = lp_norm(w, p);
      const double nout = lp_norm(u, p);
      if (nout > nin * (1 + 1e-12)) ++res.violations;
      if (nin > 0) res.worst_ratio = std::max(res.worst_ratio, nout / nin);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Denoising convergence study

DenoiseRateResult denoise_rate_study(const TestShape& f_shape, double alpha,
                                     const std::vector<int>& mesh_sizes, int n_ref,
                                     const DenoiseStudyParams& params) {
  require_dyadic(mesh_sizes, 2);
  if (n_ref < 4 * mesh_sizes.back())
    throw std::invalid_argument("denoise_rate_study: need n_ref >= 4 max(N)");
  for (const int n : mesh_sizes)
    if (n_ref % n != 0)
      throw std::invalid_argument("denoise_rate_study: n_ref must be a multiple of every N");

  DenoiseRateResult out;
  out.report.shape = f_shape.name;

  // Reference solve on the fine mesh, warm-started up a dyadic ladder
  // (primal by exact refinement, dual by inheritance).
  DenoiseParams ref_params = params.reference;
  ref_params.alpha = alpha;
  GridFunction f_ref;
  GridFunction v_ref;
  {
    SolveState state;
    int start = n_ref;
    while (start > 64 && start % 2 == 0) start /= 2;
    for (int n = start; n <= n_ref; n *= 2) {
      const DomainSpec d = DomainSpec::torus(n, n);
      const GridFunction f = box_average_interpolant(f_shape.render(d, params.quad_res), d);
      DenoiseParams p = ref_params;
      if (n < n_ref) p.tol = std::max(1e-6, ref_params.tol);
      if (n > start) state = refine_state(state, 2, p.quad);
      auto [v, rep] = rof_minimize(f, p, &state);
      if (n == n_ref) {
        out.reference_converged = rep.converged;
        out.reference_gap = rep.final_gap;
        f_ref = f;
        v_ref = std::move(v);
      }
    }
  }
  if (!out.reference_converged)
    out.diagnostic = "reference solve did not reach tol=" + format_g17(ref_params.tol) +
                     " (gap " + format_g17(out.reference_gap) + ")";

  out.ref_linf = lp_norm(v_ref, std::numeric_limits<double>::infinity());
  out.f_linf = lp_norm(f_ref, std::numeric_limits<double>::infinity());
  out.ref_tv = tv_iso(v_ref, 4);

  out.levels_converged = true;
  out.bounds_ok = true;
  for (const int n : mesh_sizes) {
    const DomainSpec d = DomainSpec::torus(n, n);
    const GridFunction f = box_average_interpolant(f_shape.render(d, params.quad_res), d);
    DenoiseParams p = params.level;
    p.alpha = alpha;
    const auto [v, rep] = rof_minimize(f, p);
    if (!rep.converged) {
      out.levels_converged = false;
      out.diagnostic += std::string(out.diagnostic.empty() ? "" : "; ") + "level N=" +
                        std::to_string(n) + " did not converge";
    }
    const GridFunction embedded = refine(v, n_ref / n);
    const double err = lp_norm(embedded - v_ref, 2);
    const double h = d.max_h();
    const double rhs =
        std::sqrt(2.0) * std::sqrt(h) * std::sqrt(out.ref_linf + out.f_linf) *
        std::sqrt(out.ref_tv);
    out.report.mesh_sizes.push_back(n);
    out.report.h.push_back(h);
    out.report.err_l1.push_back(kNaN);
    out.report.err_l2.push_back(err);
    out.report.err_linf.push_back(kNaN);
    out.report.tv_ratio.push_back(kNaN);
    out.bound.push_back(rhs);
    if (!(err <= rhs)) out.bounds_ok = false;
  }
  out.report.fit_l2 = fit_loglog(out.report.h, out.report.err_l2);
  return out;
}

// ---------------------------------------------------------------------------
// Flow suite

std::string FlowSuiteResult::line() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "suite=flow steps=%d completed=%d max_tv_rise=%.3e worst_step_slack=%.3e "
                "step_sum=%.6g budget=%.6g mean_drift=%.3e",
                steps, completed ? 1 : 0, max_tv_rise, worst_step_slack, step_sum_sq,
                step_budget, max_mean_drift);
  return buf;
}

std::string FlowSuiteResult::csv() const {
  std::string out =
      "steps,completed,max_tv_rise,worst_step_slack,step_sum_sq,step_budget,max_mean_drift\n";
  out += std::to_string(steps) + ',' + std::to_string(completed ? 1 : 0) + ',' +
         format_g17(max_tv_rise) + ',' + format_g17(worst_step_slack) + ',' +
         format_g17(step_sum_sq) + ',' + format_g17(step_budget) + ',' +
         format_g17(max_mean_drift) + '\n';
  return out;
}

FlowSuiteResult flow_property_suite(const TestShape& u0_shape, const FlowParams& p, int n,
                                    Domain kind, int quad_res) {
  const DomainSpec d = make_domain(kind, n);
  const InputField u0 = u0_shape.render(d, quad_res);
  const FlowResult flow = tv_flow(u0, d, p);

  FlowSuiteResult res;
  res.completed = flow.completed;
  res.diagnostic = flow.diagnostic;
  res.steps = static_cast<int>(flow.states.size()) - 1;
  if (flow.states.empty()) return res;

  const int q = p.inner.quad;
  std::vector<double> tv(flow.states.size());
  for (std::size_t k = 0; k < flow.states.size(); ++k) tv[k] = tv_iso(flow.states[k], q);
  res.step_budget = p.dt * tv[0];
  const double mean0 = flow.states[0].mean_value();
  for (std::size_t k = 0; k + 1 < flow.states.size(); ++k) {
    res.max_tv_rise = std::max(res.max_tv_rise, tv[k + 1] - tv[k]);
    const GridFunction diff = flow.states[k + 1] - flow.states[k];
    const double step_sq = lp_norm(diff, 2) * lp_norm(diff, 2);
    res.step_sum_sq += step_sq;
    res.worst_step_slack =
        std::max(res.worst_step_slack, step_sq - p.dt * (tv[k] - tv[k + 1]));
    res.max_mean_drift = std::max(
        res.max_mean_drift, std::abs(flow.states[k + 1].mean_value() - mean0));
  }
  return res;
}

} // namespace tvq1
