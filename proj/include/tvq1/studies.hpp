#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tvq1/interpolate.hpp"
#include "tvq1/rof.hpp"

namespace tvq1 {

// The interpolation operators a study can exercise.
enum class Interpolant { Box, Homothetic, Clipped, Lagrange };

const char* interpolant_name(Interpolant op);
std::optional<Interpolant> parse_interpolant(const std::string& name);

GridFunction apply_interpolant(Interpolant op, const InputField& w, const DomainSpec& d);

// Test data for the verification studies. Analytic shapes know their own
// total variation and sup norm where a closed form exists.
struct TestShape {
  enum class Kind { Constant, Affine, SmoothSine, DiskIndicator, HalfPlane, RandomFine };

  Kind kind = Kind::Constant;
  std::string name;
  double value = 0;           // Constant level / Affine offset
  double slope_x = 0, slope_y = 0;
  double radius = 0.3;
  std::array<double, 2> center{0.5, 0.5};
  int axis = 1;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  int n_fine = 128;
  std::optional<double> known_tv;   // isotropic TV
  std::optional<double> known_linf;

  static TestShape constant(double c);
  static TestShape affine(double offset, double sx, double sy); // unit square
  static TestShape smooth_sine();                               // sin(2 pi x) sin(2 pi y)
  static TestShape disk(double r, std::array<double, 2> center = {0.5, 0.5});
  static TestShape half_plane(int axis, double threshold, Domain kind);
  static TestShape random_fine(std::uint64_t seed, int n_fine);

  bool analytic() const { return kind != Kind::RandomFine; }
  double operator()(double x, double y) const; // analytic kinds only

  // Rendering used by the interpolation operators: analytic callable with the
  // given box quadrature resolution, or the seeded fine-grid field.
  InputField render(const DomainSpec& target, int quad_res) const;

  // True when the shape has a jump crossing the closed rectangle.
  bool straddles(double x0, double x1, double y0, double y1) const;
};

// Uniform [0,1] nodal values from a fixed-stream generator, reproducible
// across platforms for a given seed.
GridFunction random_nodal_field(const DomainSpec& d, std::uint64_t seed);

// L^p errors of a grid function against an analytic shape. Smooth cells use
// 6x6 Gauss; cells straddling a jump are subdivided 32x32 with 2x2 Gauss per
// subcell (half-plane jumps are split exactly at the threshold), keeping the
// measurement noise far below the O(h) signal of the rate studies.
struct ErrorNorms {
  double l1 = 0, l2 = 0, linf = 0;
};
ErrorNorms shape_error_norms(const TestShape& shape, const GridFunction& u);

struct RateFit {
  double rate = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
};
RateFit fit_loglog(const std::vector<double>& h, const std::vector<double>& err);

struct ConvergenceReport {
  std::string shape;
  std::vector<int> mesh_sizes;
  std::vector<double> h;
  std::vector<double> err_l1, err_l2, err_linf; // NaN when not requested
  std::vector<double> tv_ratio;                 // NaN when no reference TV
  RateFit fit_l1, fit_l2, fit_linf;
  std::string csv() const; // columns: N,h,error_L1,error_L2,error_Linf,tv_ratio
};

// Interpolation convergence study on a dyadic mesh ladder. `norms` lists the
// requested exponents out of {1, 2, inf}.
ConvergenceReport interp_rate_study(const TestShape& shape, Domain kind, Interpolant op,
                                    const std::vector<double>& norms,
                                    const std::vector<int>& mesh_sizes,
                                    int quad_res = 16);

// c_h boundary accuracy: L1 rate on the unit square.
ConvergenceReport ch_boundary_rate_study(const TestShape& shape,
                                         const std::vector<int>& mesh_sizes,
                                         int quad_res = 32);

// Property suite: directional (exact) and isotropic (quadrature) variation
// of the interpolant never exceed the input's.
struct TvdSuiteResult {
  std::string domain_name;
  std::string operator_name;
  int trials = 0;
  int directional_violations = 0;
  int isotropic_violations = 0;
  int skipped_zero_variation = 0;
  double worst_directional_ratio = std::numeric_limits<double>::quiet_NaN();
  double worst_isotropic_excess = -std::numeric_limits<double>::infinity();
  double elapsed_seconds = 0;
  bool pass() const { return directional_violations == 0 && isotropic_violations == 0; }
  std::string line() const;
  std::string csv() const;
};

using FieldProvider = std::function<GridFunction(int trial)>;

TvdSuiteResult tvd_property_suite(int trials, std::uint64_t seed, Domain kind,
                                  Interpolant op, int coarse_n = 16, int fine_factor = 8,
                                  const FieldProvider& provider = nullptr);

// Property suite: L^p norm of the interpolant never exceeds the input's.
struct StabilitySuiteResult {
  std::string domain_name;
  std::string operator_name;
  int trials = 0;
  int violations = 0;
  double worst_ratio = 0;
  bool pass() const { return violations == 0; }
  std::string line() const;
  std::string csv() const;
};

StabilitySuiteResult stability_suite(int trials, std::uint64_t seed, Domain kind,
                                     Interpolant op, const std::vector<double>& p_list,
                                     int coarse_n = 16, int fine_factor = 8,
                                     const FieldProvider& provider = nullptr);

// Denoising convergence study: a fine-mesh reference solve is the oracle for
// the coarse-level errors, which are checked against the explicit
// sqrt(2) h^{1/2} (||v||_inf + ||f||_inf)^{1/2} TV(v)^{1/2} bound.
struct DenoiseStudyParams {
  DenoiseParams level{.alpha = 0, .max_iters = 400000, .tol = 1e-8};
  DenoiseParams reference{.alpha = 0, .max_iters = 20000, .tol = 1e-9};
  int quad_res = 64; // box quadrature for rendering f
};

struct DenoiseRateResult {
  ConvergenceReport report; // err_l2 column
  std::vector<double> bound;
  bool bounds_ok = false;
  bool levels_converged = false;
  bool reference_converged = false;
  double reference_gap = 0;
  double ref_linf = 0, f_linf = 0, ref_tv = 0;
  std::string diagnostic;
};

DenoiseRateResult denoise_rate_study(const TestShape& f_shape, double alpha,
                                     const std::vector<int>& mesh_sizes, int n_ref,
                                     const DenoiseStudyParams& params = {});

// Flow property suite: TV decay, the per-step increment inequality and mass
// conservation along the implicit flow.
struct FlowSuiteResult {
  int steps = 0;
  bool completed = false;
  double max_tv_rise = -std::numeric_limits<double>::infinity();
  double worst_step_slack = -std::numeric_limits<double>::infinity();
  double step_sum_sq = 0;
  double step_budget = 0; // dt * tv(u^0)
  double max_mean_drift = 0;
  std::string diagnostic;
  std::string line() const;
  std::string csv() const;
};

FlowSuiteResult flow_property_suite(const TestShape& u0_shape, const FlowParams& p,
                                    int n, Domain kind, int quad_res = 64);

} // namespace tvq1
