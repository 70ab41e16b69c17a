#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tvq1/field.hpp"

namespace tvq1 {

// Configuration of one ROF solve
//   minimize  TV_q(w) + (alpha/2) ||w - f||^2_{L2}
// over the Q1 space, where TV_q is the Gauss discretization of the isotropic
// total variation with quad^2 points per cell. The minimized objective and
// energy(w, f, alpha, quad) are the same functional.
struct DenoiseParams {
  double alpha = 1.0;
  int max_iters = 20000;
  double tol = 1e-6;     // relative primal-dual gap at which to stop
  double theta = 1.0;    // extrapolation of the fixed-step schedule
  int quad = 2;          // Gauss order of the discrete TV term
  bool accelerated = true; // alpha-strongly-convex step schedule (see README)
};

struct SolveReport {
  int iters = 0;
  double final_gap = 0; // relative primal-dual gap at exit
  double energy = 0;    // objective at the returned iterate
  bool converged = false;
};

// Implicit time discretization of the TV flow: each step solves the ROF
// problem with fidelity weight 1/dt against the previous state.
struct FlowParams {
  double dt = 0.01;
  double final_time = 0.1;
  DenoiseParams inner{}; // alpha is overridden with 1/dt every step
};

double energy(const GridFunction& w, const GridFunction& f, double alpha, int quad);

// Optional warm-start state: pass the primal/dual pair of a previous related
// solve (same mesh and quad order; mismatching fields are ignored). On return
// holds the final pair, so solves can be chained or continued.
struct SolveState {
  GridFunction primal;
  std::vector<double> dual;
};

std::pair<GridFunction, SolveReport> rof_minimize(const GridFunction& f,
                                                  const DenoiseParams& p);
std::pair<GridFunction, SolveReport> rof_minimize(const GridFunction& f,
                                                  const DenoiseParams& p,
                                                  SolveState* state);

// Prolong a solve state onto the mesh refined `factor` times per axis (exact
// Q1 refinement of the primal; the dual direction field is inherited by the
// child cells with the radius rescaled to stay feasible).
SolveState refine_state(const SolveState& coarse, int factor, int quad = 2);

enum class FlowInterpolant { Box, Clipped };

struct FlowResult {
  std::vector<GridFunction> states;  // u^0 .. u^K, or the prefix on failure
  std::vector<SolveReport> reports;  // one per attempted step
  bool completed = false;
  std::string diagnostic;            // empty when completed
};

FlowResult tv_flow(const InputField& u0, const DomainSpec& d, const FlowParams& p,
                   FlowInterpolant interp);

// Convenience overload: box averaging on the torus, clipped averaging on the
// square.
FlowResult tv_flow(const InputField& u0, const DomainSpec& d, const FlowParams& p);

namespace detail {

// Sliding watchdog for the solver objective: reports divergence once the
// objective has been rising over a consecutive-iteration span of at least
// `iteration_budget` AND the accumulated rise is material (10% of the
// value's scale). Primal-dual iterates are not monotone in the objective:
// benign transients rise for stretches by tiny amounts, so a span test
// alone misfires on convergent runs.
class DivergenceMonitor {
 public:
  explicit DivergenceMonitor(int iteration_budget = 100, double rel_rise = 0.1)
      : budget_(iteration_budget), rel_rise_(rel_rise) {}

  bool record(int iteration, double value) {
    const bool rising = have_last_ && value > last_value_;
    if (rising) {
      if (run_start_iter_ < 0) {
        run_start_iter_ = last_iteration_;
        run_start_value_ = last_value_;
      }
      const bool material =
          value - run_start_value_ >
          rel_rise_ * std::max(std::abs(run_start_value_), 1.0);
      if (iteration - run_start_iter_ >= budget_ && material) return true;
    } else {
      run_start_iter_ = -1;
    }
    last_value_ = value;
    last_iteration_ = iteration;
    have_last_ = true;
    return false;
  }

 private:
  int budget_;
  double rel_rise_;
  int run_start_iter_ = -1;
  double run_start_value_ = 0;
  int last_iteration_ = 0;
  double last_value_ = 0;
  bool have_last_ = false;
};

} // namespace detail

} // namespace tvq1
