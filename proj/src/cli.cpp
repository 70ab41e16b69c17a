#include "tvq1/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tvq1/parallel.hpp"
#include "tvq1/pgm_io.hpp"
#include "tvq1/studies.hpp"

namespace tvq1 {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;
constexpr int kIo = 3;

struct ShapeOptions {
  std::string name = "disk";
  double value = 0.5;
  double radius = 0.3;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  int n_fine = 128;
};

TestShape make_shape(const ShapeOptions& o, Domain kind) {
  if (o.name == "disk") return TestShape::disk(o.radius);
  if (o.name == "sine") return TestShape::smooth_sine();
  if (o.name == "constant") return TestShape::constant(o.value);
  if (o.name == "halfplane") return TestShape::half_plane(1, o.threshold, kind);
  if (o.name == "affine") return TestShape::affine(o.value, 0.5, 0.25);
  if (o.name == "random") return TestShape::random_fine(o.seed, o.n_fine);
  throw CLI::ValidationError("--shape", "unknown shape '" + o.name + "'");
}

// Output paths are validated before any compute starts.
void ensure_writable(const std::string& path) {
  const std::string probe = path + ".tmp";
  std::ofstream out(probe, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write to '" + path + "'");
  out.close();
  std::remove(probe.c_str());
}

std::vector<int> dyadic_levels(int coarsest, int levels) {
  std::vector<int> out;
  for (int i = 0, n = coarsest; i < levels; ++i, n *= 2) out.push_back(n);
  return out;
}

// Loads the input: a PGM file when --in is given, otherwise the named shape.
InputField load_input(const std::string& in_path, const ShapeOptions& shape, Domain kind,
                      const DomainSpec& target, int quad_res, GridFunction* loaded) {
  if (!in_path.empty()) {
    GridFunction img = read_pgm(in_path, kind == Domain::PeriodicTorus);
    if (loaded) *loaded = img;
    return InputField::fine_grid(std::move(img));
  }
  return make_shape(shape, kind).render(target, quad_res);
}

int cmd_interpolate(const std::string& in_path, const ShapeOptions& shape, Domain kind,
                    int n, const std::string& op_name, int quad_res,
                    const std::string& out_path) {
  const auto op = parse_interpolant(op_name);
  if (!op) {
    std::cerr << "interpolate: unknown operator '" << op_name << "'\n";
    return kUsage;
  }
  ensure_writable(out_path);
  const DomainSpec d =
      kind == Domain::PeriodicTorus ? DomainSpec::torus(n, n) : DomainSpec::square(n, n);
  const InputField w = load_input(in_path, shape, kind, d, quad_res, nullptr);
  const GridFunction u = apply_interpolant(*op, w, d);
  write_pgm(u, out_path);
  return kOk;
}

int cmd_denoise(const std::string& in_path, Domain kind, const DenoiseParams& params,
                const std::string& out_path) {
  ensure_writable(out_path);
  const GridFunction f = read_pgm(in_path, kind == Domain::PeriodicTorus);
  const auto [u, report] = rof_minimize(f, params);
  std::fprintf(stderr, "denoise: iters=%d gap=%.3e energy=%.8g converged=%d\n",
               report.iters, report.final_gap, report.energy, report.converged ? 1 : 0);
  write_pgm(u, out_path);
  return report.converged ? kOk : kNotConverged;
}

int cmd_flow(const std::string& in_path, const ShapeOptions& shape, Domain kind, int n,
             const FlowParams& params, int quad_res, const std::string& out_prefix) {
  ensure_writable(out_prefix + "_000.pgm");
  const DomainSpec d =
      kind == Domain::PeriodicTorus ? DomainSpec::torus(n, n) : DomainSpec::square(n, n);
  GridFunction loaded;
  const InputField u0 = load_input(in_path, shape, kind, d, quad_res, &loaded);
  const DomainSpec run_d = in_path.empty() ? d : loaded.domain();
  const FlowResult flow = tv_flow(u0, run_d, params);
  for (std::size_t k = 0; k < flow.states.size(); ++k) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_%03zu.pgm", k);
    write_pgm(flow.states[k], out_prefix + suffix);
  }
  if (!flow.completed) {
    std::cerr << flow.diagnostic << "\n";
    return kNotConverged;
  }
  std::fprintf(stderr, "flow: wrote %zu snapshots\n", flow.states.size());
  return kOk;
}

struct StudyOptions {
  std::string suite = "tvd";
  int trials = 200;
  int n = 16;
  int levels = 4;
  int n_ref = 512;
  std::uint64_t seed = 1;
  double alpha = 10.0;
  double dt = 0.01;
  double final_time = 0.05;
  double tol = 1e-6;
  int max_iters = 20000;
  int quad_res = 64;
  std::string op_name = "box";
  bool periodic = true;
};

int cmd_study(const StudyOptions& o, const ShapeOptions& shape_opts) {
  const Domain kind = o.periodic ? Domain::PeriodicTorus : Domain::UnitSquare;
  const auto op = parse_interpolant(o.op_name);
  if (!op) {
    std::cerr << "study: unknown operator '" << o.op_name << "'\n";
    return kUsage;
  }
  const TestShape shape = make_shape(shape_opts, kind);

  if (o.suite == "tvd") {
    const auto res = tvd_property_suite(o.trials, o.seed, kind, *op, o.n);
    std::cout << res.csv();
    std::cerr << res.line() << "\n";
    return kOk;
  }
  if (o.suite == "stability") {
    const auto res = stability_suite(o.trials, o.seed, kind, *op,
                                     {1.0, 2.0, std::numeric_limits<double>::infinity()},
                                     o.n);
    std::cout << res.csv();
    std::cerr << res.line() << "\n";
    return kOk;
  }
  if (o.suite == "interp-rate") {
    const auto report = interp_rate_study(shape, kind, *op, {1.0, 2.0},
                                          dyadic_levels(o.n, o.levels), o.quad_res);
    std::cout << report.csv();
    std::fprintf(stderr, "suite=interp-rate shape=%s rate_L1=%.3f rate_L2=%.3f r2_L2=%.4f\n",
                 report.shape.c_str(), report.fit_l1.rate, report.fit_l2.rate,
                 report.fit_l2.r2);
    return kOk;
  }
  if (o.suite == "ch-rate") {
    const auto report = ch_boundary_rate_study(shape, dyadic_levels(o.n, o.levels),
                                               o.quad_res == 64 ? 32 : o.quad_res);
    std::cout << report.csv();
    std::fprintf(stderr, "suite=ch-rate shape=%s rate_L1=%.3f r2_L1=%.4f\n",
                 report.shape.c_str(), report.fit_l1.rate, report.fit_l1.r2);
    return kOk;
  }
  if (o.suite == "denoise-rate") {
    DenoiseStudyParams params;
    params.level.tol = o.tol;
    params.level.max_iters = o.max_iters;
    params.reference.max_iters = o.max_iters;
    params.quad_res = o.quad_res;
    const auto res = denoise_rate_study(shape, o.alpha, dyadic_levels(o.n, o.levels),
                                        o.n_ref, params);
    std::cout << res.report.csv();
    std::fprintf(stderr,
                 "suite=denoise-rate rate_L2=%.3f bounds_ok=%d ref_converged=%d "
                 "ref_gap=%.3e%s%s\n",
                 res.report.fit_l2.rate, res.bounds_ok ? 1 : 0,
                 res.reference_converged ? 1 : 0, res.reference_gap,
                 res.diagnostic.empty() ? "" : " ", res.diagnostic.c_str());
    return (res.reference_converged && res.levels_converged) ? kOk : kNotConverged;
  }
  if (o.suite == "flow") {
    FlowParams p{.dt = o.dt, .final_time = o.final_time};
    p.inner.tol = o.tol;
    p.inner.max_iters = o.max_iters;
    const auto res = flow_property_suite(shape, p, o.n, kind, o.quad_res);
    std::cout << res.csv();
    std::cerr << res.line() << "\n";
    return res.completed ? kOk : kNotConverged;
  }
  std::cerr << "study: unknown suite '" << o.suite << "'\n";
  return kUsage;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Total-variation-diminishing Q1 interpolation, ROF denoising and TV flow"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand arguments

  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "single worker: bit-identical reruns for identical arguments");

  ShapeOptions shape;
  StudyOptions study;
  std::string in_path, out_path = "out.pgm";
  bool periodic = false;
  int n = 64;
  int quad_res = 16;
  std::string op_name = "box";
  DenoiseParams denoise;
  denoise.alpha = 10.0;
  FlowParams flow;
  bool fixed_step = false;

  const auto add_shape_opts = [&](CLI::App* cmd) {
    cmd->add_option("--shape", shape.name, "disk|sine|constant|halfplane|affine|random");
    cmd->add_option("--value", shape.value, "constant level / affine offset");
    cmd->add_option("--radius", shape.radius, "disk radius");
    cmd->add_option("--threshold", shape.threshold, "half-plane threshold");
    cmd->add_option("--n-fine", shape.n_fine, "random shape: fine mesh cells");
  };

  CLI::App* interp = app.add_subcommand("interpolate", "interpolate an image or shape");
  interp->add_option("--in", in_path, "input PGM");
  interp->add_option("--N", n, "cells per axis");
  interp->add_option("--operator", op_name, "box|homothetic|clipped|lagrange");
  interp->add_flag("--periodic", periodic, "treat the domain as the torus");
  interp->add_option("--quad-res", quad_res, "box quadrature points per axis");
  interp->add_option("--out", out_path, "output PGM")->required();
  add_shape_opts(interp);

  CLI::App* dn = app.add_subcommand("denoise", "ROF denoising of a PGM image");
  dn->add_option("--in", in_path, "noisy input PGM")->required();
  dn->add_option("--alpha", denoise.alpha, "fidelity weight")->required();
  dn->add_option("--tol", denoise.tol, "relative duality-gap tolerance");
  dn->add_option("--max-iters", denoise.max_iters, "iteration cap");
  dn->add_option("--theta", denoise.theta, "extrapolation (fixed-step schedule)");
  dn->add_option("--quad", denoise.quad, "Gauss order of the TV term");
  dn->add_flag("--fixed-step", fixed_step, "disable the accelerated step schedule");
  dn->add_flag("--periodic", periodic, "treat the image as one period");
  dn->add_option("--out", out_path, "denoised output PGM")->required();

  CLI::App* fl = app.add_subcommand("flow", "implicit TV flow snapshots");
  fl->add_option("--in", in_path, "initial data PGM");
  fl->add_option("--N", n, "cells per axis (shape inputs)");
  fl->add_option("--dt", flow.dt, "time step")->required();
  fl->add_option("--T", flow.final_time, "final time")->required();
  fl->add_option("--tol", flow.inner.tol, "per-step solver tolerance");
  fl->add_option("--max-iters", flow.inner.max_iters, "per-step iteration cap");
  fl->add_flag("--periodic", periodic, "torus domain");
  fl->add_option("--quad-res", quad_res, "box quadrature points per axis");
  fl->add_option("--out", out_path, "snapshot filename prefix")->required();
  add_shape_opts(fl);

  CLI::App* st = app.add_subcommand("study", "verification suites and rate studies");
  st->add_option("--suite", study.suite,
                 "tvd|stability|interp-rate|ch-rate|denoise-rate|flow")
      ->required();
  st->add_option("--trials", study.trials, "property-suite trials");
  st->add_option("--N", study.n, "coarse cells per axis");
  st->add_option("--levels", study.levels, "dyadic levels for rate studies");
  st->add_option("--N-ref", study.n_ref, "reference mesh for denoise-rate");
  st->add_option("--seed", study.seed, "RNG seed");
  st->add_option("--alpha", study.alpha, "fidelity weight");
  st->add_option("--dt", study.dt, "flow time step");
  st->add_option("--T", study.final_time, "flow final time");
  st->add_option("--tol", study.tol, "solver tolerance");
  st->add_option("--max-iters", study.max_iters, "solver iteration cap");
  st->add_option("--quad-res", study.quad_res, "box quadrature points per axis");
  st->add_option("--operator", study.op_name, "box|homothetic|clipped|lagrange");
  bool square = false;
  st->add_flag("--square", square, "unit square instead of the torus");
  add_shape_opts(st);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  set_force_serial(deterministic);
  denoise.accelerated = !fixed_step;
  study.periodic = !square;

  try {
    if (interp->parsed()) {
      const Domain kind = periodic ? Domain::PeriodicTorus : Domain::UnitSquare;
      return cmd_interpolate(in_path, shape, kind, n, op_name, quad_res, out_path);
    }
    if (dn->parsed()) {
      const Domain kind = periodic ? Domain::PeriodicTorus : Domain::UnitSquare;
      return cmd_denoise(in_path, kind, denoise, out_path);
    }
    if (fl->parsed()) {
      const Domain kind = periodic ? Domain::PeriodicTorus : Domain::UnitSquare;
      return cmd_flow(in_path, shape, kind, n, flow, quad_res, out_path);
    }
    if (st->parsed()) return cmd_study(study, shape);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

} // namespace tvq1
