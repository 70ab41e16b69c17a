#include "tvq1/cli.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"
#include "tvq1/pgm_io.hpp"

using namespace tvq1;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string make_noisy_image(const char* name, int n) {
  const DomainSpec s = DomainSpec::square(n, n);
  GridFunction img(s);
  testing::Rng rng(5);
  for (int l = 0; l <= n; ++l)
    for (int k = 0; k <= n; ++k) {
      const double band = (k > n / 4 && k < 3 * n / 4) ? 0.8 : 0.2;
      img.node(k, l) = band + 0.1 * (rng.next_double() - 0.5);
    }
  const std::string path = std::string("/tmp/tvq1_cli_") + name;
  write_pgm(img, path);
  return path;
}

} // namespace

TEST_CASE("cli: unknown flags and missing subcommand are usage errors") {
  CHECK(run_cli({"denoise", "--no-such-flag"}) == 1);
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
}

TEST_CASE("cli: denoise writes the output and succeeds") {
  const std::string in = make_noisy_image("in.pgm", 16);
  const std::string out = "/tmp/tvq1_cli_out.pgm";
  std::remove(out.c_str());
  CHECK(run_cli({"denoise", "--in", in, "--alpha", "10", "--tol", "1e-6", "--out", out}) ==
        0);
  const GridFunction u = read_pgm(out);
  CHECK(u.domain() == DomainSpec::square(16, 16));
}

TEST_CASE("cli: denoise reports non-convergence with exit code 2") {
  const std::string in = make_noisy_image("in2.pgm", 16);
  const std::string out = "/tmp/tvq1_cli_out2.pgm";
  CHECK(run_cli({"denoise", "--in", in, "--alpha", "10", "--tol", "1e-13", "--max-iters",
                 "15", "--out", out}) == 2);
}

TEST_CASE("cli: missing input file is an I/O error") {
  CHECK(run_cli({"denoise", "--in", "/tmp/tvq1_does_not_exist.pgm", "--alpha", "10",
                 "--out", "/tmp/tvq1_x.pgm"}) == 3);
  CHECK(run_cli({"interpolate", "--shape", "disk", "--N", "8", "--periodic", "--out",
                 "/nonexistent-dir/x.pgm"}) == 3);
}

TEST_CASE("cli: interpolate a shape onto a mesh") {
  const std::string out = "/tmp/tvq1_cli_interp.pgm";
  std::remove(out.c_str());
  CHECK(run_cli({"interpolate", "--shape", "disk", "--N", "16", "--periodic",
                 "--operator", "box", "--quad-res", "32", "--out", out}) == 0);
  const GridFunction u = read_pgm(out);
  CHECK(u.domain() == DomainSpec::square(16, 16)); // seam duplicated on write
  CHECK(run_cli({"interpolate", "--shape", "disk", "--N", "8", "--operator", "bogus",
                 "--out", out}) == 1);
}

TEST_CASE("cli: study tvd prints a zero-violation summary and deterministic bytes") {
  testing::CaptureStream cerr_cap(stderr);
  const int code = run_cli({"study", "--suite", "tvd", "--trials", "5", "--N", "8",
                            "--seed", "7", "--deterministic"});
  const std::string err = cerr_cap.stop();
  CHECK(code == 0);
  CHECK(err.find("violations: 0") != std::string::npos);
}

TEST_CASE("cli: study interp-rate emits CSV on stdout") {
  testing::CaptureStream cout_cap(stdout);
  testing::CaptureStream cerr_cap(stderr);
  const int code = run_cli({"study", "--suite", "interp-rate", "--shape", "sine", "--N",
                            "8", "--levels", "3", "--quad-res", "16"});
  const std::string out = cout_cap.stop();
  const std::string err = cerr_cap.stop();
  CHECK(code == 0);
  CHECK(out.find("N,h,error_L1,error_L2,error_Linf,tv_ratio") == 0);
  CHECK(err.find("rate_L2") != std::string::npos);
}

TEST_CASE("cli: flow writes a snapshot sequence") {
  const std::string prefix = "/tmp/tvq1_cli_flow";
  CHECK(run_cli({"flow", "--shape", "disk", "--N", "8", "--periodic", "--dt", "0.01",
                 "--T", "0.02", "--tol", "1e-6", "--quad-res", "32", "--out", prefix}) ==
        0);
  CHECK(!read_file(prefix + "_000.pgm").empty());
  CHECK(!read_file(prefix + "_001.pgm").empty());
  CHECK(!read_file(prefix + "_002.pgm").empty());
}

TEST_CASE("cli: deterministic reruns produce identical bytes") {
  const std::string in = make_noisy_image("det.pgm", 12);
  const std::string out1 = "/tmp/tvq1_cli_det1.pgm";
  const std::string out2 = "/tmp/tvq1_cli_det2.pgm";
  for (const auto& out : {out1, out2})
    CHECK(run_cli({"--deterministic", "denoise", "--in", in, "--alpha", "5", "--tol",
                   "1e-5", "--out", out}) == 0);
  CHECK(read_file(out1) == read_file(out2));
}
