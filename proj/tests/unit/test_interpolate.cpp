#include "tvq1/interpolate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "test_util.hpp"
#include "tvq1/serial_ref.hpp"
#include "tvq1/variation.hpp"

using namespace tvq1;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force box mean: composite midpoint over the box around node (k,l),
// sampling the Q1 interpolant of the fine function pointwise.
double brute_box_mean(const GridFunction& fine, const DomainSpec& coarse, int k, int l,
                      int m) {
  const double a = coarse.h1() / 2, b = coarse.h2() / 2;
  const double cx = k * coarse.h1(), cy = l * coarse.h2();
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    double y = cy - b + (j + 0.5) * (2 * b / m);
    y -= std::floor(y);
    double row = 0.0;
    for (int i = 0; i < m; ++i) {
      double x = cx - a + (i + 0.5) * (2 * a / m);
      x -= std::floor(x);
      row += eval(fine, x, y);
    }
    acc += row;
  }
  return acc / (static_cast<double>(m) * m);
}

} // namespace

TEST_CASE("Kernel has unit mass and the right sup height") {
  const Kernel ker = Kernel::for_mesh(DomainSpec::torus(4, 8));
  CHECK(ker.area() * ker.weight_height() == 1.0);
  CHECK(ker.weight_height() == doctest::Approx(32.0));
}

TEST_CASE("averaged_nodal_value: constants, linears, quadratic closed form") {
  const DomainSpec t = DomainSpec::torus(4, 4);
  const auto five = InputField::analytic([](double, double) { return 5.0; });
  CHECK(averaged_nodal_value(five, t, {1, 2}) == doctest::Approx(5.0).epsilon(1e-15));

  const auto linear = InputField::analytic([](double x, double) { return x; });
  CHECK(averaged_nodal_value(linear, t, {2, 2}) == doctest::Approx(0.5).epsilon(1e-14));

  // Mean of x^2 over a symmetric box is z^2 + h^2/12.
  const double expected = 0.25 + 0.25 * 0.25 / 12.0;
  const auto sq64 = InputField::analytic([](double x, double) { return x * x; }, 64);
  CHECK(averaged_nodal_value(sq64, t, {2, 2}) == doctest::Approx(expected).epsilon(5e-6));
  const auto sq512 = InputField::analytic([](double x, double) { return x * x; }, 512);
  CHECK(averaged_nodal_value(sq512, t, {2, 2}) == doctest::Approx(expected).epsilon(5e-8));
}

TEST_CASE("averaged_nodal_value rejects boundary nodes on the square") {
  const DomainSpec s = DomainSpec::square(4, 4);
  const auto w = InputField::analytic([](double x, double) { return x; });
  CHECK_THROWS_AS(averaged_nodal_value(w, s, {0, 2}), std::domain_error);
  CHECK_THROWS_AS(averaged_nodal_value(w, s, {2, 4}), std::domain_error);
  CHECK_THROWS_AS(averaged_nodal_value(w, s, {5, 2}), std::out_of_range);
  CHECK(averaged_nodal_value(w, s, {2, 2}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fine-grid box means are exact: brute-force midpoint oracle") {
  const DomainSpec fine_d = DomainSpec::torus(64, 64);
  const DomainSpec coarse = DomainSpec::torus(8, 8);
  const GridFunction fine = testing::random_grid(fine_d, 42);
  const auto w = InputField::fine_grid(fine);
  for (const NodeIndex idx : {NodeIndex{3, 5}, NodeIndex{0, 0}, NodeIndex{7, 1}}) {
    const double exact = averaged_nodal_value(w, coarse, idx);
    const double brute = brute_box_mean(fine, coarse, idx.k, idx.l, 256);
    CHECK(exact == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("fine-grid input validation") {
  const DomainSpec coarse = DomainSpec::torus(8, 8);
  const auto bad_kind = InputField::fine_grid(GridFunction(DomainSpec::square(64, 64), 1.0));
  CHECK_THROWS_AS(averaged_nodal_value(bad_kind, coarse, {1, 1}), std::invalid_argument);
  const auto bad_mult = InputField::fine_grid(GridFunction(DomainSpec::torus(60, 64), 1.0));
  CHECK_THROWS_AS(averaged_nodal_value(bad_mult, coarse, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(InputField::analytic(nullptr), std::invalid_argument);
  CHECK_THROWS_AS(InputField::analytic([](double, double) { return 0.0; }, 0),
                  std::invalid_argument);
}

TEST_CASE("box_average_interpolant: constants and the half-plane ramp") {
  const DomainSpec t = DomainSpec::torus(8, 8);
  const auto c = InputField::analytic([](double, double) { return -1.25; });
  const GridFunction uc = box_average_interpolant(c, t);
  CHECK(uc.min_value() == doctest::Approx(-1.25).epsilon(1e-15));
  CHECK(uc.max_value() == doctest::Approx(-1.25).epsilon(1e-15));

  // Indicator of {x < 1/2}: the box averages form a ramp whose rise and fall
  // both have height 1, so the exact directional variation is 2.
  const auto ind =
      InputField::analytic([](double x, double) { return x < 0.5 ? 1.0 : 0.0; }, 64);
  const GridFunction u = box_average_interpolant(ind, t);
  const double expected_profile[8] = {0.5, 1, 1, 1, 0.5, 0, 0, 0};
  for (int k = 0; k < 8; ++k)
    CHECK(u(k, 3) == doctest::Approx(expected_profile[k]).epsilon(1e-13));
  CHECK(directional_variation(u, 1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(directional_variation(u, 2) == doctest::Approx(0.0).epsilon(1e-13));

  CHECK_THROWS_AS(box_average_interpolant(c, DomainSpec::square(8, 8)),
                  std::invalid_argument);
}

TEST_CASE("box_average_interpolant damps a sinusoid by the box factor") {
  const DomainSpec t = DomainSpec::torus(16, 16);
  const auto sine =
      InputField::analytic([](double x, double) { return std::sin(2 * M_PI * x); }, 128);
  const GridFunction u = box_average_interpolant(sine, t);
  CHECK(std::abs(u(0, 5)) <= 1e-14);
  const double h = 1.0 / 16;
  const double damped = std::sin(M_PI * h) / (M_PI * h); // box average at the crest
  CHECK(u(4, 9) == doctest::Approx(damped).epsilon(1e-6)); // m=128 midpoint grade
}

TEST_CASE("parallel and serial box averaging agree") {
  const DomainSpec fine_d = DomainSpec::torus(48, 48);
  const DomainSpec coarse = DomainSpec::torus(6, 6);
  const GridFunction fine = testing::random_grid(fine_d, 77);
  const GridFunction a = box_average_interpolant(InputField::fine_grid(fine), coarse);
  const GridFunction b = serial::box_average_interpolant(fine, coarse);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.values()[i] == doctest::Approx(b.values()[i]).epsilon(1e-14));
}

TEST_CASE("homothetic_interpolant: constant scaling defect is exact") {
  const DomainSpec s = DomainSpec::square(8, 8);
  const auto one = InputField::analytic([](double, double) { return 1.0; });
  const GridFunction u = homothetic_interpolant(one, s);
  const double expected = 1.0 / (1.0 + 2.0 * (1.0 / 16.0)); // 8/9
  for (const double v : u.values()) CHECK(std::abs(v - expected) <= 1e-14);

  const auto zero = InputField::analytic([](double, double) { return 0.0; });
  const GridFunction uz = homothetic_interpolant(zero, s);
  CHECK(uz.min_value() == 0.0);
  CHECK(uz.max_value() == 0.0);

  CHECK_THROWS_AS(homothetic_interpolant(one, DomainSpec::torus(8, 8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(homothetic_interpolant(one, s, HomotheticParams{0.0}),
                  std::invalid_argument);
}

TEST_CASE("homothetic_interpolant: analytic and fine-grid paths agree on affine data") {
  const DomainSpec s = DomainSpec::square(8, 8);
  const auto analytic = InputField::analytic([](double x, double) { return x; }, 8);
  const GridFunction ua = homothetic_interpolant(analytic, s);

  DomainSpec fine_d = DomainSpec::square(64, 64);
  GridFunction xfine(fine_d);
  for (int l = 0; l <= 64; ++l)
    for (int k = 0; k <= 64; ++k) xfine.node(k, l) = k / 64.0;
  const GridFunction uf = homothetic_interpolant(InputField::fine_grid(xfine), s);

  for (std::size_t i = 0; i < ua.size(); ++i)
    CHECK(ua.values()[i] == doctest::Approx(uf.values()[i]).epsilon(1e-13));
  // Affine input maps to the dilated affine sampled at the node.
  CHECK(ua(4, 4) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("homothetic_interpolant does not increase the directional variation") {
  const DomainSpec s = DomainSpec::square(8, 8);
  DomainSpec fine_d = DomainSpec::square(64, 64);
  GridFunction ind(fine_d);
  for (int l = 0; l <= 64; ++l)
    for (int k = 0; k <= 64; ++k) ind.node(k, l) = (k / 64.0 < 0.5) ? 1.0 : 0.0;
  const double v1_in = directional_variation(ind, 1); // one unit-length jump
  CHECK(v1_in == doctest::Approx(1.0).epsilon(1e-13));
  const GridFunction out = homothetic_interpolant(InputField::fine_grid(ind), s);
  CHECK(directional_variation(out, 1) <= v1_in * (1 + 1e-12));
}

TEST_CASE("clipped_average_interpolant: constants everywhere, clipped means at edges") {
  const DomainSpec s = DomainSpec::square(4, 4);
  const auto c = InputField::analytic([](double, double) { return 0.75; });
  const GridFunction uc = clipped_average_interpolant(c, s);
  for (const double v : uc.values()) CHECK(std::abs(v - 0.75) <= 1e-14);

  const auto linear = InputField::analytic([](double x, double) { return x; });
  const GridFunction ul = clipped_average_interpolant(linear, s);
  CHECK(ul(0, 0) == doctest::Approx(1.0 / 16.0).epsilon(1e-13)); // mean of x on [0,1/8]
  CHECK(ul(2, 2) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(ul(4, 2) == doctest::Approx(1.0 - 1.0 / 16.0).epsilon(1e-13));

  // Fine-grid path gives the same clipped means.
  DomainSpec fine_d = DomainSpec::square(32, 32);
  GridFunction xfine(fine_d);
  for (int l = 0; l <= 32; ++l)
    for (int k = 0; k <= 32; ++k) xfine.node(k, l) = k / 32.0;
  const GridFunction uf = clipped_average_interpolant(InputField::fine_grid(xfine), s);
  for (std::size_t i = 0; i < ul.size(); ++i)
    CHECK(ul.values()[i] == doctest::Approx(uf.values()[i]).epsilon(1e-13));

  CHECK_THROWS_AS(clipped_average_interpolant(c, DomainSpec::torus(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("interior averages reproduce affine functions") {
  const auto affine =
      InputField::analytic([](double x, double y) { return 0.3 + 0.7 * x - 0.2 * y; });
  const DomainSpec s = DomainSpec::square(8, 8);
  for (int l = 1; l < 8; ++l)
    for (int k = 1; k < 8; ++k) {
      const auto z = node_coords(s, {k, l});
      const double w = 0.3 + 0.7 * z[0] - 0.2 * z[1];
      CHECK(averaged_nodal_value(affine, s, {k, l}) == doctest::Approx(w).epsilon(1e-13));
    }
}

TEST_CASE("L^p stability on random fine-grid fields") {
  const DomainSpec fine_t = DomainSpec::torus(64, 64);
  const DomainSpec coarse_t = DomainSpec::torus(8, 8);
  const DomainSpec fine_s = DomainSpec::square(64, 64);
  const DomainSpec coarse_s = DomainSpec::square(8, 8);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridFunction wt = testing::random_grid(fine_t, seed);
    const GridFunction ut = box_average_interpolant(InputField::fine_grid(wt), coarse_t);
    const GridFunction ws = testing::random_grid(fine_s, seed + 1000);
    const GridFunction us = clipped_average_interpolant(InputField::fine_grid(ws), coarse_s);
    for (const double p : {1.0, 2.0, kInf}) {
      CHECK(lp_norm(ut, p) <= lp_norm(wt, p) * (1 + 1e-12));
      CHECK(lp_norm(us, p) <= lp_norm(ws, p) * (1 + 1e-12));
    }
  }
}

TEST_CASE("directional and isotropic TVD on random fine-grid fields") {
  const DomainSpec fine_t = DomainSpec::torus(64, 64);
  const DomainSpec coarse_t = DomainSpec::torus(8, 8);
  const DomainSpec fine_s = DomainSpec::square(64, 64);
  const DomainSpec coarse_s = DomainSpec::square(8, 8);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridFunction wt = testing::random_grid(fine_t, seed * 13);
    const GridFunction ut = box_average_interpolant(InputField::fine_grid(wt), coarse_t);
    const GridFunction ws = testing::random_grid(fine_s, seed * 13 + 7);
    const GridFunction us = clipped_average_interpolant(InputField::fine_grid(ws), coarse_s);
    for (int axis : {1, 2}) {
      CHECK(directional_variation(ut, axis) <=
            directional_variation(wt, axis) * (1 + 1e-12));
      CHECK(directional_variation(us, axis) <=
            directional_variation(ws, axis) * (1 + 1e-12));
    }
    CHECK(tv_iso(ut, 4) <= tv_iso(wt, 4) + 1e-6);
    CHECK(tv_iso(us, 4) <= tv_iso(ws, 4) + 1e-6);
  }
}
