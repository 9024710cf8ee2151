#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "sdet/error.hpp"
#include "sdet/grid.hpp"

using namespace sdet;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Linspace, Endpoints) {
  const auto xs = linspace(-5, 5, 20001);
  EXPECT_EQ(xs.size(), 20001u);
  EXPECT_EQ(xs.front(), -5.0);
  EXPECT_EQ(xs.back(), 5.0);
}

TEST(GridFunction, Validation) {
  EXPECT_THROW(GridFunction({0, 0}, {1, 2}), Error);
  EXPECT_THROW(GridFunction({0, 1}, {1}), Error);
  EXPECT_THROW(GridFunction({0, 1}, {1, std::nan("")}), Error);
  const GridFunction g({0, 1, 2}, {0, 1, -kInf});
  EXPECT_EQ(g(0.5), 0.5);
  EXPECT_EQ(g(1.5), -kInf);
  EXPECT_EQ(g(3.0), -kInf);
}

TEST(EssSupGrid, Examples) {
  const auto g = GridFunction::sample([](double u) { return -u * u; }, -5, 5, 20001);
  const auto r = ess_sup_grid(g);
  EXPECT_NEAR(r.value, 0.0, 1e-15);
  EXPECT_NEAR(r.argmax, 0.0, 1e-12);

  const auto flat = GridFunction::sample([](double) { return 3.5; }, -2, 7, 101);
  const auto f = ess_sup_grid(flat);
  EXPECT_EQ(f.value, 3.5);
  EXPECT_EQ(f.argmax, -2.0);

  const double sr = std::sqrt(0.3);
  const auto idj = GridFunction::sample([&](double u) { return 2 * u * sr - 0.3 - u * u; }, -5, 5, 20001);
  const auto m = ess_sup_grid(idj);
  EXPECT_NEAR(m.value, 0.0, 1e-7);
  EXPECT_NEAR(m.argmax, sr, 2.5e-4);
}

TEST(EssSupGrid, SkipsMinusInfinity) {
  const GridFunction g({0, 1, 2, 3}, {-kInf, -2.0, -kInf, -1.0});
  const auto r = ess_sup_grid(g);
  EXPECT_EQ(r.value, -1.0);
  EXPECT_EQ(r.argmax, 3.0);
  EXPECT_THROW(ess_sup_grid(GridFunction({0, 1}, {-kInf, -kInf})), Error);
  try {
    ess_sup_grid(GridFunction());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_grid);
  }
}

TEST(EssSup, RefinementFindsOffGridPeak) {
  const double peak = 0.123456789;
  const auto r = ess_sup([&](double u) { return -(u - peak) * (u - peak); }, -5, 5, 1001, true);
  EXPECT_NEAR(r.argmax, peak, 1e-7);
  EXPECT_NEAR(r.value, 0.0, 1e-14);
  const auto kink = ess_sup([&](double u) { return -std::fabs(u - peak); }, -5, 5, 1001, true);
  EXPECT_NEAR(kink.value, 0.0, 1e-7);
}

TEST(Laplace, GaussianIntegral) {
  const auto g = GridFunction::sample([](double u) { return -u * u; }, -5, 5, 20001);
  const double expected = std::log(std::sqrt(M_PI / 100.0)) / 100.0;
  EXPECT_NEAR(laplace_log_integral(g, 100.0), expected, 1e-10);
  EXPECT_NEAR(laplace_log_integral(g, 100.0), -0.0173022, 1e-7);
  double prev = -kInf;
  for (double M : {1e1, 1e2, 1e3, 1e4}) {
    const double v = laplace_log_integral(g, M);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT(std::fabs(prev), 1e-3);
}

TEST(Laplace, ConstantOnUnitInterval) {
  const auto g = GridFunction::sample([](double) { return -0.7; }, 0, 1, 11);
  EXPECT_NEAR(laplace_log_integral(g, 3.0), -0.7, 1e-15);
  EXPECT_NEAR(laplace_log_integral(g, 1e4), -0.7, 1e-15);
}

TEST(Laplace, IdjGapApproachesZero) {
  const double sr = 0.5;
  const auto g = GridFunction::sample([&](double u) { return 2 * u * sr - 0.25 - u * u; }, -5, 5, 20001);
  double prev = -kInf;
  for (double M : {1e2, 1e3, 1e4}) {
    const double v = laplace_log_integral(g, M);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 0.0);
    prev = v;
  }
}

TEST(Laplace, InfinitiesAndErrors) {
  const GridFunction with_hole({0, 1, 2}, {0.0, -kInf, 0.0});
  // Trapezoid weights 0.5 + 0.5 on the two surviving nodes.
  EXPECT_NEAR(laplace_log_integral(with_hole, 2.0), 0.0, 1e-15);
  EXPECT_EQ(laplace_log_integral(GridFunction({0, 1}, {0.0, kInf}), 1.0), kInf);
  EXPECT_THROW(laplace_log_integral(with_hole, 0.0), Error);
}
