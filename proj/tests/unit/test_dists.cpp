#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "sdet/distribution.hpp"
#include "sdet/error.hpp"
#include "sdet/normal.hpp"

using namespace sdet;

namespace {

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an sdet::Error";
  return ErrorKind::io;
}

}  // namespace

TEST(EpsilonFromBeta, Examples) {
  EXPECT_NEAR(epsilon_from_beta(100, 0.5), 0.1, 1e-15);
  EXPECT_EQ(epsilon_from_beta(10, 0.0), 1.0);
  EXPECT_NEAR(epsilon_from_beta(1e4, 0.75), 1e-3, 1e-17);
  EXPECT_EQ(kind_of([] { epsilon_from_beta(1, 0.5); }), ErrorKind::invalid_sample_size);
}

TEST(MuFromR, Examples) {
  EXPECT_NEAR(mu_from_r(std::exp(2.0), 1.0), 2.0, 1e-14);
  EXPECT_EQ(mu_from_r(50, 0.0), 0.0);
  EXPECT_NEAR(mu_from_r(std::exp(8.0), 0.25), 2.0, 1e-14);
  EXPECT_EQ(kind_of([] { mu_from_r(100, -1.0); }), ErrorKind::invalid_parameter);
}

TEST(LogLikelihoodRatio, GaussianLocation) {
  const auto g = Distribution::gaussian(2, 1);
  const auto q = Distribution::gaussian(0, 1);
  EXPECT_NEAR(log_likelihood_ratio(g, q, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(log_likelihood_ratio(g, q, 0.0), -2.0, 1e-14);
  for (double y : {-3.0, 0.3, 5.0}) {
    EXPECT_EQ(log_likelihood_ratio(q, q, y), 0.0);
    EXPECT_NEAR(log_likelihood_ratio(g, q, y), -2.0 + 2.0 * y, 1e-12);
  }
}

TEST(LogLikelihoodRatio, Antisymmetric) {
  const std::vector<Distribution> laws{Distribution::gaussian(0.5, 2), Distribution::gen_gaussian(1.0, 0.3),
                                       Distribution::gen_gaussian(1.5),
                                       Distribution::mixture({{0.3, Distribution::gaussian(-1, 1)},
                                                              {0.7, Distribution::gaussian(2, 0.5)}})};
  for (const auto& a : laws) {
    for (const auto& b : laws) {
      for (double y = -4.0; y <= 4.0; y += 0.37) {
        EXPECT_NEAR(log_likelihood_ratio(a, b, y), -log_likelihood_ratio(b, a, y), 1e-12);
      }
    }
  }
}

TEST(LogLikelihoodRatio, SingularAndUndefined) {
  const auto u = Distribution::uniform(0, 1);
  const auto n = Distribution::gaussian();
  EXPECT_EQ(kind_of([&] { log_likelihood_ratio(n, u, 2.0); }), ErrorKind::singular_point);
  EXPECT_EQ(kind_of([&] { log_likelihood_ratio(u, Distribution::uniform(3, 4), 2.0); }), ErrorKind::undefined_point);
  EXPECT_EQ(log_likelihood_ratio(u, n, 2.0), -std::numeric_limits<double>::infinity());
  const auto coin = Distribution::finite_discrete({{0, 0.5}, {1, 0.5}});
  EXPECT_NEAR(log_likelihood_ratio(Distribution::point_mass(1), coin, 1.0), std::log(2.0), 1e-15);
  EXPECT_EQ(kind_of([&] { log_likelihood_ratio(Distribution::point_mass(2), coin, 2.0); }), ErrorKind::singular_point);
}

TEST(Quantile, Examples) {
  EXPECT_EQ(Distribution::gaussian().quantile(0.5), 0.0);
  EXPECT_NEAR(Distribution::gen_gaussian(1.0).quantile(0.25), std::log(0.5), 1e-12);
  EXPECT_EQ(Distribution::finite_discrete({{0, 0.5}, {1, 0.5}}).quantile(0.5), 0.0);
  EXPECT_EQ(Distribution::finite_discrete({{0, 0.5}, {1, 0.5}}).quantile(0.5000001), 1.0);
  EXPECT_EQ(kind_of([] { Distribution::gaussian().quantile(0.0); }), ErrorKind::invalid_probability);
  EXPECT_EQ(kind_of([] { Distribution::gaussian().quantile(1.5); }), ErrorKind::invalid_probability);
}

TEST(Quantile, RoundTripOnContinuousKinds) {
  const std::vector<Distribution> laws{
      Distribution::gaussian(1, 3),
      Distribution::gen_gaussian(0.7),
      Distribution::gen_gaussian(1.0, 2.0),
      Distribution::gen_gaussian(3.0),
      Distribution::uniform(-1, 2),
      Distribution::dilated(Distribution::gen_gaussian(1.0), 2.5),
      Distribution::mixture({{0.9, Distribution::gaussian()}, {0.1, Distribution::gaussian(3, 1)}}),
  };
  for (const auto& d : laws) {
    for (int i = 1; i <= 1000; ++i) {
      const double p = i / 1001.0;
      const double y = d.quantile(p);
      EXPECT_NEAR(d.cdf(y), p, 1e-9) << "p=" << p;
      EXPECT_NEAR(d.sf(d.quantile_upper(p)), p, 1e-9) << "p=" << p;
    }
  }
}

TEST(Quantile, QuantileOfCdfNotAboveArgument) {
  const auto d = Distribution::gen_gaussian(1.5);
  for (double y = -5.0; y <= 5.0; y += 0.01) {
    const double p = d.cdf(y);
    if (p > 0.0 && p < 1.0) EXPECT_LE(d.quantile(p), y + 1e-9);
  }
}

TEST(GenGaussian, TauTwoIsNormalWithHalfVariance) {
  const auto d = Distribution::gen_gaussian(2.0);
  const double sd = std::sqrt(0.5);
  for (double y = -4.0; y <= 4.0; y += 0.25) {
    EXPECT_NEAR(d.cdf(y), phi_cdf(y / sd), 1e-14);
    const double logpdf = -0.5 * (y / sd) * (y / sd) - std::log(sd * std::sqrt(2.0 * M_PI));
    EXPECT_NEAR(d.log_density(y), logpdf, 1e-12);
  }
}

TEST(GenGaussian, DensityIntegratesToOne) {
  for (double tau : {0.5, 1.0, 1.7, 4.0}) {
    const auto d = Distribution::gen_gaussian(tau);
    // Midpoint rule on a wide window; tails beyond |y| = 60 are negligible for these tau.
    const double h = 1e-3;
    double acc = 0.0;
    for (double y = -400.0 + h / 2; y < 400.0; y += h) acc += std::exp(d.log_density(y)) * h;
    EXPECT_NEAR(acc, 1.0, 2e-5) << "tau=" << tau;
  }
}

TEST(Distribution, Invariants) {
  EXPECT_EQ(kind_of([] { Distribution::gaussian(0, 0); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { Distribution::gen_gaussian(-1); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { Distribution::dilated(Distribution::gaussian(), 0); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { Distribution::finite_discrete({{0, 0.5}, {1, 0.4}}); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { Distribution::finite_discrete({{0, 1.2}, {1, -0.2}}); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { SparseMixture(Distribution::gaussian(), Distribution::gaussian(), 1.5); }),
            ErrorKind::invalid_parameter);
}

TEST(Distribution, CdfNondecreasingAndRightContinuous) {
  const auto d = Distribution::mixture(
      {{0.5, Distribution::finite_discrete({{0, 0.5}, {1, 0.5}})}, {0.5, Distribution::gaussian()}});
  double prev = 0.0;
  for (double y = -5.0; y <= 5.0; y += 0.01) {
    const double c = d.cdf(y);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_NEAR(d.cdf(0.0) - d.cdf_left(0.0), 0.25, 1e-15);
  EXPECT_NEAR(d.cdf(1.0), d.cdf(1.0 + 1e-12), 1e-11);
}

TEST(SparseMixture, MixedLawIsADistribution) {
  const SparseMixture mix(Distribution::gaussian(), Distribution::gaussian(2, 1), 0.3);
  const auto m = mix.mixed();
  for (double y : {-1.0, 0.0, 2.5}) {
    EXPECT_NEAR(m.cdf(y), 0.7 * phi_cdf(y) + 0.3 * phi_cdf(y - 2.0), 1e-15);
  }
}

TEST(Sample, DeterministicAndEmpty) {
  RngStream a(StreamKey{7, 1, 2, 0});
  RngStream b(StreamKey{7, 1, 2, 0});
  const auto d = Distribution::gen_gaussian(1.3);
  EXPECT_EQ(sample(d, 1000, a), sample(d, 1000, b));
  RngStream c(StreamKey{7, 1, 2, 1});
  EXPECT_NE(sample(d, 10, c), sample(d, 10, a));
  EXPECT_TRUE(sample(d, 0, a).empty());
}

TEST(Sample, NormalMeanMillion) {
  RngStream s(12345);
  const auto y = sample(Distribution::gaussian(), 1000000, s);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  EXPECT_LT(std::fabs(mean), 0.005);
}

TEST(Sample, MixtureWithZeroEpsilonIsNull) {
  // KS distance against the null CDF below the 1% critical value in >= 95 of 100 trials.
  const SparseMixture mix(Distribution::gaussian(), Distribution::gaussian(5, 1), 0.0);
  const std::size_t n = 100000;
  const double crit = 1.6276 / std::sqrt(static_cast<double>(n));
  int passed = 0;
  std::vector<double> y(n);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    RngStream s(StreamKey{99, trial, 0, 0});
    sample_into(mix, y, s);
    std::sort(y.begin(), y.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = phi_cdf(y[i]);
      ks = std::max({ks, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    passed += ks < crit ? 1 : 0;
  }
  EXPECT_GE(passed, 95);
}

TEST(Sample, MixtureLabelFrequency) {
  const SparseMixture mix(Distribution::point_mass(0), Distribution::point_mass(1), 0.2);
  RngStream s(5);
  const auto y = sample(mix, 200000, s);
  const double frac = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  EXPECT_NEAR(frac, 0.2, 3.0 * std::sqrt(0.16 / 200000.0));
}

TEST(Normal, MillsRatioBounds) {
  for (double z = 1.0; z <= 10.0; z += 0.01) {
    const double m = normal::mills_ratio(z);
    EXPECT_LE(z / (1.0 + z * z), m);
    EXPECT_LE(m, 1.0 / z);
  }
}

TEST(Normal, TailAccuracy) {
  for (double x : {-8.0, -3.0, 0.0, 1.0, 6.0, 20.0}) {
    EXPECT_NEAR(normal::cdf(x), phi_cdf(x), 1e-15);
    const double sf = 0.5 * std::erfc(x / std::sqrt(2.0));
    EXPECT_NEAR(normal::sf(x) / sf, 1.0, 1e-13);
  }
  for (double q : {1e-300, 1e-30, 1e-8, 0.01, 0.3}) {
    EXPECT_NEAR(normal::sf(normal::quantile_upper(q)) / q, 1.0, 1e-12);
    EXPECT_NEAR(normal::cdf(normal::quantile(q)) / q, 1.0, 1e-12);
  }
}
