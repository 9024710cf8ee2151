#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sdet/divergence.hpp"
#include "sdet/error.hpp"

using namespace sdet;

namespace {

Distribution coin(double p) { return Distribution::finite_discrete({{0, 1.0 - p}, {1, p}}); }

// Random law on up to 8 atoms drawn from {0,..,7}.
Distribution random_discrete(std::mt19937_64& rng, std::vector<double>& masses) {
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int k = count(rng);
  masses.assign(8, 0.0);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    masses[static_cast<std::size_t>(i)] = unif(rng);
    total += masses[static_cast<std::size_t>(i)];
  }
  std::vector<Atom> atoms;
  for (int i = 0; i < 8; ++i) {
    masses[static_cast<std::size_t>(i)] /= total;
    if (masses[static_cast<std::size_t>(i)] > 0.0) atoms.push_back({double(i), masses[static_cast<std::size_t>(i)]});
  }
  return Distribution::finite_discrete(atoms);
}

double tv_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - q[i]);
  return 0.5 * acc;
}

double h2_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    acc += d * d;
  }
  return acc;
}

}  // namespace

TEST(TotalVariation, Examples) {
  const auto p = coin(0.5);
  EXPECT_EQ(total_variation(p, p).value, 0.0);
  EXPECT_NEAR(total_variation(coin(0.5), coin(0.75)).value, 0.25, 1e-15);
  EXPECT_EQ(total_variation(Distribution::point_mass(0), Distribution::point_mass(1)).value, 1.0);
  EXPECT_EQ(error_sum(p, p).value, 1.0);
  EXPECT_NEAR(error_sum(coin(0.5), coin(0.75)).value, 0.75, 1e-15);
  EXPECT_EQ(error_sum(Distribution::point_mass(0), Distribution::point_mass(1)).value, 0.0);
}

TEST(TotalVariation, IncompatibleLayouts) {
  try {
    total_variation(coin(0.5), Distribution::gaussian());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::incompatible_laws);
  }
}

TEST(TotalVariation, GaussianShift) {
  // TV(N(0,1), N(mu,1)) = 2 Phi(mu/2) - 1.
  for (double mu : {0.1, 1.0, 3.0}) {
    const auto r = total_variation(Distribution::gaussian(), Distribution::gaussian(mu, 1));
    EXPECT_NEAR(r.value, std::erf(mu / (2.0 * std::sqrt(2.0))), 1e-9);
    EXPECT_LE(r.error, 1e-6);
  }
}

TEST(Hellinger, Examples) {
  EXPECT_EQ(hellinger_sq(Distribution::point_mass(0), Distribution::point_mass(1)).value, 2.0);
  EXPECT_NEAR(hellinger_sq(coin(0.5), coin(0.75)).value, 2.0 - 2.0 * (std::sqrt(0.125) + std::sqrt(0.375)), 1e-15);
  EXPECT_NEAR(hellinger_sq(coin(0.5), coin(0.75)).value, 0.068148, 1e-6);
  EXPECT_EQ(hellinger_sq(coin(0.3), coin(0.3)).value, 0.0);
}

TEST(Hellinger, GaussianShift) {
  // H^2(N(0,1), N(mu,1)) = 2 (1 - exp(-mu^2/8)).
  for (double mu : {0.2, 1.0, 4.0}) {
    const auto r = hellinger_sq(Distribution::gaussian(), Distribution::gaussian(mu, 1));
    EXPECT_NEAR(r.value, 2.0 * (1.0 - std::exp(-mu * mu / 8.0)), 1e-9);
    EXPECT_LE(r.error, 1e-6);
  }
}

TEST(Hellinger, Tensorize) {
  EXPECT_NEAR(hellinger_tensorize(0.5, 2), 0.875, 1e-15);
  EXPECT_EQ(hellinger_tensorize(0.0, 17), 0.0);
  EXPECT_EQ(hellinger_tensorize(2.0, 3), 2.0);
  EXPECT_THROW(hellinger_tensorize(2.5, 3), Error);
}

TEST(Hellinger, TensorizeMatchesProductLaw) {
  // Product of two coins enumerated by hand.
  const double p = 0.3;
  const double q = 0.6;
  const std::vector<Atom> pp{{0, (1 - p) * (1 - p)}, {1, (1 - p) * p}, {2, p * (1 - p)}, {3, p * p}};
  const std::vector<Atom> qq{{0, (1 - q) * (1 - q)}, {1, (1 - q) * q}, {2, q * (1 - q)}, {3, q * q}};
  const double h2 = hellinger_sq(coin(p), coin(q)).value;
  const double direct = hellinger_sq(Distribution::finite_discrete(pp), Distribution::finite_discrete(qq)).value;
  EXPECT_NEAR(hellinger_tensorize(h2, 2), direct, 1e-12);
}

TEST(Hellinger, TvBoundsExamples) {
  const auto b = tv_hellinger_bounds(0.5);
  EXPECT_NEAR(b.lower, 0.25, 1e-15);
  EXPECT_NEAR(b.upper, std::sqrt(0.5) * std::sqrt(0.875), 1e-15);
  EXPECT_NEAR(b.upper, 0.661438, 1e-6);
  EXPECT_EQ(tv_hellinger_bounds(0.0).lower, 0.0);
  EXPECT_EQ(tv_hellinger_bounds(0.0).upper, 0.0);
  EXPECT_EQ(tv_hellinger_bounds(2.0).lower, 1.0);
  EXPECT_EQ(tv_hellinger_bounds(2.0).upper, 1.0);
  try {
    tv_hellinger_bounds(-0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_distance);
  }
}

TEST(Hellinger, RandomPairsBracketTv) {
  std::mt19937_64 rng(2024);
  std::vector<double> pm;
  std::vector<double> qm;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_discrete(rng, pm);
    const auto q = random_discrete(rng, qm);
    const double tv = total_variation(p, q).value;
    const double h2 = hellinger_sq(p, q).value;
    EXPECT_NEAR(tv, tv_oracle(pm, qm), 1e-12);
    EXPECT_NEAR(h2, h2_oracle(pm, qm), 1e-12);
    const auto b = tv_hellinger_bounds(h2);
    EXPECT_LE(b.lower, tv);
    EXPECT_LE(tv, b.upper);
  }
}

TEST(Hellinger, MixtureMonotoneInEpsilon) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pm;
  std::vector<double> qm;
  for (int i = 0; i < 200; ++i) {
    const auto p = random_discrete(rng, pm);
    const auto q = random_discrete(rng, qm);
    double a = unif(rng);
    double b = unif(rng);
    if (a > b) std::swap(a, b);
    const auto mix_a = SparseMixture(p, q, a).mixed();
    const auto mix_b = SparseMixture(p, q, b).mixed();
    EXPECT_LE(hellinger_sq(p, mix_a).value, hellinger_sq(p, mix_b).value + 1e-12);
  }
}

TEST(MixtureHellinger, Examples) {
  EXPECT_EQ(mixture_hellinger_singular(0.37, 0.0), 0.37);
  EXPECT_EQ(mixture_hellinger_singular(0.37, 1.0), 2.0);
  EXPECT_NEAR(mixture_hellinger_singular(0.1, 0.5), 2.0 * (1.0 - std::sqrt(0.5)) + std::sqrt(0.5) * 0.1, 1e-15);
  EXPECT_NEAR(mixture_hellinger_singular(0.1, 0.5), 0.656497, 1e-6);
}

TEST(MixtureHellinger, AgreesWithDirectComputation) {
  // P = coin, Q0 another coin, Q1 a point mass at 5 (singular to P).
  const auto p = coin(0.4);
  const auto q0 = coin(0.7);
  for (double eps : {0.0, 0.1, 0.5, 0.9}) {
    const auto q = Distribution::mixture({{1.0 - eps, q0}, {eps, Distribution::point_mass(5)}});
    const double direct = hellinger_sq(p, q).value;
    EXPECT_NEAR(mixture_hellinger_singular(hellinger_sq(p, q0).value, eps), direct, 1e-12);
  }
}

TEST(MixtureHellinger, FactorFourSandwich) {
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      const double eps = i / 100.0;
      const double h2 = 2.0 * j / 100.0;
      const double ratio = mixture_hellinger_singular(h2, eps) / std::max(eps, h2);
      EXPECT_GE(ratio, 0.25);
      EXPECT_LE(ratio, 4.0);
    }
  }
}

TEST(Decompose, Cases) {
  const auto null_law = Distribution::gaussian();
  const DeclaredDecomposition none{0.0, Distribution::gaussian(1, 1), Distribution::point_mass(0.0)};
  // A point mass is singular to the Gaussian.
  const auto d0 = decompose_alternative(null_law, none, 0.01, 1000);
  EXPECT_EQ(d0.epsilon_prime, 0.01);
  EXPECT_EQ(d0.detect_case, DecompositionCase::ac_determined);

  const DeclaredDecomposition declared{0.3, Distribution::gaussian(1, 1), Distribution::point_mass(2.0)};
  EXPECT_EQ(decompose_alternative(null_law, declared, 0.2, 100).kappa, 0.3);

  const double eps = epsilon_from_beta(1e4, 0.5);
  const DeclaredDecomposition tenth{0.1, Distribution::gaussian(1, 1), Distribution::point_mass(2.0)};
  const auto d2 = decompose_alternative(null_law, tenth, eps, 10000);
  EXPECT_EQ(d2.detect_case, DecompositionCase::singular_detectable);
  EXPECT_NEAR(d2.epsilon_prime, eps * 0.9 / (1.0 - eps * 0.1), 1e-16);
  EXPECT_EQ(d2.q_prime.epsilon, d2.epsilon_prime);
  EXPECT_NE(to_string(d2.detect_case).find("case-2"), std::string::npos);
}

TEST(Decompose, RejectsNonSingularPart) {
  const auto coin_null = coin(0.5);
  const DeclaredDecomposition shared{0.2, coin(0.9), Distribution::point_mass(1.0)};
  try {
    decompose_alternative(coin_null, shared, 0.1, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_singular);
  }
  const DeclaredDecomposition overlap{0.2, Distribution::gaussian(), Distribution::uniform(-1, 1)};
  EXPECT_THROW(decompose_alternative(Distribution::gaussian(), overlap, 0.1, 100), Error);
}

TEST(Range, ProductTvBoundShrinksBeyondBetaOne) {
  // beta = 1.2: the Hellinger upper bound on TV(P^n, Q^n) decreases with n.
  double prev = 2.0;
  for (double n : {1e2, 1e3, 1e4}) {
    const double eps = epsilon_from_beta(n, 1.2);
    const auto p = coin(0.5);
    const auto q = SparseMixture(p, Distribution::finite_discrete({{0, 0.1}, {1, 0.9}}), eps).mixed();
    const double h2n = hellinger_tensorize(hellinger_sq(p, q).value, static_cast<long long>(n));
    const double upper = tv_hellinger_bounds(h2n).upper;
    EXPECT_LT(upper, prev);
    prev = upper;
  }
}
