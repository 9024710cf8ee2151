#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdet/distribution.hpp"

namespace sdet {

/// Value with an absolute error estimate (zero for exact discrete sums).
struct DivergenceValue {
  double value = 0.0;
  double error = 0.0;
};

/// Controls quadrature for continuous pairs. When `breakpoints` is empty the
/// integration domain is chosen from far-tail quantiles of both laws.
struct QuadratureOptions {
  std::vector<double> breakpoints;
  double tolerance = 1e-11;
};

/// sup_A |P(A) - Q(A)|. Both laws must be purely discrete or purely continuous.
DivergenceValue total_variation(const Distribution& p, const Distribution& q,
                                const QuadratureOptions& opts = {});

/// 1 - TV(P,Q): minimal sum of Type-I and Type-II errors for a single draw.
DivergenceValue error_sum(const Distribution& p, const Distribution& q, const QuadratureOptions& opts = {});

/// Squared Hellinger distance with the [0,2] normalization.
DivergenceValue hellinger_sq(const Distribution& p, const Distribution& q, const QuadratureOptions& opts = {});

/// H^2(P^n, Q^n) from H^2(P, Q).
double hellinger_tensorize(double h2, long long n);

struct TvBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds on TV(P,Q) implied by H^2(P,Q): h2/2 <= TV <= H sqrt(1 - h2/4).
TvBounds tv_hellinger_bounds(double h2);

/// H^2(P, (1-eps) Q0 + eps Q1) when Q1 is singular to P, given H^2(P, Q0).
double mixture_hellinger_singular(double h2_pq0, double eps);

/// The alternative G written as (1 - kappa) G' + kappa nu with G' << null and
/// nu singular to the null. The split is declared by the caller.
struct DeclaredDecomposition {
  double kappa = 0.0;
  Distribution ac_part;
  Distribution singular_part;
};

enum class DecompositionCase {
  /// eps * kappa <= 1/n: detectability is that of the absolutely continuous part.
  ac_determined,
  /// eps * kappa > 1/n: a sample on the singular support reveals the alternative.
  singular_detectable,
};

std::string to_string(DecompositionCase c);

struct DecomposedAlternative {
  double kappa = 0.0;
  Distribution ac_part;
  Distribution singular_part;
  double epsilon_prime = 0.0;
  SparseMixture q_prime;
  DecompositionCase detect_case = DecompositionCase::ac_determined;
};

DecomposedAlternative decompose_alternative(const Distribution& null_dist, const DeclaredDecomposition& g_spec,
                                            double eps, long long n);

}  // namespace sdet
