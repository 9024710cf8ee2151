#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sdet/distribution.hpp"

namespace sdet {

/// Right-continuous empirical CDF backed by a sorted copy of the sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> sample);

  /// Fraction of points <= t.
  double operator()(double t) const;
  /// Fraction of points < t.
  double left(double t) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

enum class Decision { null, alternative };

std::string_view to_string(Decision d) noexcept;

struct HcOptions {
  /// Keep only thresholds whose null CDF lies in [1/n, 1/2].
  bool restricted = false;
};

struct HcStatistic {
  double statistic = 0.0;
  double arg_t = 0.0;
};

/// sqrt(n) sup_t |F_n(t) - F(t)| / sqrt(F(t)(1 - F(t))), evaluated exactly on
/// the left and right limits at each distinct sample point. Ties in the
/// supremum resolve to the smallest t, left limit first.
HcStatistic hc_statistic(std::span<const double> sample, const Distribution& null_dist, const HcOptions& opts = {});

/// sqrt(2 (1 + delta) log log n).
double hc_threshold(long long n, double delta);
Decision hc_decision(double statistic, long long n, double delta);

struct HCResult {
  double statistic = 0.0;
  double arg_t = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::null;
  long long n = 0;
  double delta = 0.1;
};

HCResult hc_test(std::span<const double> sample, const Distribution& null_dist, double delta = 0.1,
                 const HcOptions& opts = {});

struct MaxTestResult {
  double max_abs = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::null;
  /// Set when |u| < 1, below the regime the test is designed for.
  bool below_regime = false;
};

/// Alternative iff max |Y_i| > |u| sqrt(2 log n).
MaxTestResult max_test(std::span<const double> sample, long long n, double u = 1.0);

struct LrResult {
  double log_lr = 0.0;
  Decision decision = Decision::null;
};

/// sum_i log(1 + eps (exp(l(Y_i)) - 1)); alternative iff log_lr >= 0. A point
/// the null cannot produce but the alternative can gives log_lr = +inf.
LrResult lr_test(std::span<const double> sample, const SparseMixture& mix);

/// sqrt(n) (F_n(t) - F(t)) / sqrt(F(t)(1 - F(t))) at t = sqrt(2 s log n).
double vn_statistic(std::span<const double> sample, double s, long long n, const Distribution& null_dist);

}  // namespace sdet
