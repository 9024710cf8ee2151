#include "sdet/hctest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sdet/error.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sqrt(n) |c/n - p| / sqrt(p pbar) with the numerator taken on whichever tail
// keeps precision: p directly below the median, pbar above it.
double standardized(std::size_t count, std::size_t n, double p, double pbar) {
  const double nn = static_cast<double>(n);
  const double diff = p <= 0.5 ? std::fabs(static_cast<double>(count) / nn - p)
                               : std::fabs(pbar - static_cast<double>(n - count) / nn);
  return std::sqrt(nn) * diff / std::sqrt(p * pbar);
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample) : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) fail(ErrorKind::empty_sample, "empirical CDF needs at least one point");
  for (double x : sorted_) {
    if (std::isnan(x)) fail(ErrorKind::invalid_parameter, "sample contains NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::left(double t) const {
  const auto k = std::lower_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

std::string_view to_string(Decision d) noexcept { return d == Decision::alternative ? "alternative" : "null"; }

HcStatistic hc_statistic(std::span<const double> sample, const Distribution& null_dist, const HcOptions& opts) {
  if (null_dist.has_atoms()) fail(ErrorKind::invalid_parameter, "HC needs a continuous null law");
  const EmpiricalCdf ecdf(sample);
  const auto& ys = ecdf.sorted();
  const std::size_t n = ys.size();
  const double lo_cut = 1.0 / static_cast<double>(n);

  HcStatistic best{0.0, std::numeric_limits<double>::quiet_NaN()};
  bool found = false;
  std::size_t i = 0;
  while (i < n) {
    const double t = ys[i];
    std::size_t j = i;
    while (j < n && ys[j] == t) ++j;
    const double p = null_dist.cdf(t);
    const double pbar = null_dist.sf(t);
    if (!opts.restricted || (p >= lo_cut && p <= 0.5)) {
      if (p <= 0.0 || pbar <= 0.0) {
        fail(ErrorKind::infinite_weight, fmt::format("null CDF is {} at sample point {}", p <= 0.0 ? 0 : 1, t));
      }
      // Left limit (count strictly below t), then the value at t.
      for (std::size_t count : {i, j}) {
        const double val = standardized(count, n, p, pbar);
        if (!found || val > best.statistic) {
          best = {val, t};
          found = true;
        }
      }
    }
    i = j;
  }
  return best;
}

double hc_threshold(long long n, double delta) {
  if (n < 16) fail(ErrorKind::invalid_sample_size, fmt::format("HC threshold needs n >= 16 (got {})", n));
  if (!(delta > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("delta must be > 0 (got {})", delta));
  return std::sqrt(2.0 * (1.0 + delta) * std::log(std::log(static_cast<double>(n))));
}

Decision hc_decision(double statistic, long long n, double delta) {
  return statistic > hc_threshold(n, delta) ? Decision::alternative : Decision::null;
}

HCResult hc_test(std::span<const double> sample, const Distribution& null_dist, double delta, const HcOptions& opts) {
  const auto n = static_cast<long long>(sample.size());
  const double thr = hc_threshold(n, delta);
  const auto hc = hc_statistic(sample, null_dist, opts);
  return {hc.statistic, hc.arg_t, thr, hc.statistic > thr ? Decision::alternative : Decision::null, n, delta};
}

MaxTestResult max_test(std::span<const double> sample, long long n, double u) {
  if (n < 2) fail(ErrorKind::invalid_sample_size, fmt::format("max test needs n >= 2 (got {})", n));
  if (!std::isfinite(u)) fail(ErrorKind::invalid_parameter, "u must be finite");
  MaxTestResult res;
  for (double y : sample) res.max_abs = std::max(res.max_abs, std::fabs(y));
  res.threshold = std::fabs(u) * std::sqrt(2.0 * std::log(static_cast<double>(n)));
  res.decision = res.max_abs > res.threshold ? Decision::alternative : Decision::null;
  res.below_regime = std::fabs(u) < 1.0;
  return res;
}

LrResult lr_test(std::span<const double> sample, const SparseMixture& mix) {
  const double eps = mix.epsilon;
  LrResult res;
  if (eps == 0.0) {
    res.decision = Decision::alternative;
    return res;
  }
  const double log_eps = std::log(eps);
  const double log_keep = std::log1p(-eps);
  double acc = 0.0;
  for (double y : sample) {
    double l = 0.0;
    try {
      l = log_likelihood_ratio(mix.alt_dist, mix.null_dist, y);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_point) throw;
      return {kInf, Decision::alternative};
    }
    if (l <= 0.0) {
      acc += std::log1p(eps * std::expm1(l));
    } else {
      // log((1 - eps) + eps e^l) by log-sum-exp.
      const double a = log_eps + l;
      const double b = log_keep;
      const double m = std::max(a, b);
      acc += b == -kInf ? a : m + std::log(std::exp(a - m) + std::exp(b - m));
    }
  }
  res.log_lr = acc;
  res.decision = acc >= 0.0 ? Decision::alternative : Decision::null;
  return res;
}

double vn_statistic(std::span<const double> sample, double s, long long n, const Distribution& null_dist) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::invalid_parameter, fmt::format("s must lie in (0,1) (got {})", s));
  if (n < 16) fail(ErrorKind::invalid_sample_size, fmt::format("V_n needs n >= 16 (got {})", n));
  if (static_cast<long long>(sample.size()) != n) {
    fail(ErrorKind::invalid_sample_size, fmt::format("sample has {} points but n = {}", sample.size(), n));
  }
  const EmpiricalCdf ecdf(sample);
  const double t = std::sqrt(2.0 * s * std::log(static_cast<double>(n)));
  const double p = null_dist.cdf(t);
  const double pbar = null_dist.sf(t);
  if (p <= 0.0 || pbar <= 0.0) fail(ErrorKind::infinite_weight, "null CDF is 0 or 1 at the V_n threshold");
  const auto& ys = ecdf.sorted();
  const auto count = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), t) - ys.begin());
  const double mag = standardized(count, ys.size(), p, pbar);
  const double frac = static_cast<double>(count) / static_cast<double>(ys.size());
  return frac >= p ? mag : -mag;
}

}  // namespace sdet
