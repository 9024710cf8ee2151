#include "sdet/normal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "sdet/error.hpp"

namespace sdet::normal {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorKind::invalid_probability, "probability must lie in (0,1), got " + std::to_string(p));
  }
}

}  // namespace

double pdf(double x) noexcept { return std::exp(log_pdf(x)); }

double log_pdf(double x) noexcept { return -0.5 * x * x - kLogSqrt2Pi; }

double cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double quantile(double p) {
  check_probability(p);
  if (p > 0.5) return quantile_upper(1.0 - p);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double quantile_upper(double q) {
  check_probability(q);
  if (q > 0.5) return -quantile_upper(1.0 - q);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

double mills_ratio(double x) noexcept {
  // erfcx would be nicer; for |x| <= 37 the direct ratio is exact enough.
  return sf(x) / pdf(x);
}

}  // namespace sdet::normal
