#pragma once

// Standard normal helpers. Upper-tail functions are computed directly rather
// than as 1 - cdf so that tail ratios keep full relative precision.

namespace sdet::normal {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double pdf(double x) noexcept;
double log_pdf(double x) noexcept;
double cdf(double x) noexcept;
double sf(double x) noexcept;

/// Inverse of cdf on (0,1).
double quantile(double p);
/// Inverse of sf on (0,1): returns x with sf(x) = q.
double quantile_upper(double q);

/// Mills ratio sf(x) / pdf(x).
double mills_ratio(double x) noexcept;

}  // namespace sdet::normal
