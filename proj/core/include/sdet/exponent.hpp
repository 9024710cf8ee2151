#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdet/grid.hpp"

namespace sdet {

/// u-axis: alpha(u), the log-likelihood ratio at u sqrt(2 log n) over log n.
/// s-axis: gamma(s), the same ratio at the null quantiles n^-s and 1 - n^-s.
enum class Axis { u, s };

enum class Family {
  idj,                    ///< Gaussian location, G = N(sqrt(2 r log n), 1)
  symmetric_idj,          ///< symmetric two-point signal +-sqrt(2 r log n)
  hetero,                 ///< G = N(sqrt(2 r log n), sigma2)
  dilate,                 ///< signal sqrt(2 log n) X, X with bounded support
  conv_from_f,            ///< convolution model with signal-density exponent f
  gen_gaussian_conv,      ///< convolution model with Subbotin signal
  gen_gaussian_location,  ///< Subbotin null, location alternative (s-axis)
};

std::string_view to_string(Family f) noexcept;
std::string_view to_string(Axis a) noexcept;
Family family_from_string(std::string_view name);

/// Parameters for every family; each family reads only the fields it needs.
struct FamilyParams {
  double r = 0.0;
  double sigma2 = 1.0;
  double tau = 2.0;
  /// Zero-mean heteroscedastic signal variance: sigma2 = 1 + tau2, r = 0.
  std::optional<double> tau2;
  /// L-infinity norm of X for `dilate` when no explicit support is given.
  std::optional<double> linf;
  /// Finite support of X for `dilate`.
  std::vector<double> support_points;
  /// Interval support of X for `dilate`.
  std::optional<std::pair<double, double>> support_interval;
  /// f(t) for `conv_from_f`; +inf marks points off the signal support.
  GridFunction f;
};

/// The limit exponent function, given either as a closed form or a sampled
/// grid on a declared domain.
class ExponentFunction {
 public:
  static ExponentFunction closed_form(Family family, FamilyParams params, Axis axis, bool convolutional,
                                      std::function<double(double)> body, double scale);
  static ExponentFunction sampled(GridFunction grid, Axis axis, bool convolutional = false);

  Axis axis() const noexcept { return axis_; }
  bool convolutional() const noexcept { return convolutional_; }
  bool is_sampled() const noexcept { return grid_.has_value(); }
  const std::optional<Family>& family() const noexcept { return family_; }
  const FamilyParams& params() const noexcept { return params_; }
  const GridFunction* grid() const noexcept { return grid_ ? &*grid_ : nullptr; }

  double operator()(double x) const;

  /// Default scan domain: [-U, U] with U = max(5, 2 scale) on the u-axis,
  /// [0, S] with S = max(25, 4 scale^2) on the s-axis, or the sampled grid's range.
  std::pair<double, double> domain() const;

  /// Sampled nodes when the body is a grid, else `points` equispaced nodes on `domain()`.
  GridFunction tabulate(std::size_t points) const;

 private:
  ExponentFunction() = default;

  Axis axis_ = Axis::u;
  bool convolutional_ = false;
  std::optional<Family> family_;
  FamilyParams params_;
  std::function<double(double)> body_;
  std::optional<GridFunction> grid_;
  double scale_ = 1.0;
};

/// Closed-form exponent for a family. All families but gen_gaussian_location
/// live on the u-axis.
ExponentFunction alpha_family(Family family, const FamilyParams& params);

/// gamma(s) = max(alpha(sqrt s), alpha(-sqrt s)).
ExponentFunction to_s_axis(const ExponentFunction& alpha);

/// L-infinity norm of the dilation variable from whichever description is given.
double dilate_linf(const FamilyParams& params);

}  // namespace sdet
