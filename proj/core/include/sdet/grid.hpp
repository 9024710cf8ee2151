#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sdet {

/// Sampled function {(x_i, v_i)} with strictly increasing abscissae.
/// Values may be -inf (outside the support) or +inf where a penalty such as
/// f(t) in the convolution model is infinite.
struct GridFunction {
  std::vector<double> x;
  std::vector<double> v;

  GridFunction() = default;
  GridFunction(std::vector<double> xs, std::vector<double> vs);

  std::size_t size() const noexcept { return x.size(); }
  bool empty() const noexcept { return x.empty(); }
  double lo() const { return x.front(); }
  double hi() const { return x.back(); }

  /// Linear interpolation; -inf outside [lo, hi] or next to a non-finite node.
  double operator()(double at) const;

  static GridFunction sample(const std::function<double(double)>& f, double lo, double hi, std::size_t points);
};

/// N equally spaced points on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t points);

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

/// Plain maximum over the nodes. -inf nodes are skipped; ties go to the
/// smallest abscissa. Throws empty-grid when no node is finite.
SupResult ess_sup_grid(const GridFunction& f);

/// Dense scan of a callable on `points` nodes over [lo, hi]; when `refine` is
/// set, a bracketing 1-D minimizer polishes the best node inside its two
/// neighbouring cells. The refined point replaces the node only if strictly
/// better.
SupResult ess_sup(const std::function<double(double)>& f, double lo, double hi, std::size_t points, bool refine);

/// Local maximization of f on [lo, hi] (both endpoints evaluated as well).
SupResult refine_max(const std::function<double(double)>& f, double lo, double hi);

/// (1/M) log of the trapezoid integral of exp(M f) over the grid, evaluated
/// with a log-sum-exp shift. -inf nodes contribute zero. Returns +inf when the
/// sum overflows even after shifting (divergent integral).
double laplace_log_integral(const GridFunction& f, double M);

}  // namespace sdet
