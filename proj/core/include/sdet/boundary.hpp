#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdet/exponent.hpp"
#include "sdet/grid.hpp"

namespace sdet {

enum class BoundaryMethod { closed_form, grid };

std::string_view to_string(BoundaryMethod m) noexcept;

struct BoundaryResult {
  double beta = 0.5;
  double maximizer = 0.0;
  BoundaryMethod method = BoundaryMethod::grid;
  /// Node spacing of the scan; 0 for closed forms.
  double grid_resolution = 0.0;
};

struct ScanOptions {
  std::size_t points = 20001;
  /// Polish the best node with a bracketing minimizer (closed-form bodies only).
  bool refine = true;
};

struct AdmissibilityReport {
  bool pointwise_ok = true;
  bool integral_ok = true;
  bool convexity_ok = true;
  std::size_t pointwise_violations = 0;
  /// Largest alpha(u) - u^2 seen on the grid and where.
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_excess_at = 0.0;
  /// (t, (1/t) log int exp(t (alpha - u^2)) du) for t = 2^4 .. 2^12.
  std::vector<std::pair<double, double>> laplace_ladder;
  /// Most negative second difference when convexity is checked.
  double worst_curvature = 0.0;
  double worst_curvature_at = 0.0;

  bool admissible() const noexcept { return pointwise_ok && integral_ok && convexity_ok; }
  std::string summary() const;
};

AdmissibilityReport check_admissible(const ExponentFunction& alpha, const ScanOptions& opts = {});

/// 1/2 + max(0, sup_u {alpha(u) - u^2 + min(u^2, 1)/2}). Throws admissibility
/// when `check_admissible` fails.
BoundaryResult beta_sharp(const ExponentFunction& alpha, const ScanOptions& opts = {});

/// 1/2 + max(0, sup_{s >= 0} {gamma(s) - s + min(s, 1)/2}) for an s-axis exponent.
BoundaryResult beta_star_general(const ExponentFunction& gamma, const ScanOptions& opts = {});

/// sup_u {min(2(alpha - beta), alpha - beta) - u^2}; exceeds -1 iff beta < beta_sharp.
double hellinger_exponent(const ExponentFunction& alpha, double beta, const ScanOptions& opts = {});

/// sup_{q >= u} {alpha(q) - q^2}.
double tail_exponent(const ExponentFunction& alpha, double u, const ScanOptions& opts = {});

enum class HcBoundaryMethod {
  /// 1/2 + 1/2 sup_q {2 alpha(q) - 2 q^2 + min(q^2, 1)}.
  interchange,
  /// sup_{0 < u <= 1} {(1 + u^2)/2 + sup_{q >= u} (gamma(q) - q^2)} on a node grid.
  sweep,
};

BoundaryResult hc_achievable_boundary(const ExponentFunction& alpha,
                                      HcBoundaryMethod method = HcBoundaryMethod::interchange,
                                      const ScanOptions& opts = {});

/// 1/2 + r for r <= 1/4, 1 - (1 - sqrt r)_+^2 beyond.
double beta_idj(double r);
/// Inverse of beta_idj on (1/2, 1).
double r_star_idj(double beta);

enum class ClosedFormMode { beta_of_r, r_of_beta };

/// Exact piecewise boundary of a family. In beta-of-r mode the signal
/// parameter comes from `params`; in r-of-beta mode `beta` is inverted and the
/// family's signal parameter is returned (r, or the L-infinity norm for dilate).
double boundary_closed_form(Family family, const FamilyParams& params,
                            ClosedFormMode mode = ClosedFormMode::beta_of_r,
                            double beta = std::numeric_limits<double>::quiet_NaN());

/// sup_t {beta_idj(t^2) - f(t)} clamped to [1/2, 1] over the finite nodes of f.
BoundaryResult beta_convolution(const GridFunction& f);
/// Same for a callable f scanned on [lo, hi] with refinement.
BoundaryResult beta_convolution(const std::function<double(double)>& f, double lo, double hi,
                                const ScanOptions& opts = {});

}  // namespace sdet
