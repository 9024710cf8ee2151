#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdet/distribution.hpp"
#include "sdet/exponent.hpp"

namespace sdet {

enum class TestKind { hc, lr, max };

std::string_view to_string(TestKind t) noexcept;
TestKind test_from_string(std::string_view name);

/// Phase-diagram sweep over (beta, r, n) for one family.
///
/// The meaning of r follows the family: the signal strength for idj,
/// symmetric_idj, hetero and gglocation; the L-infinity norm of the
/// rescaled support for dilate.
struct ExperimentConfig {
  Family family = Family::idj;
  FamilyParams params;
  std::vector<double> beta_grid;
  std::vector<double> r_grid;
  std::vector<long long> n_list;
  int replicates = 100;
  std::vector<TestKind> tests{TestKind::hc, TestKind::lr, TestKind::max};
  std::uint64_t seed = 0;
  double delta = 0.1;
  bool hc_restricted = false;
  /// Multiplier u in the max-test threshold u sqrt(2 log n).
  double max_u = 1.0;
  /// 0 selects the number of hardware threads.
  unsigned workers = 0;

  /// Throws config on any invariant violation.
  void validate() const;
};

struct PhaseCell {
  double beta = 0.0;
  double r = 0.0;
  long long n = 0;
  TestKind test = TestKind::hc;
  double type1_rate = 0.0;
  double type2_rate = 0.0;
  double total_error = 0.0;
  /// Sum of the Wilson 95% half-widths of the two rates.
  double wilson_ci_halfwidth = 0.0;
  int replicates = 0;
  std::uint64_t seed = 0;
  /// Closed-form boundary beta*(r) of the family; NaN when none exists.
  double beta_star = 0.0;
};

struct PhaseTable {
  std::vector<PhaseCell> cells;
  double wall_time = 0.0;
  unsigned worker_count = 1;
};

/// Wilson score interval half-width at 95% for `successes` out of `trials`.
double wilson_halfwidth(long long successes, long long trials);

/// Null and alternative laws of the family at (r, n); epsilon = n^-beta.
SparseMixture family_mixture(const ExperimentConfig& cfg, double beta, double r, long long n);

/// Rows ordered by beta, then r, then n, then test in config order.
PhaseTable phase_sweep(const ExperimentConfig& cfg);

/// One cell of the sweep. Uses the same random streams the full sweep would.
PhaseCell run_cell(const ExperimentConfig& cfg, std::size_t beta_index, std::size_t r_index, std::size_t n_index,
                   TestKind test);

struct GammaEstimate {
  std::vector<long long> n_list;
  std::vector<double> s_grid;
  /// values[i][j] at n_list[i], s_grid[j]; NaN below s = 1/log2 n.
  std::vector<std::vector<double>> values;
  /// flagged[j] when successive n differ by more than 0.05 at s_grid[j].
  std::vector<bool> flagged;
};

/// (l(z(n^-s)) v l(z(1 - n^-s))) / log n with l = log dG/dQ and z the null quantile.
GammaEstimate estimate_gamma(const Distribution& q, const Distribution& g, const std::vector<long long>& n_list,
                             const std::vector<double>& s_grid);

/// Same with a per-n alternative, for families whose G moves with n.
GammaEstimate estimate_gamma(const Distribution& q, const std::function<Distribution(long long)>& g_of_n,
                             const std::vector<long long>& n_list, const std::vector<double>& s_grid);

}  // namespace sdet
