#include "sdet/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "sdet/boundary.hpp"
#include "sdet/error.hpp"
#include "sdet/hctest.hpp"

namespace sdet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellRef {
  std::size_t beta_index = 0;
  std::size_t r_index = 0;
  std::size_t n_index = 0;
};

std::uint64_t cell_id(const ExperimentConfig& cfg, const CellRef& c) {
  return (c.beta_index * cfg.r_grid.size() + c.r_index) * cfg.n_list.size() + c.n_index;
}

bool rejects(TestKind test, std::span<const double> y, const ExperimentConfig& cfg, const SparseMixture& mix) {
  const auto n = static_cast<long long>(y.size());
  switch (test) {
    case TestKind::hc:
      try {
        return hc_test(y, mix.null_dist, cfg.delta, HcOptions{cfg.hc_restricted}).decision == Decision::alternative;
      } catch (const Error& e) {
        // A point where the null CDF is exactly 0 or 1 makes the statistic infinite.
        if (e.kind() == ErrorKind::infinite_weight) return true;
        throw;
      }
    case TestKind::lr:
      return lr_test(y, mix).decision == Decision::alternative;
    case TestKind::max:
      return max_test(y, n, cfg.max_u).decision == Decision::alternative;
  }
  return false;
}

double overlay(const ExperimentConfig& cfg, double r) {
  FamilyParams p = cfg.params;
  if (cfg.family == Family::dilate) {
    p.support_points.clear();
    p.support_interval.reset();
    p.linf = r;
  } else {
    p.r = r;
  }
  try {
    return boundary_closed_form(cfg.family, p);
  } catch (const Error&) {
    return kNaN;
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Decisions per (cell, test, replicate, hypothesis), then folded in cell order.
std::vector<PhaseCell> simulate(const ExperimentConfig& cfg, const std::vector<CellRef>& cells,
                                const std::vector<TestKind>& tests, unsigned workers) {
  const auto reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t nt = tests.size();
  std::vector<unsigned char> rejected(cells.size() * nt * reps * 2, 0);
  std::vector<SparseMixture> mixes;
  mixes.reserve(cells.size());
  for (const auto& c : cells) {
    mixes.push_back(family_mixture(cfg, cfg.beta_grid[c.beta_index], cfg.r_grid[c.r_index], cfg.n_list[c.n_index]));
  }

  const std::size_t total = cells.size() * reps;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    std::vector<double> y;
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t ci = task / reps;
      const std::size_t rep = task % reps;
      try {
        const auto& mix = mixes[ci];
        y.resize(static_cast<std::size_t>(cfg.n_list[cells[ci].n_index]));
        for (std::uint64_t h = 0; h < 2; ++h) {
          RngStream stream(StreamKey{cfg.seed, cell_id(cfg, cells[ci]), rep, h});
          if (h == 0) {
            sample_into(mix.null_dist, y, stream);
          } else {
            sample_into(mix, y, stream);
          }
          for (std::size_t t = 0; t < nt; ++t) {
            rejected[((ci * nt + t) * reps + rep) * 2 + h] = rejects(tests[t], y, cfg, mix) ? 1 : 0;
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  const unsigned count = std::min<std::size_t>(workers, std::max<std::size_t>(total, 1));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<PhaseCell> out;
  out.reserve(cells.size() * nt);
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& c = cells[ci];
    const double beta_star = overlay(cfg, cfg.r_grid[c.r_index]);
    for (std::size_t t = 0; t < nt; ++t) {
      long long false_alarms = 0;
      long long misses = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const std::size_t base = ((ci * nt + t) * reps + rep) * 2;
        false_alarms += rejected[base];
        misses += 1 - rejected[base + 1];
      }
      PhaseCell cell;
      cell.beta = cfg.beta_grid[c.beta_index];
      cell.r = cfg.r_grid[c.r_index];
      cell.n = cfg.n_list[c.n_index];
      cell.test = tests[t];
      const auto m = static_cast<long long>(reps);
      cell.type1_rate = static_cast<double>(false_alarms) / static_cast<double>(m);
      cell.type2_rate = static_cast<double>(misses) / static_cast<double>(m);
      cell.total_error = cell.type1_rate + cell.type2_rate;
      cell.wilson_ci_halfwidth = wilson_halfwidth(false_alarms, m) + wilson_halfwidth(misses, m);
      cell.replicates = cfg.replicates;
      cell.seed = cfg.seed;
      cell.beta_star = beta_star;
      out.push_back(cell);
    }
  }
  return out;
}

double log_ratio_or_inf(const Distribution& g, const Distribution& q, double y) {
  try {
    return log_likelihood_ratio(g, q, y);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::singular_point) return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace

std::string_view to_string(TestKind t) noexcept {
  switch (t) {
    case TestKind::hc: return "hc";
    case TestKind::lr: return "lr";
    case TestKind::max: return "max";
  }
  return "unknown";
}

TestKind test_from_string(std::string_view name) {
  if (name == "hc") return TestKind::hc;
  if (name == "lr") return TestKind::lr;
  if (name == "max") return TestKind::max;
  fail(ErrorKind::config, fmt::format("unknown test '{}' (expected hc, lr or max)", name));
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorKind::config, msg); };
  if (beta_grid.empty() || r_grid.empty() || n_list.empty()) bad("beta, r and n grids must be non-empty");
  if (replicates < 1) bad("replicates must be >= 1");
  if (tests.empty()) bad("at least one test is required");
  for (double b : beta_grid) {
    if (!(b >= 0.0)) bad(fmt::format("beta must be >= 0 (got {})", b));
  }
  for (double r : r_grid) {
    if (!(r >= 0.0)) bad(fmt::format("r must be >= 0 (got {})", r));
  }
  const bool has_hc = std::find(tests.begin(), tests.end(), TestKind::hc) != tests.end();
  for (long long n : n_list) {
    if (n < 2) bad(fmt::format("n must be >= 2 (got {})", n));
    if (has_hc && n < 16) bad(fmt::format("the hc test needs every n >= 16 (got {})", n));
  }
  if (!(delta > 0.0)) bad("delta must be > 0");
  if (family == Family::conv_from_f || family == Family::gen_gaussian_conv) {
    bad(fmt::format("family {} cannot be simulated", to_string(family)));
  }
  if (family == Family::gen_gaussian_location) {
    if (!(params.tau > 0.0)) bad("gglocation needs tau > 0");
    if (std::find(tests.begin(), tests.end(), TestKind::max) != tests.end()) {
      bad("the max test assumes a standard normal null; drop it for gglocation");
    }
  }
  if (family == Family::hetero && !params.tau2 && !(params.sigma2 > 0.0)) bad("hetero needs sigma2 > 0");
}

double wilson_halfwidth(long long successes, long long trials) {
  if (trials <= 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double m = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / m;
  return z / (1.0 + z * z / m) * std::sqrt(p * (1.0 - p) / m + z * z / (4.0 * m * m));
}

SparseMixture family_mixture(const ExperimentConfig& cfg, double beta, double r, long long n) {
  const double nn = static_cast<double>(n);
  const double eps = epsilon_from_beta(nn, beta);
  const auto& p = cfg.params;
  switch (cfg.family) {
    case Family::idj:
      return SparseMixture(Distribution::gaussian(), Distribution::gaussian(mu_from_r(nn, r), 1.0), eps);
    case Family::symmetric_idj: {
      const double mu = mu_from_r(nn, r);
      return SparseMixture(
          Distribution::gaussian(),
          Distribution::mixture({{0.5, Distribution::gaussian(-mu, 1.0)}, {0.5, Distribution::gaussian(mu, 1.0)}}),
          eps);
    }
    case Family::hetero: {
      const double s2 = p.tau2 ? 1.0 + *p.tau2 : p.sigma2;
      return SparseMixture(Distribution::gaussian(), Distribution::gaussian(mu_from_r(nn, r), std::sqrt(s2)), eps);
    }
    case Family::dilate: {
      std::vector<double> pts = p.support_points.empty() ? std::vector<double>{1.0} : p.support_points;
      double m = 0.0;
      for (double x : pts) m = std::max(m, std::fabs(x));
      const double scale = m > 0.0 ? r / m : 0.0;
      const double root = std::sqrt(2.0 * std::log(nn));
      std::vector<std::pair<double, Distribution>> comps;
      for (double x : pts) comps.emplace_back(1.0 / static_cast<double>(pts.size()), Distribution::gaussian(root * scale * x, 1.0));
      return SparseMixture(Distribution::gaussian(), Distribution::mixture(std::move(comps)), eps);
    }
    case Family::gen_gaussian_location: {
      const double loc = std::pow(r * std::log(nn), 1.0 / p.tau);
      return SparseMixture(Distribution::gen_gaussian(p.tau), Distribution::gen_gaussian(p.tau, loc), eps);
    }
    case Family::conv_from_f:
    case Family::gen_gaussian_conv:
      break;
  }
  fail(ErrorKind::config, fmt::format("family {} cannot be simulated", to_string(cfg.family)));
}

PhaseTable phase_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<CellRef> cells;
  for (std::size_t b = 0; b < cfg.beta_grid.size(); ++b) {
    for (std::size_t r = 0; r < cfg.r_grid.size(); ++r) {
      for (std::size_t n = 0; n < cfg.n_list.size(); ++n) cells.push_back({b, r, n});
    }
  }
  PhaseTable table;
  table.worker_count = resolve_workers(cfg.workers);
  table.cells = simulate(cfg, cells, cfg.tests, table.worker_count);
  table.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

PhaseCell run_cell(const ExperimentConfig& cfg, std::size_t beta_index, std::size_t r_index, std::size_t n_index,
                   TestKind test) {
  cfg.validate();
  if (beta_index >= cfg.beta_grid.size() || r_index >= cfg.r_grid.size() || n_index >= cfg.n_list.size()) {
    fail(ErrorKind::config, "cell index outside the configured grids");
  }
  return simulate(cfg, {{beta_index, r_index, n_index}}, {test}, resolve_workers(cfg.workers)).front();
}

GammaEstimate estimate_gamma(const Distribution& q, const Distribution& g, const std::vector<long long>& n_list,
                             const std::vector<double>& s_grid) {
  return estimate_gamma(q, [&g](long long) { return g; }, n_list, s_grid);
}

GammaEstimate estimate_gamma(const Distribution& q, const std::function<Distribution(long long)>& g_of_n,
                             const std::vector<long long>& n_list, const std::vector<double>& s_grid) {
  if (n_list.empty() || s_grid.empty()) fail(ErrorKind::config, "n list and s grid must be non-empty");
  GammaEstimate est{n_list, s_grid, {}, std::vector<bool>(s_grid.size(), false)};
  for (long long n : n_list) {
    if (n < 2) fail(ErrorKind::invalid_sample_size, fmt::format("n must be >= 2 (got {})", n));
    const double log_n = std::log(static_cast<double>(n));
    const double floor_s = std::log(2.0) / log_n;
    const Distribution g = g_of_n(n);
    std::vector<double> row;
    row.reserve(s_grid.size());
    for (double s : s_grid) {
      if (!(s > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("s must be > 0 (got {})", s));
      if (s < floor_s) {
        row.push_back(kNaN);
        continue;
      }
      const double tail = std::exp(-s * log_n);
      const double lo = log_ratio_or_inf(g, q, q.quantile(tail));
      const double hi = log_ratio_or_inf(g, q, q.quantile_upper(tail));
      row.push_back(std::max(lo, hi) / log_n);
    }
    est.values.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    for (std::size_t i = 1; i < n_list.size(); ++i) {
      const double a = est.values[i - 1][j];
      const double b = est.values[i][j];
      if (std::isfinite(a) && std::isfinite(b) && std::fabs(a - b) > 0.05) est.flagged[j] = true;
    }
  }
  return est;
}

}  // namespace sdet
