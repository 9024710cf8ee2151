// sparse-detect: command-line front end for the sdet library.
//
// Exit codes: 0 success, 2 usage, 3 domain error, 4 I/O error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sdet/boundary.hpp"
#include "sdet/error.hpp"
#include "sdet/hctest.hpp"
#include "sdet/io.hpp"
#include "sdet/sim.hpp"

using namespace sdet;
using nlohmann::json;
using sdet::io::fmt12;

namespace {

enum class Format { text, csv, json };

struct Common {
  std::string format = "text";
  std::string output;
  Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    return Format::text;
  }
};

struct FamilyOpts {
  std::string family = "idj";
  std::optional<double> r;
  std::optional<double> sigma2;
  std::optional<double> tau;
  std::optional<double> tau2;
  std::optional<double> linf;
  std::vector<double> support;
  std::string f_input;

  FamilyParams params() const {
    FamilyParams p;
    if (r) p.r = *r;
    if (sigma2) p.sigma2 = *sigma2;
    if (tau) p.tau = *tau;
    p.tau2 = tau2;
    p.linf = linf;
    p.support_points = support;
    if (!f_input.empty()) {
      const auto e = io::read_exponent_csv(f_input);
      p.f = *e.grid();
    }
    return p;
  }
};

void add_family_flags(CLI::App* cmd, FamilyOpts& o) {
  cmd->add_option("--family", o.family, "idj, symmetric_idj, hetero, dilate, conv_from_f, ggconv, gglocation");
  cmd->add_option("--r", o.r, "signal strength r");
  cmd->add_option("--sigma2", o.sigma2, "signal variance (hetero)");
  cmd->add_option("--tau", o.tau, "generalized Gaussian shape");
  cmd->add_option("--tau2", o.tau2, "zero-mean signal variance (hetero, r = 0)");
  cmd->add_option("--linf", o.linf, "L-infinity norm of the dilation variable (dilate)");
  cmd->add_option("--support", o.support, "support points of the dilation variable (dilate)")->delimiter(',');
  cmd->add_option("--f", o.f_input, "CSV of t,f(t) for conv_from_f");
}

// lo:hi:step or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto colon = std::count(text.begin(), text.end(), ':');
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw CLI::ValidationError("grid", "'" + s + "' is not a number in '" + text + "'");
    return v;
  };
  if (colon == 2) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    const double lo = num(text.substr(0, a));
    const double hi = num(text.substr(a + 1, b - a - 1));
    const double step = num(text.substr(b + 1));
    if (!(step > 0.0) || hi < lo) throw CLI::ValidationError("grid", "'" + text + "' needs lo <= hi and step > 0");
    const auto k = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= k; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  if (colon != 0) throw CLI::ValidationError("grid", "'" + text + "' is neither lo:hi:step nor a list");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(num(item));
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
  return out;
}

std::vector<long long> to_ints(const std::vector<double>& xs) {
  std::vector<long long> out;
  for (double x : xs) {
    if (x != std::floor(x)) throw CLI::ValidationError("n-list", fmt::format("{} is not an integer", x));
    out.push_back(static_cast<long long>(x));
  }
  return out;
}

// gaussian[:mean[:sd]], uniform[:lo:hi], ggaussian:tau[:location], point:x,
// inline JSON, or a path to a JSON file.
Distribution parse_distribution(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return io::distribution_from_json(json::parse(text));
    } catch (const json::exception& e) {
      fail(ErrorKind::invalid_parameter, fmt::format("bad distribution JSON: {}", e.what()));
    }
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) fail(ErrorKind::invalid_parameter, "empty distribution");
  std::vector<double> args;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      args.push_back(std::stod(parts[i]));
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_parameter, fmt::format("'{}' is not a number in '{}'", parts[i], text));
    }
  }
  auto arg = [&](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
  const auto& kind = parts[0];
  if (kind == "gaussian" || kind == "normal") return Distribution::gaussian(arg(0, 0.0), arg(1, 1.0));
  if (kind == "uniform") return Distribution::uniform(arg(0, 0.0), arg(1, 1.0));
  if (kind == "ggaussian" || kind == "gen_gaussian") {
    if (args.empty()) fail(ErrorKind::invalid_parameter, "ggaussian needs a shape, e.g. ggaussian:1");
    return Distribution::gen_gaussian(args[0], arg(1, 0.0));
  }
  if (kind == "point") return Distribution::point_mass(arg(0, 0.0));
  return io::distribution_from_json(io::read_json_file(text));
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(ErrorKind::io, fmt::format("cannot write '{}'", path));
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) fail(ErrorKind::io, "write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// ---- boundary -------------------------------------------------------------

struct BoundaryCmd {
  FamilyOpts fam;
  std::optional<double> beta;
  std::string mode = "beta-of-r";
  std::string method = "closed-form";
  std::string r_grid;
  Common io;
};

double family_signal(Family f, const FamilyParams& p) { return f == Family::dilate ? dilate_linf(p) : p.r; }

int run_boundary(const BoundaryCmd& c) {
  const Family family = family_from_string(c.fam.family);
  FamilyParams p = c.fam.params();
  Output out(c.io.output);
  auto& os = out.get();

  if (c.mode == "r-of-beta") {
    if (!c.beta) fail(ErrorKind::invalid_parameter, "r-of-beta needs --beta");
    const double v = boundary_closed_form(family, p, ClosedFormMode::r_of_beta, *c.beta);
    const char* key = family == Family::dilate ? "linf" : "r";
    if (c.io.fmt() == Format::json) {
      print_json(os, {{"family", std::string(to_string(family))}, {"beta", io::number12(*c.beta)}, {key, io::number12(v)}});
    } else {
      os << fmt12(v) << "\n";
    }
    out.close();
    return 0;
  }

  auto evaluate = [&](const FamilyParams& q) -> BoundaryResult {
    if (c.method == "closed-form") {
      if (family == Family::conv_from_f) return beta_convolution(q.f);
      BoundaryResult b;
      b.beta = boundary_closed_form(family, q);
      b.method = BoundaryMethod::closed_form;
      b.maximizer = std::nan("");
      return b;
    }
    const auto alpha = alpha_family(family, q);
    if (c.method == "grid") return alpha.axis() == Axis::s ? beta_star_general(alpha) : beta_sharp(alpha);
    if (c.method == "hc") return hc_achievable_boundary(alpha);
    if (c.method == "hc-sweep") return hc_achievable_boundary(alpha, HcBoundaryMethod::sweep);
    fail(ErrorKind::invalid_parameter, fmt::format("unknown method '{}'", c.method));
  };

  if (!c.r_grid.empty()) {
    // Overlay curve: two columns (signal, beta_star).
    const auto grid = parse_grid(c.r_grid);
    const char* key = family == Family::dilate ? "linf" : "r";
    json rows = json::array();
    if (c.io.fmt() != Format::json) os << key << ",beta_star\n";
    for (double r : grid) {
      FamilyParams q = p;
      if (family == Family::dilate) {
        q.support_points.clear();
        q.linf = r;
      } else {
        q.r = r;
      }
      const double b = evaluate(q).beta;
      if (c.io.fmt() == Format::json) {
        rows.push_back({{key, io::number12(r)}, {"beta_star", io::number12(b)}});
      } else {
        os << fmt12(r) << "," << fmt12(b) << "\n";
      }
    }
    if (c.io.fmt() == Format::json) print_json(os, rows);
    out.close();
    return 0;
  }

  const auto b = evaluate(p);
  if (c.io.fmt() == Format::json) {
    auto j = io::to_json(b);
    j["family"] = std::string(to_string(family));
    j["params"] = io::to_json(p);
    print_json(os, j);
  } else if (c.io.fmt() == Format::csv) {
    os << "family,signal,beta,method\n"
       << to_string(family) << "," << fmt12(family_signal(family, p)) << "," << fmt12(b.beta) << ","
       << to_string(b.method) << "\n";
  } else {
    os << fmt12(b.beta) << "\n";
  }
  out.close();
  return 0;
}

// ---- exponent / check-alpha -------------------------------------------------

struct ExponentCmd {
  FamilyOpts fam;
  std::string axis = "native";
  std::size_t points = 2001;
  Common io;
};

int run_exponent(const ExponentCmd& c) {
  auto e = alpha_family(family_from_string(c.fam.family), c.fam.params());
  if (c.axis == "s" && e.axis() == Axis::u) e = to_s_axis(e);
  if (c.axis == "u" && e.axis() == Axis::s) fail(ErrorKind::wrong_parametrization, "this family lives on the s-axis");
  Output out(c.io.output);
  if (c.io.fmt() == Format::json) {
    const auto g = e.tabulate(c.points);
    json xs = json::array();
    json vs = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
      xs.push_back(io::number12(g.x[i]));
      vs.push_back(std::isfinite(g.v[i]) ? io::number12(g.v[i]) : json(nullptr));
    }
    print_json(out.get(), {{"axis", std::string(to_string(e.axis()))},
                           {"convolutional", e.convolutional()},
                           {"x", xs},
                           {"value", vs}});
  } else {
    io::write_exponent_csv(out.get(), e, c.points);
  }
  out.close();
  return 0;
}

struct CheckCmd {
  FamilyOpts fam;
  std::string input;
  bool convolutional = false;
  Common io;
};

int run_check(const CheckCmd& c) {
  auto alpha = [&] {
    if (c.input.empty()) return alpha_family(family_from_string(c.fam.family), c.fam.params());
    auto e = io::read_exponent_csv(c.input);
    if (c.convolutional && !e.convolutional()) e = ExponentFunction::sampled(*e.grid(), e.axis(), true);
    return e;
  }();
  const auto rep = check_admissible(alpha);
  std::optional<BoundaryResult> sharp;
  std::optional<double> hc;
  std::string hc_note;
  if (rep.admissible()) {
    sharp = beta_sharp(alpha);
    try {
      hc = hc_achievable_boundary(alpha).beta;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::hc_boundary_undefined) throw;
      hc_note = e.what();
    }
  }
  Output out(c.io.output);
  auto& os = out.get();
  if (c.io.fmt() == Format::json) {
    json ladder = json::array();
    for (const auto& [t, v] : rep.laplace_ladder) ladder.push_back({io::number12(t), io::number12(v)});
    json j{{"admissible", rep.admissible()},
           {"pointwise_ok", rep.pointwise_ok},
           {"integral_ok", rep.integral_ok},
           {"convexity_ok", rep.convexity_ok},
           {"pointwise_violations", rep.pointwise_violations},
           {"worst_excess", io::number12(rep.worst_excess)},
           {"worst_excess_at", io::number12(rep.worst_excess_at)},
           {"laplace_ladder", ladder}};
    if (sharp) j["beta_sharp"] = io::number12(sharp->beta);
    if (hc) j["hc_boundary"] = io::number12(*hc);
    print_json(os, j);
  } else {
    os << rep.summary() << "\n";
    if (sharp) os << "beta_sharp " << fmt12(sharp->beta) << "\n";
    if (hc) os << "hc_boundary " << fmt12(*hc) << "\n";
    if (!hc_note.empty()) os << "hc_boundary undefined: " << hc_note << "\n";
  }
  out.close();
  return rep.admissible() ? 0 : 3;
}

// ---- single-sample tests ----------------------------------------------------

struct SampleCmd {
  std::string input;
  std::string null_dist = "gaussian";
  std::string alt;
  double delta = 0.1;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<long long> n;
  double u = 1.0;
  bool restricted = false;
  Common io;
};

int run_hc(const SampleCmd& c) {
  const auto y = io::read_sample(c.input);
  const auto r = hc_test(y, parse_distribution(c.null_dist), c.delta, HcOptions{c.restricted});
  Output out(c.io.output);
  if (c.io.fmt() == Format::text) {
    out.get() << fmt::format("statistic {}\narg_t {}\nthreshold {}\ndecision {}\nn {}\n", fmt12(r.statistic),
                             fmt12(r.arg_t), fmt12(r.threshold), to_string(r.decision), r.n);
  } else if (c.io.fmt() == Format::csv) {
    out.get() << "statistic,arg_t,threshold,decision,n,delta\n"
              << fmt::format("{},{},{},{},{},{}\n", fmt12(r.statistic), fmt12(r.arg_t), fmt12(r.threshold),
                             to_string(r.decision), r.n, fmt12(r.delta));
  } else {
    print_json(out.get(), io::to_json(r));
  }
  out.close();
  return 0;
}

int run_lr(const SampleCmd& c) {
  const auto y = io::read_sample(c.input);
  if (c.alt.empty()) fail(ErrorKind::invalid_parameter, "lr needs --alt");
  double eps = 0.0;
  if (c.epsilon) {
    eps = *c.epsilon;
  } else if (c.beta) {
    eps = epsilon_from_beta(static_cast<double>(y.size()), *c.beta);
  } else {
    fail(ErrorKind::invalid_parameter, "lr needs --epsilon or --beta");
  }
  const SparseMixture mix(parse_distribution(c.null_dist), parse_distribution(c.alt), eps);
  const auto r = lr_test(y, mix);
  Output out(c.io.output);
  if (c.io.fmt() == Format::json) {
    print_json(out.get(), {{"log_lr", std::isfinite(r.log_lr) ? json(io::number12(r.log_lr)) : json("inf")},
                           {"decision", std::string(to_string(r.decision))},
                           {"epsilon", io::number12(eps)},
                           {"n", y.size()}});
  } else {
    out.get() << fmt::format("log_lr {}\ndecision {}\n", fmt12(r.log_lr), to_string(r.decision));
  }
  out.close();
  return 0;
}

int run_max(const SampleCmd& c) {
  const auto y = io::read_sample(c.input);
  const long long n = c.n ? *c.n : static_cast<long long>(y.size());
  const auto r = max_test(y, n, c.u);
  if (r.below_regime) spdlog::warn("|u| = {} is below 1, outside the regime the max test is designed for", c.u);
  Output out(c.io.output);
  if (c.io.fmt() == Format::json) {
    print_json(out.get(), {{"max_abs", io::number12(r.max_abs)},
                           {"threshold", io::number12(r.threshold)},
                           {"decision", std::string(to_string(r.decision))},
                           {"below_regime", r.below_regime}});
  } else {
    out.get() << fmt::format("max_abs {}\nthreshold {}\ndecision {}\n", fmt12(r.max_abs), fmt12(r.threshold),
                             to_string(r.decision));
  }
  out.close();
  return 0;
}

// ---- simulate -----------------------------------------------------------------

struct SimulateCmd {
  FamilyOpts fam;
  std::string config;
  std::string beta_grid;
  std::string r_grid;
  std::string n_list;
  std::optional<int> replicates;
  std::vector<std::string> tests;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<unsigned> workers;
  std::optional<double> max_u;
  bool restricted = false;
  std::string manifest;
  Common io;
};

int run_simulate(const SimulateCmd& c, const CLI::App& cmd) {
  ExperimentConfig cfg;
  json raw;
  if (!c.config.empty()) {
    raw = io::read_json_file(c.config);
    cfg = io::config_from_json(raw);
  }
  auto overridden = [&](const char* key, bool inline_given) {
    if (inline_given && raw.contains(key)) spdlog::warn("--{} overrides '{}' from {}", key, key, c.config);
    return inline_given;
  };
  if (overridden("family", cmd.count("--family") > 0)) cfg.family = family_from_string(c.fam.family);
  if (c.config.empty() && cmd.count("--family") == 0) cfg.family = family_from_string(c.fam.family);
  if (cmd.count("--sigma2") || cmd.count("--tau") || cmd.count("--tau2") || cmd.count("--support")) {
    if (raw.contains("params")) spdlog::warn("family flags override 'params' from {}", c.config);
    if (c.fam.sigma2) cfg.params.sigma2 = *c.fam.sigma2;
    if (c.fam.tau) cfg.params.tau = *c.fam.tau;
    if (c.fam.tau2) cfg.params.tau2 = c.fam.tau2;
    if (!c.fam.support.empty()) cfg.params.support_points = c.fam.support;
  }
  if (overridden("beta_grid", !c.beta_grid.empty())) cfg.beta_grid = parse_grid(c.beta_grid);
  if (overridden("r_grid", !c.r_grid.empty())) cfg.r_grid = parse_grid(c.r_grid);
  if (overridden("n_list", !c.n_list.empty())) cfg.n_list = to_ints(parse_grid(c.n_list));
  if (overridden("replicates", c.replicates.has_value())) cfg.replicates = *c.replicates;
  if (overridden("tests", !c.tests.empty())) {
    cfg.tests.clear();
    for (const auto& t : c.tests) cfg.tests.push_back(test_from_string(t));
  }
  if (overridden("seed", c.seed.has_value())) cfg.seed = *c.seed;
  if (overridden("delta", c.delta.has_value())) cfg.delta = *c.delta;
  if (overridden("workers", c.workers.has_value())) cfg.workers = *c.workers;
  if (overridden("max_u", c.max_u.has_value())) cfg.max_u = *c.max_u;
  if (overridden("hc_restricted", c.restricted)) cfg.hc_restricted = true;
  if (!c.seed && !raw.contains("seed")) {
    throw CLI::ValidationError("--seed", "simulate needs an explicit --seed (or 'seed' in the config)");
  }

  spdlog::info("sweep: {} beta x {} r x {} n x {} tests, {} replicates", cfg.beta_grid.size(), cfg.r_grid.size(),
               cfg.n_list.size(), cfg.tests.size(), cfg.replicates);
  const auto table = phase_sweep(cfg);
  spdlog::info("finished in {:.2f}s on {} workers", table.wall_time, table.worker_count);

  Output out(c.io.output);
  const auto manifest = io::manifest(cfg, table);
  if (c.io.fmt() == Format::json) {
    std::ostringstream csv;
    io::write_phase_csv(csv, table);
    json cells = json::array();
    for (const auto& cell : table.cells) {
      cells.push_back({{"beta", io::number12(cell.beta)},
                       {"r", io::number12(cell.r)},
                       {"n", cell.n},
                       {"test", std::string(to_string(cell.test))},
                       {"type1_rate", io::number12(cell.type1_rate)},
                       {"type2_rate", io::number12(cell.type2_rate)},
                       {"total_error", io::number12(cell.total_error)},
                       {"wilson_ci_halfwidth", io::number12(cell.wilson_ci_halfwidth)},
                       {"replicates", cell.replicates},
                       {"seed", cell.seed},
                       {"beta_star", std::isfinite(cell.beta_star) ? json(io::number12(cell.beta_star)) : json(nullptr)}});
    }
    print_json(out.get(), {{"cells", cells}, {"manifest", manifest}});
  } else {
    io::write_phase_csv(out.get(), table);
  }
  out.close();

  std::string manifest_path = c.manifest;
  if (manifest_path.empty() && !c.io.output.empty() && c.io.output != "-") manifest_path = c.io.output + ".manifest.json";
  if (!manifest_path.empty()) {
    Output m(manifest_path);
    print_json(m.get(), manifest);
    m.close();
  }
  return 0;
}

// ---- estimate-gamma ---------------------------------------------------------

struct GammaCmd {
  FamilyOpts fam;
  std::string null_dist;
  std::string alt;
  std::string n_list = "1000,10000,100000,1000000";
  std::string s_grid = "0.1:2:0.05";
  Common io;
};

int run_gamma(const GammaCmd& c, const CLI::App& cmd) {
  const auto ns = to_ints(parse_grid(c.n_list));
  const auto ss = parse_grid(c.s_grid);
  GammaEstimate est;
  if (!c.alt.empty()) {
    const auto q = parse_distribution(c.null_dist.empty() ? "gaussian" : c.null_dist);
    est = estimate_gamma(q, parse_distribution(c.alt), ns, ss);
  } else {
    ExperimentConfig cfg;
    cfg.family = family_from_string(c.fam.family);
    cfg.params = c.fam.params();
    if (cmd.count("--null")) spdlog::warn("--null is ignored when the pair comes from --family");
    const double r = cfg.family == Family::dilate ? dilate_linf(cfg.params) : cfg.params.r;
    const auto q = family_mixture(cfg, 0.5, r, ns.front()).null_dist;
    est = estimate_gamma(q, [&](long long n) { return family_mixture(cfg, 0.5, r, n).alt_dist; }, ns, ss);
  }
  Output out(c.io.output);
  auto& os = out.get();
  if (c.io.fmt() == Format::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < est.n_list.size(); ++i) {
      json vals = json::array();
      for (double v : est.values[i]) vals.push_back(std::isfinite(v) ? json(io::number12(v)) : json(nullptr));
      rows.push_back({{"n", est.n_list[i]}, {"gamma", vals}});
    }
    json s = json::array();
    for (double x : est.s_grid) s.push_back(io::number12(x));
    print_json(os, {{"s", s}, {"estimates", rows}, {"flagged", est.flagged}});
  } else {
    os << "n,s,gamma,flagged\n";
    for (std::size_t i = 0; i < est.n_list.size(); ++i)
      for (std::size_t j = 0; j < est.s_grid.size(); ++j)
        os << est.n_list[i] << "," << fmt12(est.s_grid[j]) << "," << fmt12(est.values[i][j]) << ","
           << (est.flagged[j] ? 1 : 0) << "\n";
  }
  out.close();
  return 0;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sparse-detect");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("SPARSE_DETECT_LOG")) {
    const auto parsed = spdlog::level::from_str(lvl);
    if (parsed == spdlog::level::off && std::string(lvl) != "off") {
      spdlog::warn("SPARSE_DETECT_LOG='{}' not recognized; use error, warn, info or debug", lvl);
    } else {
      spdlog::set_level(parsed);
    }
  }
}

void add_common(CLI::App* cmd, Common& c, const char* formats) {
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(CLI::detail::split(formats, ',')));
  cmd->add_option("--output,-o", c.output, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Sparse mixture detection boundaries, higher criticism and phase-diagram simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparse-detect 0.1.0");

  BoundaryCmd bnd;
  auto* b = app.add_subcommand("boundary", "detection boundary of a family");
  add_family_flags(b, bnd.fam);
  b->add_option("--beta", bnd.beta, "sparsity exponent (r-of-beta mode)");
  b->add_option("--mode", bnd.mode, "beta-of-r or r-of-beta")->check(CLI::IsMember({"beta-of-r", "r-of-beta"}));
  b->add_option("--method", bnd.method, "closed-form, grid, hc or hc-sweep")
      ->check(CLI::IsMember({"closed-form", "grid", "hc", "hc-sweep"}));
  b->add_option("--r-grid", bnd.r_grid, "lo:hi:step; prints a (signal, beta_star) curve");
  add_common(b, bnd.io, "text,csv,json");

  ExponentCmd exq;
  auto* e = app.add_subcommand("exponent", "tabulate the exponent function of a family");
  add_family_flags(e, exq.fam);
  e->add_option("--axis", exq.axis, "native, u or s")->check(CLI::IsMember({"native", "u", "s"}));
  e->add_option("--points", exq.points, "number of nodes")->check(CLI::Range(2, 10000000));
  add_common(e, exq.io, "csv,json");
  exq.io.format = "csv";

  CheckCmd chk;
  auto* ca = app.add_subcommand("check-alpha", "admissibility of an exponent function (exit 3 if not admissible)");
  add_family_flags(ca, chk.fam);
  ca->add_option("--input", chk.input, "exponent CSV (header u,alpha or s,gamma)");
  ca->add_flag("--convolutional", chk.convolutional, "also require convexity");
  add_common(ca, chk.io, "text,json");

  SampleCmd hc;
  auto* h = app.add_subcommand("hc", "higher criticism test");
  h->add_option("--input", hc.input, "sample file, one value per line")->required();
  h->add_option("--null", hc.null_dist, "null law: gaussian[:m[:sd]], uniform[:lo:hi], ggaussian:tau, JSON");
  h->add_option("--delta", hc.delta, "threshold slack")->check(CLI::PositiveNumber);
  h->add_flag("--restricted", hc.restricted, "only thresholds with null CDF in [1/n, 1/2]");
  add_common(h, hc.io, "text,csv,json");

  SampleCmd lr;
  auto* l = app.add_subcommand("lr", "likelihood ratio test against a known sparse mixture");
  l->add_option("--input", lr.input, "sample file")->required();
  l->add_option("--null", lr.null_dist, "null law");
  l->add_option("--alt", lr.alt, "alternative component law")->required();
  l->add_option("--beta", lr.beta, "epsilon = n^-beta with n the sample size");
  l->add_option("--epsilon", lr.epsilon, "mixing weight");
  add_common(l, lr.io, "text,json");

  SampleCmd mx;
  auto* m = app.add_subcommand("maxtest", "maximum test");
  m->add_option("--input", mx.input, "sample file")->required();
  m->add_option("--u", mx.u, "threshold multiplier");
  m->add_option("--n", mx.n, "n in the threshold (default: sample size)");
  add_common(m, mx.io, "text,json");

  SimulateCmd sim;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo phase-diagram sweep");
  add_family_flags(s, sim.fam);
  s->add_option("--config", sim.config, "JSON config");
  s->add_option("--beta-grid", sim.beta_grid, "lo:hi:step or list");
  s->add_option("--r-grid", sim.r_grid, "lo:hi:step or list");
  s->add_option("--n-list", sim.n_list, "comma-separated sample sizes");
  s->add_option("--replicates", sim.replicates)->check(CLI::PositiveNumber);
  s->add_option("--tests", sim.tests, "hc, lr, max")->delimiter(',');
  s->add_option("--seed", sim.seed, "random seed (required unless set in the config)");
  s->add_option("--delta", sim.delta)->check(CLI::PositiveNumber);
  s->add_option("--workers", sim.workers, "worker threads (default: logical cores)");
  s->add_option("--u", sim.max_u, "max-test threshold multiplier");
  s->add_flag("--restricted", sim.restricted, "restricted hc variant");
  s->add_option("--manifest", sim.manifest, "run manifest path (default: <output>.manifest.json)");
  add_common(s, sim.io, "csv,json");
  sim.io.format = "csv";

  GammaCmd gam;
  auto* g = app.add_subcommand("estimate-gamma", "finite-n estimate of the s-axis exponent");
  add_family_flags(g, gam.fam);
  g->add_option("--null", gam.null_dist, "null law (with --alt)");
  g->add_option("--alt", gam.alt, "fixed alternative law; otherwise the family's per-n alternative");
  g->add_option("--n-list", gam.n_list, "sample sizes");
  g->add_option("--s-grid", gam.s_grid, "lo:hi:step or list");
  add_common(g, gam.io, "csv,json");
  gam.io.format = "csv";

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  try {
    if (b->parsed()) return run_boundary(bnd);
    if (e->parsed()) return run_exponent(exq);
    if (ca->parsed()) return run_check(chk);
    if (h->parsed()) return run_hc(hc);
    if (l->parsed()) return run_lr(lr);
    if (m->parsed()) return run_max(mx);
    if (s->parsed()) return run_simulate(sim, *s);
    if (g->parsed()) return run_gamma(gam, *g);
  } catch (const CLI::ValidationError& ex) {
    spdlog::error("{}", ex.what());
    return 2;
  } catch (const Error& ex) {
    spdlog::error("{}", ex.what());
    return ex.kind() == ErrorKind::io ? 4 : 3;
  } catch (const std::exception& ex) {
    spdlog::error("{}", ex.what());
    return 3;
  }
  return 2;
}
