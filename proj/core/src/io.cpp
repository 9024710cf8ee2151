#include "sdet/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "sdet/error.hpp"

namespace sdet::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Parses a double, accepting inf/-inf/nan spellings; throws io on garbage.
bool parse_double(std::string s, double& out) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  s = s.substr(b, e - b + 1);
  if (s == "-inf" || s == "-Inf" || s == "-infinity") {
    out = -kInf;
    return true;
  }
  if (s == "inf" || s == "Inf" || s == "+inf" || s == "infinity") {
    out = kInf;
    return true;
  }
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open '{}'", path));
  return in;
}

std::string first_field(const std::string& line) {
  const auto comma = line.find(',');
  return comma == std::string::npos ? line : line.substr(0, comma);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string fmt12(double x) { return fmt::format("{:.12g}", x); }

json number12(double x) {
  if (!std::isfinite(x)) return nullptr;
  return json::parse(fmt12(x));
}

json to_json(const Distribution& d) {
  return std::visit(
      overloaded{
          [](const Gaussian& g) -> json { return {{"kind", "gaussian"}, {"mean", g.mean}, {"sd", g.sd}}; },
          [](const GenGaussian& g) -> json {
            json j{{"kind", "gen_gaussian"}, {"tau", g.tau}};
            if (g.location != 0.0) j["location"] = g.location;
            return j;
          },
          [](const Uniform& u) -> json { return {{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}}; },
          [](const Dilated& dl) -> json { return {{"kind", "dilated"}, {"scale", dl.scale}, {"base", to_json(*dl.base)}}; },
          [](const FiniteDiscrete& f) -> json {
            json atoms = json::array();
            for (const auto& a : f.atoms) atoms.push_back({a.point, a.mass});
            return {{"kind", "finite_discrete"}, {"atoms", atoms}};
          },
          [](const Mixture& m) -> json {
            json comps = json::array();
            for (const auto& c : m.components) comps.push_back({c.weight, to_json(*c.dist)});
            return {{"kind", "mixture"}, {"components", comps}};
          },
      },
      d.kind());
}

Distribution distribution_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return Distribution::gaussian(get_or(j, "mean", 0.0), get_or(j, "sd", 1.0));
    if (kind == "gen_gaussian") return Distribution::gen_gaussian(j.at("tau").get<double>(), get_or(j, "location", 0.0));
    if (kind == "uniform") return Distribution::uniform(get_or(j, "lo", 0.0), get_or(j, "hi", 1.0));
    if (kind == "dilated") return Distribution::dilated(distribution_from_json(j.at("base")), j.at("scale").get<double>());
    if (kind == "finite_discrete") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      return Distribution::finite_discrete(std::move(atoms));
    }
    if (kind == "mixture") {
      std::vector<std::pair<double, Distribution>> comps;
      for (const auto& c : j.at("components")) comps.emplace_back(c.at(0).get<double>(), distribution_from_json(c.at(1)));
      return Distribution::mixture(std::move(comps));
    }
    fail(ErrorKind::invalid_parameter, fmt::format("unknown distribution kind '{}'", kind));
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, fmt::format("malformed distribution JSON: {}", e.what()));
  }
}

json to_json(const BoundaryResult& b) {
  return {{"beta", number12(b.beta)},
          {"maximizer", number12(b.maximizer)},
          {"method", std::string(to_string(b.method))},
          {"grid_resolution", number12(b.grid_resolution)}};
}

json to_json(const HCResult& r) {
  return {{"statistic", number12(r.statistic)},
          {"arg_t", number12(r.arg_t)},
          {"threshold", number12(r.threshold)},
          {"decision", std::string(to_string(r.decision))},
          {"n", r.n},
          {"delta", number12(r.delta)}};
}

FamilyParams params_from_json(const json& j) {
  FamilyParams p;
  try {
    p.r = get_or(j, "r", p.r);
    p.sigma2 = get_or(j, "sigma2", p.sigma2);
    p.tau = get_or(j, "tau", p.tau);
    if (j.contains("tau2")) p.tau2 = j.at("tau2").get<double>();
    if (j.contains("linf")) p.linf = j.at("linf").get<double>();
    if (j.contains("support_points")) p.support_points = j.at("support_points").get<std::vector<double>>();
    if (j.contains("support_interval")) {
      const auto iv = j.at("support_interval").get<std::vector<double>>();
      if (iv.size() != 2) fail(ErrorKind::config, "support_interval needs two numbers");
      p.support_interval = std::pair{iv[0], iv[1]};
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::config, fmt::format("malformed family parameters: {}", e.what()));
  }
  return p;
}

json to_json(const FamilyParams& p) {
  json j{{"r", p.r}, {"sigma2", p.sigma2}, {"tau", p.tau}};
  if (p.tau2) j["tau2"] = *p.tau2;
  if (p.linf) j["linf"] = *p.linf;
  if (!p.support_points.empty()) j["support_points"] = p.support_points;
  if (p.support_interval) j["support_interval"] = {p.support_interval->first, p.support_interval->second};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("family")) cfg.family = family_from_string(j.at("family").get<std::string>());
    if (j.contains("params")) cfg.params = params_from_json(j.at("params"));
    cfg.beta_grid = get_or(j, "beta_grid", cfg.beta_grid);
    cfg.r_grid = get_or(j, "r_grid", cfg.r_grid);
    cfg.n_list = get_or(j, "n_list", cfg.n_list);
    cfg.replicates = get_or(j, "replicates", cfg.replicates);
    if (j.contains("tests")) {
      cfg.tests.clear();
      for (const auto& t : j.at("tests")) cfg.tests.push_back(test_from_string(t.get<std::string>()));
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.delta = get_or(j, "delta", cfg.delta);
    cfg.hc_restricted = get_or(j, "hc_restricted", cfg.hc_restricted);
    cfg.max_u = get_or(j, "max_u", cfg.max_u);
    cfg.workers = get_or(j, "workers", cfg.workers);
  } catch (const json::exception& e) {
    fail(ErrorKind::config, fmt::format("malformed config: {}", e.what()));
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json tests = json::array();
  for (auto t : cfg.tests) tests.push_back(std::string(to_string(t)));
  return {{"family", std::string(to_string(cfg.family))},
          {"params", to_json(cfg.params)},
          {"beta_grid", cfg.beta_grid},
          {"r_grid", cfg.r_grid},
          {"n_list", cfg.n_list},
          {"replicates", cfg.replicates},
          {"tests", tests},
          {"seed", cfg.seed},
          {"delta", cfg.delta},
          {"hc_restricted", cfg.hc_restricted},
          {"max_u", cfg.max_u}};
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // Worker count is left out: it does not change the output.
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json read_json_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::io, fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
}

std::vector<double> parse_sample(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string field = first_field(line);
    if (field.find_first_not_of(" \t\r") == std::string::npos) continue;
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (lineno == 1) continue;
      fail(ErrorKind::io, fmt::format("line {}: '{}' is not a number", lineno, field));
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_sample(const std::string& path) {
  auto in = open_in(path);
  return parse_sample(in);
}

ExponentFunction parse_exponent_csv(std::istream& in) {
  std::string line;
  std::optional<Axis> axis;
  bool convolutional = false;
  std::vector<double> xs;
  std::vector<double> vs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("convolutional") != std::string::npos) convolutional = true;
      continue;
    }
    if (!axis) {
      const std::string head = first_field(line);
      if (head == "u") {
        axis = Axis::u;
      } else if (head == "s") {
        axis = Axis::s;
      } else {
        fail(ErrorKind::io, fmt::format("header must start with 'u' or 's' (got '{}')", head));
      }
      continue;
    }
    const auto comma = line.find(',');
    double x = 0.0;
    double v = 0.0;
    if (comma == std::string::npos || !parse_double(line.substr(0, comma), x) ||
        !parse_double(line.substr(comma + 1), v)) {
      fail(ErrorKind::io, fmt::format("line {}: expected 'x,value'", lineno));
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  if (!axis) fail(ErrorKind::io, "exponent CSV has no header");
  return ExponentFunction::sampled(GridFunction(std::move(xs), std::move(vs)), *axis, convolutional);
}

ExponentFunction read_exponent_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_exponent_csv(in);
}

void write_exponent_csv(std::ostream& out, const ExponentFunction& e, std::size_t points) {
  const GridFunction tab = e.tabulate(points);
  if (e.convolutional()) out << "# convolutional\n";
  out << (e.axis() == Axis::u ? "u,alpha\n" : "s,gamma\n");
  for (std::size_t i = 0; i < tab.size(); ++i) out << fmt12(tab.x[i]) << ',' << fmt12(tab.v[i]) << '\n';
}

void write_phase_csv(std::ostream& out, const PhaseTable& table) {
  out << "beta,r,n,test,type1_rate,type2_rate,total_error,wilson_ci_halfwidth,replicates,seed,beta_star\n";
  for (const auto& c : table.cells) {
    out << fmt12(c.beta) << ',' << fmt12(c.r) << ',' << c.n << ',' << to_string(c.test) << ',' << fmt12(c.type1_rate)
        << ',' << fmt12(c.type2_rate) << ',' << fmt12(c.total_error) << ',' << fmt12(c.wilson_ci_halfwidth) << ','
        << c.replicates << ',' << c.seed << ',' << fmt12(c.beta_star) << '\n';
  }
}

json manifest(const ExperimentConfig& cfg, const PhaseTable& table) {
  return {{"seed", cfg.seed},
          {"config_hash", fmt::format("{:016x}", config_hash(cfg))},
          {"wall_time", table.wall_time},
          {"worker_count", table.worker_count}};
}

}  // namespace sdet::io
