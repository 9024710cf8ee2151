#include "sdet/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "sdet/error.hpp"
#include "sdet/normal.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::invalid_parameter, what);
}

double log_sum_exp(double a, double b) noexcept {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double gen_gaussian_log_norm(double tau) {
  return std::log(tau) - std::log(2.0) - boost::math::lgamma(1.0 / tau);
}

// P(|X| > t) for the unit Subbotin law, t >= 0.
double gen_gaussian_two_sided_tail(double tau, double t) {
  if (t <= 0.0) return 1.0;
  return boost::math::gamma_q(1.0 / tau, std::pow(t, tau));
}

double gen_gaussian_cdf(const GenGaussian& g, double y) {
  const double x = y - g.location;
  const double tail = 0.5 * gen_gaussian_two_sided_tail(g.tau, std::fabs(x));
  return x >= 0.0 ? 1.0 - tail : tail;
}

double gen_gaussian_sf(const GenGaussian& g, double y) {
  const double x = y - g.location;
  const double tail = 0.5 * gen_gaussian_two_sided_tail(g.tau, std::fabs(x));
  return x >= 0.0 ? tail : 1.0 - tail;
}

// Distance t >= 0 with P(X > t) = q for q <= 1/2.
double gen_gaussian_upper_offset(double tau, double q) {
  if (q >= 0.5) return 0.0;
  return std::pow(boost::math::gamma_q_inv(1.0 / tau, 2.0 * q), 1.0 / tau);
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorKind::invalid_probability, "probability must lie in (0,1), got " + std::to_string(p));
  }
}

// Smallest y with pred(y) true, for a predicate that is monotone false->true.
template <class Pred>
double bisect_threshold(Pred pred, std::pair<double, double> support) {
  double lo = std::isfinite(support.first) ? support.first : -1.0;
  double hi = std::isfinite(support.second) ? support.second : 1.0;
  if (pred(lo)) {
    if (std::isfinite(support.first)) return lo;
    double step = 1.0;
    while (pred(lo)) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (step > 1e300) return lo;
    }
  }
  if (!pred(hi)) {
    double step = 1.0;
    while (!pred(hi)) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (step > 1e300) return hi;
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

Distribution Distribution::gaussian(double mean, double sd) {
  require(std::isfinite(mean), "gaussian mean must be finite");
  require(sd > 0.0 && std::isfinite(sd), "gaussian sd must be > 0");
  return Distribution(Gaussian{mean, sd});
}

Distribution Distribution::gen_gaussian(double tau, double location) {
  require(tau > 0.0 && std::isfinite(tau), "gen_gaussian tau must be > 0");
  require(std::isfinite(location), "gen_gaussian location must be finite");
  return Distribution(GenGaussian{tau, location});
}

Distribution Distribution::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform requires lo < hi");
  return Distribution(Uniform{lo, hi});
}

Distribution Distribution::dilated(const Distribution& base, double scale) {
  require(scale > 0.0 && std::isfinite(scale), "dilation scale must be > 0");
  return Distribution(Dilated{std::make_shared<const Distribution>(base), scale});
}

Distribution Distribution::finite_discrete(std::vector<Atom> atoms) {
  require(!atoms.empty(), "finite_discrete needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    require(std::isfinite(a.point), "atom location must be finite");
    require(a.mass >= 0.0 && std::isfinite(a.mass), "atom masses must be >= 0");
    total += a.mass;
  }
  require(std::fabs(total - 1.0) <= kMassTolerance, "atom masses must sum to 1");
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (a.mass == 0.0) continue;
    if (!merged.empty() && merged.back().point == a.point) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  return Distribution(FiniteDiscrete{std::move(merged)});
}

Distribution Distribution::point_mass(double point) { return finite_discrete({{point, 1.0}}); }

Distribution Distribution::mixture(std::vector<std::pair<double, Distribution>> components) {
  require(!components.empty(), "mixture needs at least one component");
  double total = 0.0;
  Mixture m;
  for (auto& [w, d] : components) {
    require(w >= 0.0 && std::isfinite(w), "mixture weights must be >= 0");
    total += w;
    if (w > 0.0) m.components.push_back({w, std::make_shared<const Distribution>(std::move(d))});
  }
  require(std::fabs(total - 1.0) <= kMassTolerance, "mixture weights must sum to 1");
  if (m.components.size() == 1) return *m.components.front().dist;
  return Distribution(std::move(m));
}

bool Distribution::has_atoms() const noexcept {
  return std::visit(overloaded{
                        [](const FiniteDiscrete&) { return true; },
                        [](const Dilated& d) { return d.base->has_atoms(); },
                        [](const Mixture& m) {
                          return std::any_of(m.components.begin(), m.components.end(),
                                             [](const auto& c) { return c.dist->has_atoms(); });
                        },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

bool Distribution::has_density() const noexcept {
  return std::visit(overloaded{
                        [](const FiniteDiscrete&) { return false; },
                        [](const Dilated& d) { return d.base->has_density(); },
                        [](const Mixture& m) {
                          return std::any_of(m.components.begin(), m.components.end(),
                                             [](const auto& c) { return c.dist->has_density(); });
                        },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

double Distribution::cdf(double y) const {
  return std::visit(overloaded{
                        [y](const Gaussian& g) { return normal::cdf((y - g.mean) / g.sd); },
                        [y](const GenGaussian& g) { return gen_gaussian_cdf(g, y); },
                        [y](const Uniform& u) { return std::clamp((y - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                        [y](const Dilated& d) { return d.base->cdf(y / d.scale); },
                        [y](const FiniteDiscrete& f) {
                          double acc = 0.0;
                          for (const auto& a : f.atoms) {
                            if (a.point > y) break;
                            acc += a.mass;
                          }
                          return std::min(acc, 1.0);
                        },
                        [y](const Mixture& m) {
                          double acc = 0.0;
                          for (const auto& c : m.components) acc += c.weight * c.dist->cdf(y);
                          return std::min(acc, 1.0);
                        },
                    },
                    kind_);
}

double Distribution::cdf_left(double y) const {
  if (!has_atoms()) return cdf(y);
  return std::visit(overloaded{
                        [y](const Dilated& d) { return d.base->cdf_left(y / d.scale); },
                        [y](const FiniteDiscrete& f) {
                          double acc = 0.0;
                          for (const auto& a : f.atoms) {
                            if (a.point >= y) break;
                            acc += a.mass;
                          }
                          return std::min(acc, 1.0);
                        },
                        [y](const Mixture& m) {
                          double acc = 0.0;
                          for (const auto& c : m.components) acc += c.weight * c.dist->cdf_left(y);
                          return std::min(acc, 1.0);
                        },
                        [this, y](const auto&) { return cdf(y); },
                    },
                    kind_);
}

double Distribution::sf(double y) const {
  return std::visit(overloaded{
                        [y](const Gaussian& g) { return normal::sf((y - g.mean) / g.sd); },
                        [y](const GenGaussian& g) { return gen_gaussian_sf(g, y); },
                        [y](const Uniform& u) { return std::clamp((u.hi - y) / (u.hi - u.lo), 0.0, 1.0); },
                        [y](const Dilated& d) { return d.base->sf(y / d.scale); },
                        [y](const FiniteDiscrete& f) {
                          double acc = 0.0;
                          for (auto it = f.atoms.rbegin(); it != f.atoms.rend(); ++it) {
                            if (it->point <= y) break;
                            acc += it->mass;
                          }
                          return std::min(acc, 1.0);
                        },
                        [y](const Mixture& m) {
                          double acc = 0.0;
                          for (const auto& c : m.components) acc += c.weight * c.dist->sf(y);
                          return std::min(acc, 1.0);
                        },
                    },
                    kind_);
}

double Distribution::log_density(double y) const {
  return std::visit(overloaded{
                        [y](const Gaussian& g) {
                          return normal::log_pdf((y - g.mean) / g.sd) - std::log(g.sd);
                        },
                        [y](const GenGaussian& g) {
                          return gen_gaussian_log_norm(g.tau) - std::pow(std::fabs(y - g.location), g.tau);
                        },
                        [y](const Uniform& u) {
                          return (y >= u.lo && y <= u.hi) ? -std::log(u.hi - u.lo) : -kInf;
                        },
                        [y](const Dilated& d) { return d.base->log_density(y / d.scale) - std::log(d.scale); },
                        [](const FiniteDiscrete&) { return -kInf; },
                        [y](const Mixture& m) {
                          double acc = -kInf;
                          for (const auto& c : m.components) {
                            acc = log_sum_exp(acc, std::log(c.weight) + c.dist->log_density(y));
                          }
                          return acc;
                        },
                    },
                    kind_);
}

double Distribution::log_atom(double y) const {
  return std::visit(overloaded{
                        [y](const Dilated& d) { return d.base->log_atom(y / d.scale); },
                        [y](const FiniteDiscrete& f) {
                          auto it = std::lower_bound(f.atoms.begin(), f.atoms.end(), y,
                                                     [](const Atom& a, double v) { return a.point < v; });
                          return (it != f.atoms.end() && it->point == y) ? std::log(it->mass) : -kInf;
                        },
                        [y](const Mixture& m) {
                          double acc = -kInf;
                          for (const auto& c : m.components) {
                            acc = log_sum_exp(acc, std::log(c.weight) + c.dist->log_atom(y));
                          }
                          return acc;
                        },
                        [](const auto&) { return -kInf; },
                    },
                    kind_);
}

double Distribution::quantile(double p) const {
  check_probability(p);
  return std::visit(
      overloaded{
          [p](const Gaussian& g) { return g.mean + g.sd * normal::quantile(p); },
          [p](const GenGaussian& g) {
            if (p == 0.5) return g.location;
            if (p < 0.5) return g.location - gen_gaussian_upper_offset(g.tau, p);
            return g.location + gen_gaussian_upper_offset(g.tau, 1.0 - p);
          },
          [p](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
          [p](const Dilated& d) { return d.scale * d.base->quantile(p); },
          [p](const FiniteDiscrete& f) {
            double acc = 0.0;
            for (const auto& a : f.atoms) {
              acc += a.mass;
              if (acc >= p) return a.point;
            }
            return f.atoms.back().point;
          },
          [this, p](const Mixture&) {
            return bisect_threshold([&](double y) { return cdf(y) >= p; }, support());
          },
      },
      kind_);
}

double Distribution::quantile_upper(double q) const {
  check_probability(q);
  return std::visit(
      overloaded{
          [q](const Gaussian& g) { return g.mean + g.sd * normal::quantile_upper(q); },
          [q](const GenGaussian& g) {
            if (q == 0.5) return g.location;
            if (q < 0.5) return g.location + gen_gaussian_upper_offset(g.tau, q);
            return g.location - gen_gaussian_upper_offset(g.tau, 1.0 - q);
          },
          [q](const Uniform& u) { return u.hi - q * (u.hi - u.lo); },
          [q](const Dilated& d) { return d.scale * d.base->quantile_upper(q); },
          [this, q](const auto&) {
            return bisect_threshold([&](double y) { return sf(y) <= q; }, support());
          },
      },
      kind_);
}

std::pair<double, double> Distribution::support() const {
  return std::visit(overloaded{
                        [](const Uniform& u) { return std::pair{u.lo, u.hi}; },
                        [](const Dilated& d) {
                          auto [lo, hi] = d.base->support();
                          return std::pair{lo * d.scale, hi * d.scale};
                        },
                        [](const FiniteDiscrete& f) {
                          return std::pair{f.atoms.front().point, f.atoms.back().point};
                        },
                        [](const Mixture& m) {
                          double lo = kInf;
                          double hi = -kInf;
                          for (const auto& c : m.components) {
                            auto [a, b] = c.dist->support();
                            lo = std::min(lo, a);
                            hi = std::max(hi, b);
                          }
                          return std::pair{lo, hi};
                        },
                        [](const auto&) { return std::pair{-kInf, kInf}; },
                    },
                    kind_);
}

std::vector<double> Distribution::atom_points() const {
  return std::visit(overloaded{
                        [](const Dilated& d) {
                          auto pts = d.base->atom_points();
                          for (auto& x : pts) x *= d.scale;
                          return pts;
                        },
                        [](const FiniteDiscrete& f) {
                          std::vector<double> pts;
                          pts.reserve(f.atoms.size());
                          for (const auto& a : f.atoms) pts.push_back(a.point);
                          return pts;
                        },
                        [](const Mixture& m) {
                          std::vector<double> pts;
                          for (const auto& c : m.components) {
                            auto sub = c.dist->atom_points();
                            pts.insert(pts.end(), sub.begin(), sub.end());
                          }
                          std::sort(pts.begin(), pts.end());
                          pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
                          return pts;
                        },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    kind_);
}

double Distribution::draw(RngStream& stream) const {
  return std::visit(overloaded{
                        [&](const Gaussian& g) { return g.mean + g.sd * normal::quantile(stream.uniform()); },
                        [&](const GenGaussian&) { return quantile(stream.uniform()); },
                        [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * stream.uniform(); },
                        [&](const Dilated& d) { return d.scale * d.base->draw(stream); },
                        [&](const FiniteDiscrete& f) {
                          const double u = stream.uniform();
                          double acc = 0.0;
                          for (const auto& a : f.atoms) {
                            acc += a.mass;
                            if (u < acc) return a.point;
                          }
                          return f.atoms.back().point;
                        },
                        [&](const Mixture& m) {
                          const double u = stream.uniform();
                          double acc = 0.0;
                          for (const auto& c : m.components) {
                            acc += c.weight;
                            if (u < acc) return c.dist->draw(stream);
                          }
                          return m.components.back().dist->draw(stream);
                        },
                    },
                    kind_);
}

SparseMixture::SparseMixture(Distribution null_law, Distribution alt_law, double eps)
    : null_dist(std::move(null_law)), alt_dist(std::move(alt_law)), epsilon(eps) {
  require(eps >= 0.0 && eps <= 1.0, "epsilon must lie in [0,1]");
}

Distribution SparseMixture::mixed() const {
  if (epsilon == 0.0) return null_dist;
  if (epsilon == 1.0) return alt_dist;
  return Distribution::mixture({{1.0 - epsilon, null_dist}, {epsilon, alt_dist}});
}

double epsilon_from_beta(double n, double beta) {
  if (!(n >= 2.0)) fail(ErrorKind::invalid_sample_size, "n must be >= 2");
  require(beta >= 0.0 && std::isfinite(beta), "beta must be >= 0");
  return std::pow(n, -beta);
}

double mu_from_r(double n, double r) {
  if (!(n >= 2.0)) fail(ErrorKind::invalid_sample_size, "n must be >= 2");
  require(r >= 0.0 && std::isfinite(r), "r must be >= 0");
  return std::sqrt(2.0 * r * std::log(n));
}

double log_likelihood_ratio(const Distribution& g, const Distribution& q, double y) {
  const double ga = g.log_atom(y);
  const double qa = q.log_atom(y);
  if (ga > -kInf || qa > -kInf) {
    if (qa == -kInf) fail(ErrorKind::singular_point, "alternative has an atom where the null has none");
    if (ga == -kInf) return -kInf;
    return ga - qa;
  }
  const double gd = g.log_density(y);
  const double qd = q.log_density(y);
  if (gd == -kInf && qd == -kInf) fail(ErrorKind::undefined_point, "both laws vanish at the point");
  if (qd == -kInf) fail(ErrorKind::singular_point, "null density is zero where the alternative is positive");
  if (gd == -kInf) return -kInf;
  return gd - qd;
}

void sample_into(const Distribution& d, std::span<double> out, RngStream& stream) {
  for (auto& v : out) v = d.draw(stream);
}

void sample_into(const SparseMixture& mix, std::span<double> out, RngStream& stream) {
  for (auto& v : out) {
    const bool from_alt = stream.uniform() < mix.epsilon;
    v = from_alt ? mix.alt_dist.draw(stream) : mix.null_dist.draw(stream);
  }
}

std::vector<double> sample(const Distribution& d, std::size_t n, RngStream& stream) {
  std::vector<double> out(n);
  sample_into(d, out, stream);
  return out;
}

std::vector<double> sample(const SparseMixture& mix, std::size_t n, RngStream& stream) {
  std::vector<double> out(n);
  sample_into(mix, out, stream);
  return out;
}

}  // namespace sdet
