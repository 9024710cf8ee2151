#include "sdet/divergence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sdet/error.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Layout { discrete, continuous };

Layout common_layout(const Distribution& p, const Distribution& q) {
  if (p.is_discrete() && q.is_discrete()) return Layout::discrete;
  if (p.is_continuous() && q.is_continuous()) return Layout::continuous;
  fail(ErrorKind::incompatible_laws, "both laws must be purely discrete or purely continuous");
}

std::vector<double> union_atoms(const Distribution& p, const Distribution& q) {
  auto a = p.atom_points();
  auto b = q.atom_points();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

void add_breakpoints(const Distribution& d, std::vector<double>& out) {
  if (const auto* m = std::get_if<Mixture>(&d.kind())) {
    for (const auto& c : m->components) add_breakpoints(*c.dist, out);
  }
  static constexpr std::array<double, 7> kTails{1e-300, 1e-100, 1e-30, 1e-10, 1e-3, 0.1, 0.5};
  for (double t : kTails) {
    out.push_back(d.quantile(t));
    if (t < 0.5) out.push_back(d.quantile_upper(t));
  }
  auto [lo, hi] = d.support();
  if (std::isfinite(lo)) out.push_back(lo);
  if (std::isfinite(hi)) out.push_back(hi);
}

template <class F>
DivergenceValue integrate_pieces(F integrand, const Distribution& p, const Distribution& q,
                                 const QuadratureOptions& opts) {
  std::vector<double> pts = opts.breakpoints;
  if (pts.empty()) {
    add_breakpoints(p, pts);
    add_breakpoints(q, pts);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) fail(ErrorKind::invalid_parameter, "quadrature needs at least two breakpoints");

  DivergenceValue total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    using boost::math::quadrature::gauss_kronrod;
    // Two independent adaptive rules; their gap is the reported error.
    const double fine = gauss_kronrod<double, 61>::integrate(integrand, pts[i], pts[i + 1], 15, opts.tolerance);
    const double coarse = gauss_kronrod<double, 31>::integrate(integrand, pts[i], pts[i + 1], 15, opts.tolerance);
    total.value += fine;
    total.error += std::fabs(fine - coarse);
  }
  return total;
}

double density(const Distribution& d, double x) {
  const double ld = d.log_density(x);
  return ld == -kInf ? 0.0 : std::exp(ld);
}

void check_h2(double h2) {
  if (!(h2 >= 0.0 && h2 <= 2.0)) fail(ErrorKind::invalid_distance, "squared Hellinger distance must lie in [0,2]");
}

}  // namespace

DivergenceValue total_variation(const Distribution& p, const Distribution& q, const QuadratureOptions& opts) {
  if (common_layout(p, q) == Layout::discrete) {
    double acc = 0.0;
    for (double x : union_atoms(p, q)) {
      const double a = p.log_atom(x) == -kInf ? 0.0 : std::exp(p.log_atom(x));
      const double b = q.log_atom(x) == -kInf ? 0.0 : std::exp(q.log_atom(x));
      acc += std::fabs(a - b);
    }
    return {std::clamp(0.5 * acc, 0.0, 1.0), 0.0};
  }
  auto r = integrate_pieces([&](double x) { return 0.5 * std::fabs(density(p, x) - density(q, x)); }, p, q, opts);
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

DivergenceValue error_sum(const Distribution& p, const Distribution& q, const QuadratureOptions& opts) {
  auto tv = total_variation(p, q, opts);
  return {1.0 - tv.value, tv.error};
}

DivergenceValue hellinger_sq(const Distribution& p, const Distribution& q, const QuadratureOptions& opts) {
  if (common_layout(p, q) == Layout::discrete) {
    double acc = 0.0;
    for (double x : union_atoms(p, q)) {
      const double a = p.log_atom(x) == -kInf ? 0.0 : std::exp(0.5 * p.log_atom(x));
      const double b = q.log_atom(x) == -kInf ? 0.0 : std::exp(0.5 * q.log_atom(x));
      acc += (a - b) * (a - b);
    }
    return {std::clamp(acc, 0.0, 2.0), 0.0};
  }
  auto r = integrate_pieces(
      [&](double x) {
        const double lp = p.log_density(x);
        const double lq = q.log_density(x);
        const double a = lp == -kInf ? 0.0 : std::exp(0.5 * lp);
        const double b = lq == -kInf ? 0.0 : std::exp(0.5 * lq);
        return (a - b) * (a - b);
      },
      p, q, opts);
  r.value = std::clamp(r.value, 0.0, 2.0);
  return r;
}

double hellinger_tensorize(double h2, long long n) {
  check_h2(h2);
  if (n < 1) fail(ErrorKind::invalid_sample_size, "n must be >= 1");
  return 2.0 - 2.0 * std::pow(1.0 - h2 / 2.0, static_cast<double>(n));
}

TvBounds tv_hellinger_bounds(double h2) {
  check_h2(h2);
  const double lower = h2 / 2.0;
  const double upper = std::sqrt(h2) * std::sqrt(std::max(0.0, 1.0 - h2 / 4.0));
  return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

double mixture_hellinger_singular(double h2_pq0, double eps) {
  check_h2(h2_pq0);
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::invalid_parameter, "eps must lie in [0,1]");
  const double root = std::sqrt(1.0 - eps);
  return 2.0 * (1.0 - root) + root * h2_pq0;
}

std::string to_string(DecompositionCase c) {
  switch (c) {
    case DecompositionCase::ac_determined:
      return "case-1 (eps*kappa = O(1/n): detectability determined by AC part)";
    case DecompositionCase::singular_detectable:
      return "case-2 (eps*kappa = omega(1/n): trivially detectable via singular support)";
  }
  return "unknown";
}

DecomposedAlternative decompose_alternative(const Distribution& null_dist, const DeclaredDecomposition& g_spec,
                                            double eps, long long n) {
  const double kappa = g_spec.kappa;
  if (!(kappa >= 0.0 && kappa <= 1.0)) fail(ErrorKind::invalid_parameter, "kappa must lie in [0,1]");
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::invalid_parameter, "eps must lie in [0,1]");
  if (n < 1) fail(ErrorKind::invalid_sample_size, "n must be >= 1");

  const Distribution& nu = g_spec.singular_part;
  for (double x : nu.atom_points()) {
    if (null_dist.log_atom(x) > -kInf) fail(ErrorKind::not_singular, "singular part shares an atom with the null");
  }
  if (nu.has_density() && null_dist.has_density()) {
    auto [a, b] = nu.support();
    auto [c, d] = null_dist.support();
    if (std::min(b, d) > std::max(a, c)) {
      fail(ErrorKind::not_singular, "singular part has a density overlapping the null support");
    }
  }

  const double mass = eps * kappa;
  const double eps_prime = mass >= 1.0 ? 0.0 : eps * (1.0 - kappa) / (1.0 - mass);
  const auto detect_case = mass <= 1.0 / static_cast<double>(n) ? DecompositionCase::ac_determined
                                                                 : DecompositionCase::singular_detectable;
  return DecomposedAlternative{kappa,
                               g_spec.ac_part,
                               g_spec.singular_part,
                               eps_prime,
                               SparseMixture(null_dist, g_spec.ac_part, std::clamp(eps_prime, 0.0, 1.0)),
                               detect_case};
}

}  // namespace sdet
