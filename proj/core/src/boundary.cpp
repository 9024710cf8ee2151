#include "sdet/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "sdet/error.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

using Objective = std::function<double(double x, double value)>;

struct Scan {
  SupResult best;
  double resolution = 0.0;
};

// Sup of obj(x, e(x)) over the exponent's domain. Closed forms are scanned on
// `points` nodes and the domain is widened while the objective at an end is
// within 1 of the running maximum.
Scan scan(const ExponentFunction& e, const Objective& obj, const ScanOptions& opts) {
  if (const GridFunction* g = e.grid()) {
    std::vector<double> vals(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) vals[i] = g->v[i] == -kInf ? -kInf : obj(g->x[i], g->v[i]);
    double spacing = 0.0;
    for (std::size_t i = 1; i < g->size(); ++i) spacing = std::max(spacing, g->x[i] - g->x[i - 1]);
    return {ess_sup_grid(GridFunction(g->x, std::move(vals))), spacing};
  }
  auto [lo, hi] = e.domain();
  auto f = [&](double x) {
    const double a = e(x);
    return a == -kInf ? -kInf : obj(x, a);
  };
  for (int widen = 0;; ++widen) {
    const auto best = ess_sup(f, lo, hi, opts.points, opts.refine);
    const double res = (hi - lo) / static_cast<double>(opts.points - 1);
    const bool open_lo = e.axis() == Axis::u && f(lo) > best.value - 1.0;
    const bool open_hi = f(hi) > best.value - 1.0;
    if ((!open_lo && !open_hi) || widen >= 12) return {best, res};
    if (open_lo) lo *= 2.0;
    if (open_hi) hi *= 2.0;
  }
}

void require_axis(const ExponentFunction& e, Axis axis, const char* op) {
  if (e.axis() != axis) {
    fail(ErrorKind::wrong_parametrization,
         fmt::format("{} expects an {}-axis exponent", op, axis == Axis::u ? "u" : "s"));
  }
}

BoundaryResult finish(double sup, double at, double res) {
  return {std::clamp(0.5 + std::max(0.0, sup), 0.0, 1.0), at, BoundaryMethod::grid, res};
}

double check_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) fail(ErrorKind::invalid_parameter, fmt::format("{} (got {})", what, v));
  return v;
}

}  // namespace

std::string_view to_string(BoundaryMethod m) noexcept {
  return m == BoundaryMethod::closed_form ? "closed-form" : "grid";
}

std::string AdmissibilityReport::summary() const {
  if (admissible()) return "admissible";
  std::ostringstream out;
  const char* sep = "";
  if (!pointwise_ok) {
    out << fmt::format("alpha(u) > u^2 at {} grid points (worst excess {:.6g} at u={:.6g})", pointwise_violations,
                       worst_excess, worst_excess_at);
    sep = "; ";
  }
  if (!integral_ok) {
    const double last = laplace_ladder.empty() ? kInf : laplace_ladder.back().second;
    out << sep << fmt::format("Laplace integral at t=4096 is {:.6g}, outside [-0.05, 0.05]", last);
    sep = "; ";
  }
  if (!convexity_ok) {
    out << sep << fmt::format("alpha not convex (second difference {:.6g} at u={:.6g})", worst_curvature,
                              worst_curvature_at);
  }
  return out.str();
}

AdmissibilityReport check_admissible(const ExponentFunction& alpha, const ScanOptions& opts) {
  require_axis(alpha, Axis::u, "check_admissible");
  const GridFunction tab = alpha.tabulate(opts.points);
  AdmissibilityReport rep;

  std::vector<double> gap(tab.size());
  for (std::size_t i = 0; i < tab.size(); ++i) {
    const double u = tab.x[i];
    gap[i] = tab.v[i] == -kInf ? -kInf : tab.v[i] - u * u;
    if (gap[i] > rep.worst_excess) {
      rep.worst_excess = gap[i];
      rep.worst_excess_at = u;
    }
    if (gap[i] > kTol) ++rep.pointwise_violations;
  }
  rep.pointwise_ok = rep.pointwise_violations == 0;

  const GridFunction g(tab.x, gap);
  for (int k = 4; k <= 12; ++k) {
    const double t = std::ldexp(1.0, k);
    const double val = rep.worst_excess == -kInf ? -kInf : laplace_log_integral(g, t);
    rep.laplace_ladder.emplace_back(t, val);
  }
  const double last = rep.laplace_ladder.back().second;
  rep.integral_ok = std::fabs(last) <= 0.05;

  if (alpha.convolutional()) {
    for (std::size_t i = 1; i + 1 < tab.size(); ++i) {
      const double a = tab.v[i - 1];
      const double b = tab.v[i];
      const double c = tab.v[i + 1];
      if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
      const double h1 = tab.x[i] - tab.x[i - 1];
      const double h2 = tab.x[i + 1] - tab.x[i];
      // Slope increment scaled to the mean spacing; equals the plain second
      // difference on equispaced grids.
      const double d2 = ((c - b) / h2 - (b - a) / h1) * 0.5 * (h1 + h2);
      if (d2 < rep.worst_curvature) {
        rep.worst_curvature = d2;
        rep.worst_curvature_at = tab.x[i];
      }
    }
    rep.convexity_ok = rep.worst_curvature >= -kTol;
  }
  return rep;
}

BoundaryResult beta_sharp(const ExponentFunction& alpha, const ScanOptions& opts) {
  require_axis(alpha, Axis::u, "beta_sharp");
  const auto rep = check_admissible(alpha, opts);
  if (!rep.admissible()) fail(ErrorKind::admissibility, rep.summary());
  const auto s = scan(
      alpha, [](double u, double a) { return a - u * u + 0.5 * std::min(u * u, 1.0); }, opts);
  return finish(s.best.value, s.best.argmax, s.resolution);
}

BoundaryResult beta_star_general(const ExponentFunction& gamma, const ScanOptions& opts) {
  require_axis(gamma, Axis::s, "beta_star_general");
  const GridFunction tab = gamma.tabulate(opts.points);
  for (std::size_t i = 0; i < tab.size(); ++i) {
    if (tab.v[i] > tab.x[i] + kTol) {
      fail(ErrorKind::admissibility,
           fmt::format("gamma(s) > s at s={:.6g} (gamma={:.6g})", tab.x[i], tab.v[i]));
    }
  }
  const auto s = scan(
      gamma, [](double x, double g) { return g - x + 0.5 * std::min(x, 1.0); }, opts);
  return finish(s.best.value, s.best.argmax, s.resolution);
}

double hellinger_exponent(const ExponentFunction& alpha, double beta, const ScanOptions& opts) {
  require_axis(alpha, Axis::u, "hellinger_exponent");
  if (!(beta >= 0.5)) fail(ErrorKind::out_of_regime, fmt::format("hellinger_exponent requires beta >= 1/2 (got {})", beta));
  const auto s = scan(
      alpha,
      [beta](double u, double a) {
        const double d = a - beta;
        return std::min(2.0 * d, d) - u * u;
      },
      opts);
  return s.best.value;
}

double tail_exponent(const ExponentFunction& alpha, double u, const ScanOptions& opts) {
  require_axis(alpha, Axis::u, "tail_exponent");
  auto f = [&](double q) {
    const double a = alpha(q);
    return a == -kInf ? -kInf : a - q * q;
  };
  std::vector<double> xs;
  if (const GridFunction* g = alpha.grid()) {
    xs = g->x;
  } else {
    const auto [lo, hi] = alpha.domain();
    xs = linspace(lo, hi, opts.points);
  }
  if (u >= xs.back()) return f(u);
  const auto first = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), u) - xs.begin());

  SupResult best{-kInf, u};
  if (xs[first] > u) best = refine_max(f, u, xs[first]);

  std::size_t arg = first;
  double node_best = -kInf;
  for (std::size_t i = first; i < xs.size(); ++i) {
    const double val = f(xs[i]);
    if (val > node_best) {
      node_best = val;
      arg = i;
    }
  }
  if (node_best > best.value) best = {node_best, xs[arg]};
  if (node_best > -kInf) {
    const double left = arg > first ? xs[arg - 1] : std::max(u, xs[arg]);
    const double right = arg + 1 < xs.size() ? xs[arg + 1] : xs[arg];
    for (auto [l, r] : {std::pair{left, xs[arg]}, std::pair{xs[arg], right}}) {
      if (!(r > l)) continue;
      const auto cand = refine_max(f, l, r);
      if (cand.value > best.value) best = cand;
    }
  }
  return best.value;
}

BoundaryResult hc_achievable_boundary(const ExponentFunction& alpha, HcBoundaryMethod method,
                                      const ScanOptions& opts) {
  require_axis(alpha, Axis::u, "hc_achievable_boundary");
  const GridFunction tab = alpha.tabulate(opts.points);
  if (std::none_of(tab.v.begin(), tab.v.end(), [](double a) { return a > 0.0; })) {
    fail(ErrorKind::hc_boundary_undefined, "alpha is nonpositive on the whole grid");
  }
  const auto rep = check_admissible(alpha, opts);
  if (!rep.admissible()) fail(ErrorKind::admissibility, rep.summary());

  if (method == HcBoundaryMethod::interchange) {
    const auto s = scan(
        alpha, [](double q, double a) { return 2.0 * a - 2.0 * q * q + std::min(q * q, 1.0); }, opts);
    return finish(0.5 * s.best.value, s.best.argmax, s.resolution);
  }

  // Two-sided tail on the half line q >= 0, then a suffix maximum.
  const auto [lo, hi] = alpha.domain();
  const double reach = std::max(std::fabs(lo), std::fabs(hi));
  const auto qs = linspace(0.0, reach, opts.points);
  std::vector<double> tail(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double a = std::max(alpha(qs[i]), alpha(-qs[i]));
    tail[i] = a == -kInf ? -kInf : a - qs[i] * qs[i];
  }
  for (std::size_t i = qs.size() - 1; i-- > 0;) tail[i] = std::max(tail[i], tail[i + 1]);
  double best = -kInf;
  double at = 0.0;
  for (std::size_t i = 1; i < qs.size() && qs[i] <= 1.0; ++i) {
    if (tail[i] == -kInf) continue;
    const double val = 0.5 * (1.0 + qs[i] * qs[i]) + tail[i];
    if (val > best) {
      best = val;
      at = qs[i];
    }
  }
  const double res = reach / static_cast<double>(opts.points - 1);
  return {std::clamp(std::max(0.5, best), 0.0, 1.0), at, BoundaryMethod::grid, res};
}

double beta_idj(double r) {
  if (!(r >= 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("idj requires r >= 0 (got {})", r));
  if (r <= 0.25) return 0.5 + r;
  const double d = std::max(0.0, 1.0 - std::sqrt(r));
  return 1.0 - d * d;
}

double r_star_idj(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) {
    fail(ErrorKind::invalid_parameter, fmt::format("r-of-beta requires 1/2 < beta < 1 (got {})", beta));
  }
  if (beta <= 0.75) return beta - 0.5;
  const double d = 1.0 - std::sqrt(1.0 - beta);
  return d * d;
}

namespace {

double hetero_beta(const FamilyParams& p) {
  if (p.tau2) {
    const double t2 = *p.tau2;
    if (!(t2 >= 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("hetero requires tau2 >= 0 (got {})", t2));
    if (p.r != 0.0) fail(ErrorKind::invalid_parameter, "hetero with tau2 requires r = 0");
    const double m = std::max(t2, 1.0);
    return m / (1.0 + m);
  }
  const double r = p.r;
  const double s2 = p.sigma2;
  if (!(r >= 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("hetero requires r >= 0 (got {})", r));
  if (!(s2 > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("hetero requires sigma2 > 0 (got {})", s2));
  if (2.0 * std::sqrt(r) + s2 <= 2.0) {
    // 2 sqrt(r) + sigma2 <= 2 with sigma2 = 2 forces r = 0; read 0/0 as 0.
    return s2 == 2.0 ? 0.5 : 0.5 + r / (2.0 - s2);
  }
  const double d = std::max(0.0, 1.0 - std::sqrt(r));
  return 1.0 - d * d / s2;
}

double hetero_r(const FamilyParams& p, double beta) {
  if (p.tau2) fail(ErrorKind::invalid_parameter, "r-of-beta is not defined for the tau2 parametrization");
  const double s2 = p.sigma2;
  if (!(s2 > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("hetero requires sigma2 > 0 (got {})", s2));
  if (!(beta > 0.5 && beta < 1.0)) {
    fail(ErrorKind::invalid_parameter, fmt::format("r-of-beta requires 1/2 < beta < 1 (got {})", beta));
  }
  if (s2 < 2.0 && beta <= 1.0 - s2 / 4.0) return (2.0 - s2) * (beta - 0.5);
  const double d = std::max(0.0, 1.0 - std::sqrt(s2) * std::sqrt(1.0 - beta));
  return d * d;
}

double ggconv_numeric(double r, double tau) {
  // z^tau >= 1 beyond z = 1 while beta_idj <= 1, so [0, 1] carries the supremum.
  auto obj = [r, tau](double z) { return beta_idj(r * z * z) - std::pow(z, tau); };
  return std::clamp(ess_sup(obj, 0.0, 1.0, 20001, true).value, 0.5, 1.0);
}

double ggconv_beta(const FamilyParams& p) {
  if (!(p.r > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("ggconv requires r > 0 (got {})", p.r));
  if (!(p.tau > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("ggconv requires tau > 0 (got {})", p.tau));
  if (p.tau == 1.0) {
    if (p.r > 1.5 + std::sqrt(2.0)) {
      const double d = 1.0 - 1.0 / (2.0 * std::sqrt(p.r));
      return d * d;
    }
    return 0.5;
  }
  if (p.tau == 2.0) return std::max(0.5, p.r / (1.0 + p.r));
  return ggconv_numeric(p.r, p.tau);
}

double ggconv_r(const FamilyParams& p, double beta) {
  if (!(p.tau > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("ggconv requires tau > 0 (got {})", p.tau));
  if (!(beta > 0.5 && beta < 1.0)) {
    fail(ErrorKind::invalid_parameter, fmt::format("r-of-beta requires 1/2 < beta < 1 (got {})", beta));
  }
  if (p.tau == 1.0) {
    const double d = 1.0 - std::sqrt(beta);
    return 1.0 / (4.0 * d * d);
  }
  if (p.tau == 2.0) return beta / (1.0 - beta);
  // Smallest r with beta(r) >= beta; beta(r) is nondecreasing in r.
  double lo = 0.0;
  double hi = 1.0;
  while (ggconv_numeric(hi, p.tau) < beta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) fail(ErrorKind::invalid_parameter, "ggconv r-of-beta did not bracket a root");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (ggconv_numeric(mid, p.tau) >= beta ? hi : lo) = mid;
  }
  return hi;
}

double ggloc_threshold(double tau) { return std::pow(1.0 - std::pow(2.0, 1.0 / (1.0 - tau)), tau); }

double ggloc_slope(double tau) {
  return (0.5 - std::pow(2.0, tau / (1.0 - tau))) / ggloc_threshold(tau);
}

double ggloc_beta(const FamilyParams& p) {
  const double r = p.r;
  const double tau = p.tau;
  if (!(r > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("gglocation requires r > 0 (got {})", r));
  if (!(tau > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("gglocation requires tau > 0 (got {})", tau));
  if (r > 1.0) return 1.0;
  if (tau <= 1.0) return 0.5 * (1.0 + r);
  if (r < ggloc_threshold(tau)) return 0.5 + ggloc_slope(tau) * r;
  return 1.0 - std::pow(1.0 - std::pow(r, 1.0 / tau), tau);
}

double ggloc_r(const FamilyParams& p, double beta) {
  const double tau = p.tau;
  if (!(tau > 0.0)) fail(ErrorKind::invalid_parameter, fmt::format("gglocation requires tau > 0 (got {})", tau));
  if (!(beta > 0.5 && beta < 1.0)) {
    fail(ErrorKind::invalid_parameter, fmt::format("r-of-beta requires 1/2 < beta < 1 (got {})", beta));
  }
  if (tau <= 1.0) return 2.0 * beta - 1.0;
  const double beta_thr = 1.0 - std::pow(2.0, tau / (1.0 - tau));
  if (beta < beta_thr) return (beta - 0.5) / ggloc_slope(tau);
  return std::pow(1.0 - std::pow(1.0 - beta, 1.0 / tau), tau);
}

}  // namespace

double boundary_closed_form(Family family, const FamilyParams& params, ClosedFormMode mode, double beta) {
  const bool forward = mode == ClosedFormMode::beta_of_r;
  switch (family) {
    case Family::idj:
    case Family::symmetric_idj:
      return forward ? beta_idj(params.r) : r_star_idj(beta);
    case Family::hetero:
      return forward ? hetero_beta(params) : hetero_r(params, beta);
    case Family::dilate: {
      if (forward) {
        const double l = dilate_linf(params);
        check_range(l, 0.0, kInf, "dilate requires linf >= 0");
        return beta_idj(l * l);
      }
      return std::sqrt(r_star_idj(beta));
    }
    case Family::gen_gaussian_conv:
      return forward ? ggconv_beta(params) : ggconv_r(params, beta);
    case Family::gen_gaussian_location:
      return forward ? ggloc_beta(params) : ggloc_r(params, beta);
    case Family::conv_from_f:
      fail(ErrorKind::invalid_parameter, "conv_from_f has no closed form; use beta_convolution");
  }
  fail(ErrorKind::invalid_parameter, "unknown family");
}

BoundaryResult beta_convolution(const GridFunction& f) {
  if (f.empty()) fail(ErrorKind::empty_grid, "f grid is empty");
  double best = -kInf;
  double at = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.v[i] == kInf) continue;
    const double t = f.x[i];
    const double val = beta_idj(t * t) - f.v[i];
    if (val > best) {
      best = val;
      at = t;
    }
  }
  if (best == -kInf) fail(ErrorKind::empty_support, "f is +inf on the whole grid");
  double spacing = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) spacing = std::max(spacing, f.x[i] - f.x[i - 1]);
  return {std::clamp(best, 0.5, 1.0), at, BoundaryMethod::grid, spacing};
}

BoundaryResult beta_convolution(const std::function<double(double)>& f, double lo, double hi,
                                const ScanOptions& opts) {
  auto obj = [&](double t) {
    const double pen = f(t);
    return pen == kInf ? -kInf : beta_idj(t * t) - pen;
  };
  SupResult best{};
  try {
    best = ess_sup(obj, lo, hi, opts.points, opts.refine);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_grid) fail(ErrorKind::empty_support, "f is +inf on the whole scan range");
    throw;
  }
  const double res = (hi - lo) / static_cast<double>(opts.points - 1);
  return {std::clamp(best.value, 0.5, 1.0), best.argmax, BoundaryMethod::grid, res};
}

}  // namespace sdet
