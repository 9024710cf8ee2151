#include "sdet/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdet/error.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::invalid_parameter, what);
}

// sup over t in [0, a] of 2at - t^2 - pen(t); the maximizer never leaves [0, a]
// because pen is even and nondecreasing in |t|.
double conv_alpha(double u, const std::function<double(double)>& pen) {
  const double a = std::fabs(u);
  if (a == 0.0) return -pen(0.0);
  auto obj = [&](double t) { return 2.0 * a * t - t * t - pen(t); };
  return ess_sup(obj, 0.0, a, 129, true).value;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::idj: return "idj";
    case Family::symmetric_idj: return "symmetric_idj";
    case Family::hetero: return "hetero";
    case Family::dilate: return "dilate";
    case Family::conv_from_f: return "conv_from_f";
    case Family::gen_gaussian_conv: return "ggconv";
    case Family::gen_gaussian_location: return "gglocation";
  }
  return "unknown";
}

std::string_view to_string(Axis a) noexcept { return a == Axis::u ? "u" : "s"; }

Family family_from_string(std::string_view name) {
  if (name == "idj") return Family::idj;
  if (name == "symmetric_idj" || name == "symmetric") return Family::symmetric_idj;
  if (name == "hetero") return Family::hetero;
  if (name == "dilate") return Family::dilate;
  if (name == "conv_from_f") return Family::conv_from_f;
  if (name == "ggconv" || name == "gen_gaussian_conv") return Family::gen_gaussian_conv;
  if (name == "gglocation" || name == "gen_gaussian_location") return Family::gen_gaussian_location;
  fail(ErrorKind::invalid_parameter, "unknown family '" + std::string(name) + "'");
}

ExponentFunction ExponentFunction::closed_form(Family family, FamilyParams params, Axis axis, bool convolutional,
                                               std::function<double(double)> body, double scale) {
  ExponentFunction e;
  e.axis_ = axis;
  e.convolutional_ = convolutional;
  e.family_ = family;
  e.params_ = std::move(params);
  e.body_ = std::move(body);
  e.scale_ = scale;
  return e;
}

ExponentFunction ExponentFunction::sampled(GridFunction grid, Axis axis, bool convolutional) {
  if (grid.size() < 2) fail(ErrorKind::empty_grid, "sampled exponent needs at least two nodes");
  for (double v : grid.v) {
    if (v == kInf) fail(ErrorKind::invalid_parameter, "exponent grid values must be finite or -inf");
  }
  if (axis == Axis::s && grid.lo() < 0.0) fail(ErrorKind::invalid_parameter, "s-axis grid must start at s >= 0");
  ExponentFunction e;
  e.axis_ = axis;
  e.convolutional_ = convolutional;
  e.grid_ = std::move(grid);
  return e;
}

double ExponentFunction::operator()(double x) const {
  if (grid_) return (*grid_)(x);
  return body_(x);
}

std::pair<double, double> ExponentFunction::domain() const {
  if (grid_) return {grid_->lo(), grid_->hi()};
  if (axis_ == Axis::u) {
    const double U = std::max(5.0, 2.0 * scale_);
    return {-U, U};
  }
  return {0.0, std::max(25.0, 4.0 * scale_ * scale_)};
}

GridFunction ExponentFunction::tabulate(std::size_t points) const {
  if (grid_) return *grid_;
  const auto [lo, hi] = domain();
  return GridFunction::sample(body_, lo, hi, points);
}

double dilate_linf(const FamilyParams& p) {
  if (!p.support_points.empty()) {
    double m = 0.0;
    for (double x : p.support_points) m = std::max(m, std::fabs(x));
    return m;
  }
  if (p.support_interval) return std::max(std::fabs(p.support_interval->first), std::fabs(p.support_interval->second));
  if (p.linf) return *p.linf;
  fail(ErrorKind::invalid_parameter, "dilate needs support points, an interval or linf");
}

ExponentFunction alpha_family(Family family, const FamilyParams& params) {
  const FamilyParams& p = params;
  switch (family) {
    case Family::idj: {
      require(p.r >= 0.0, "idj requires r >= 0");
      const double sr = std::sqrt(p.r);
      const double r = p.r;
      return ExponentFunction::closed_form(
          family, p, Axis::u, true, [sr, r](double u) { return 2.0 * u * sr - r; }, sr);
    }
    case Family::symmetric_idj: {
      require(p.r >= 0.0, "symmetric_idj requires r >= 0");
      const double sr = std::sqrt(p.r);
      const double r = p.r;
      return ExponentFunction::closed_form(
          family, p, Axis::u, true, [sr, r](double u) { return 2.0 * std::fabs(u) * sr - r; }, sr);
    }
    case Family::hetero: {
      FamilyParams q = p;
      if (q.tau2) {
        require(*q.tau2 >= 0.0, "hetero requires tau2 >= 0");
        q.sigma2 = 1.0 + *q.tau2;
      }
      require(q.r >= 0.0, "hetero requires r >= 0");
      require(q.sigma2 > 0.0, "hetero requires sigma2 > 0");
      const double sr = std::sqrt(q.r);
      const double s2 = q.sigma2;
      const bool conv = s2 >= 1.0;
      return ExponentFunction::closed_form(
          family, q, Axis::u, conv, [sr, s2](double u) { return u * u - (u - sr) * (u - sr) / s2; },
          std::max(1.0, sr));
    }
    case Family::dilate: {
      if (!p.support_points.empty()) {
        for (double x : p.support_points) require(std::isfinite(x), "dilate support points must be finite");
        const auto pts = p.support_points;
        return ExponentFunction::closed_form(
            family, p, Axis::u, true,
            [pts](double u) {
              double best = -kInf;
              for (double x : pts) best = std::max(best, -x * x + 2.0 * u * x);
              return best;
            },
            dilate_linf(p));
      }
      double a = 0.0;
      double b = 0.0;
      if (p.support_interval) {
        std::tie(a, b) = *p.support_interval;
        require(std::isfinite(a) && std::isfinite(b) && a <= b, "dilate interval must be finite with lo <= hi");
      } else {
        require(p.linf.has_value(), "dilate needs support points, an interval or linf");
        require(*p.linf >= 0.0 && std::isfinite(*p.linf), "dilate requires linf >= 0");
        a = -*p.linf;
        b = *p.linf;
      }
      return ExponentFunction::closed_form(
          family, p, Axis::u, true,
          [a, b](double u) {
            const double x = std::clamp(u, a, b);
            return -x * x + 2.0 * u * x;
          },
          dilate_linf(p));
    }
    case Family::conv_from_f: {
      const GridFunction f = p.f;
      if (f.empty()) fail(ErrorKind::empty_grid, "conv_from_f needs a non-empty f grid");
      std::vector<double> ts;
      std::vector<double> fs;
      double scale = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.v[i] == kInf) continue;
        require(std::isfinite(f.v[i]), "f values must be finite or +inf");
        ts.push_back(f.x[i]);
        fs.push_back(f.v[i]);
        scale = std::max(scale, std::fabs(f.x[i]));
      }
      if (ts.empty()) fail(ErrorKind::empty_support, "f is +inf on the whole grid");
      return ExponentFunction::closed_form(
          family, p, Axis::u, true,
          [ts = std::move(ts), fs = std::move(fs)](double u) {
            double best = -kInf;
            for (std::size_t i = 0; i < ts.size(); ++i) best = std::max(best, 2.0 * u * ts[i] - ts[i] * ts[i] - fs[i]);
            return best;
          },
          scale);
    }
    case Family::gen_gaussian_conv: {
      require(p.r > 0.0, "ggconv requires r > 0");
      require(p.tau > 0.0, "ggconv requires tau > 0");
      const double sr = std::sqrt(p.r);
      const double tau = p.tau;
      auto pen = [sr, tau](double t) { return std::pow(std::fabs(t) / sr, tau); };
      return ExponentFunction::closed_form(
          family, p, Axis::u, true, [pen](double u) { return conv_alpha(u, pen); }, sr);
    }
    case Family::gen_gaussian_location: {
      require(p.r >= 0.0, "gglocation requires r >= 0");
      require(p.tau > 0.0, "gglocation requires tau > 0");
      const double tau = p.tau;
      const double rt = std::pow(p.r, 1.0 / tau);
      return ExponentFunction::closed_form(
          family, p, Axis::s, false,
          [tau, rt](double s) {
            if (s < 0.0) return -kInf;
            return s - std::pow(std::fabs(std::pow(s, 1.0 / tau) - rt), tau);
          },
          std::sqrt(std::max(p.r, 1.0)));
    }
  }
  fail(ErrorKind::invalid_parameter, "unknown family");
}

ExponentFunction to_s_axis(const ExponentFunction& alpha) {
  if (alpha.axis() != Axis::u) fail(ErrorKind::wrong_parametrization, "to_s_axis expects a u-axis exponent");
  const auto [lo, hi] = alpha.domain();
  const double reach = std::max(std::fabs(lo), std::fabs(hi));
  auto body = [alpha](double s) {
    if (s < 0.0) return -kInf;
    const double u = std::sqrt(s);
    return std::max(alpha(u), alpha(-u));
  };
  if (alpha.is_sampled()) {
    const auto& g = *alpha.grid();
    std::vector<double> ss;
    for (double x : g.x) ss.push_back(x * x);
    ss.push_back(0.0);
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    std::vector<double> vs(ss.size());
    std::transform(ss.begin(), ss.end(), vs.begin(), body);
    return ExponentFunction::sampled(GridFunction(std::move(ss), std::move(vs)), Axis::s, alpha.convolutional());
  }
  // Keep the s-range equal to the square of the u-range.
  return ExponentFunction::closed_form(alpha.family().value_or(Family::conv_from_f), alpha.params(), Axis::s,
                                       alpha.convolutional(), body, reach / 2.0);
}

}  // namespace sdet
