#include "sdet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "sdet/error.hpp"

namespace sdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

GridFunction::GridFunction(std::vector<double> xs, std::vector<double> vs) : x(std::move(xs)), v(std::move(vs)) {
  if (x.size() != v.size()) fail(ErrorKind::invalid_parameter, "grid abscissae and values differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) fail(ErrorKind::invalid_parameter, "grid abscissae must be finite");
    if (i > 0 && !(x[i] > x[i - 1])) fail(ErrorKind::invalid_parameter, "grid abscissae must be strictly increasing");
    if (std::isnan(v[i])) fail(ErrorKind::invalid_parameter, "grid values must not be NaN");
  }
}

double GridFunction::operator()(double at) const {
  if (x.empty() || at < x.front() || at > x.back()) return -kInf;
  auto it = std::lower_bound(x.begin(), x.end(), at);
  const auto j = static_cast<std::size_t>(it - x.begin());
  if (x[j] == at) return v[j];
  const double a = v[j - 1];
  const double b = v[j];
  if (!std::isfinite(a) || !std::isfinite(b)) return -kInf;
  const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return a + w * (b - a);
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
  auto xs = linspace(lo, hi, points);
  std::vector<double> vs(xs.size());
  std::transform(xs.begin(), xs.end(), vs.begin(), f);
  return GridFunction(std::move(xs), std::move(vs));
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> xs(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

SupResult ess_sup_grid(const GridFunction& f) {
  if (f.empty()) fail(ErrorKind::empty_grid, "grid has no nodes");
  bool found = false;
  SupResult best{-kInf, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double val = f.v[i];
    if (val == -kInf) continue;
    if (!found || val > best.value) {
      best = {val, f.x[i]};
      found = true;
    }
  }
  if (!found) fail(ErrorKind::empty_grid, "grid has no finite values");
  return best;
}

SupResult refine_max(const std::function<double(double)>& f, double lo, double hi) {
  SupResult best{f(lo), lo};
  const double at_hi = f(hi);
  if (at_hi > best.value) best = {at_hi, hi};
  if (!(hi > lo)) return best;
  std::uintmax_t max_iter = 200;
  auto neg = [&](double x) {
    const double val = f(x);
    return val == -kInf ? kInf : -val;
  };
  const auto [x, negval] =
      boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits, max_iter);
  if (-negval > best.value) best = {-negval, x};
  return best;
}

SupResult ess_sup(const std::function<double(double)>& f, double lo, double hi, std::size_t points, bool refine) {
  if (points == 0 || !(hi >= lo)) fail(ErrorKind::empty_grid, "scan grid is empty");
  const auto xs = linspace(lo, hi, points);
  bool found = false;
  std::size_t best_i = 0;
  double best_v = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double val = f(xs[i]);
    if (val == -kInf || std::isnan(val)) continue;
    if (!found || val > best_v) {
      best_v = val;
      best_i = i;
      found = true;
    }
  }
  if (!found) fail(ErrorKind::empty_grid, "function is -inf on the whole scan grid");
  SupResult best{best_v, xs[best_i]};
  if (!refine || xs.size() < 2 || !std::isfinite(best_v)) return best;
  const double a = xs[best_i == 0 ? 0 : best_i - 1];
  const double b = xs[std::min(best_i + 1, xs.size() - 1)];
  // Refine each half-cell separately so a kink at the node does not trap the minimizer.
  for (auto [l, r] : {std::pair{a, xs[best_i]}, std::pair{xs[best_i], b}}) {
    if (!(r > l)) continue;
    const auto cand = refine_max(f, l, r);
    if (cand.value > best.value) best = cand;
  }
  return best;
}

double laplace_log_integral(const GridFunction& f, double M) {
  if (!(M > 0.0)) fail(ErrorKind::invalid_parameter, "Laplace scale M must be > 0");
  if (f.size() < 2) fail(ErrorKind::empty_grid, "trapezoid rule needs at least two nodes");
  double shift = -kInf;
  for (double val : f.v) {
    if (val == kInf) return kInf;
    shift = std::max(shift, val);
  }
  if (shift == -kInf) return -kInf;
  // Trapezoid weights: half cell on each side of a node.
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.v[i] == -kInf) continue;
    const double left = i > 0 ? f.x[i] - f.x[i - 1] : 0.0;
    const double right = i + 1 < f.size() ? f.x[i + 1] - f.x[i] : 0.0;
    acc += 0.5 * (left + right) * std::exp(M * (f.v[i] - shift));
  }
  if (!std::isfinite(acc)) return kInf;
  if (acc == 0.0) return -kInf;
  return shift + std::log(acc) / M;
}

}  // namespace sdet
