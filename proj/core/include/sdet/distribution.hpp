#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sdet/rng.hpp"

namespace sdet {

class Distribution;

struct Gaussian {
  double mean = 0.0;
  double sd = 1.0;
};

/// Subbotin law with density tau / (2 Gamma(1/tau)) exp(-|y - location|^tau).
/// tau = 1 is Laplace, tau = 2 is N(location, 1/2).
struct GenGaussian {
  double tau = 2.0;
  double location = 0.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

/// Law of scale * X with X ~ base.
struct Dilated {
  std::shared_ptr<const Distribution> base;
  double scale = 1.0;
};

struct Atom {
  double point = 0.0;
  double mass = 0.0;
};

/// Atoms are kept sorted by point with duplicates merged.
struct FiniteDiscrete {
  std::vector<Atom> atoms;
};

struct MixtureComponent {
  double weight = 0.0;
  std::shared_ptr<const Distribution> dist;
};

struct Mixture {
  std::vector<MixtureComponent> components;
};

/// Immutable probability law on the real line. Copies share structure.
///
/// Each law is split into an atomic part and an absolutely continuous part;
/// `log_atom` and `log_density` report the two parts at a point and return
/// -inf where the part vanishes.
class Distribution {
 public:
  using Kind = std::variant<Gaussian, GenGaussian, Uniform, Dilated, FiniteDiscrete, Mixture>;

  static Distribution gaussian(double mean = 0.0, double sd = 1.0);
  static Distribution gen_gaussian(double tau, double location = 0.0);
  static Distribution uniform(double lo = 0.0, double hi = 1.0);
  static Distribution dilated(const Distribution& base, double scale);
  static Distribution finite_discrete(std::vector<Atom> atoms);
  static Distribution point_mass(double point);
  static Distribution mixture(std::vector<std::pair<double, Distribution>> components);

  const Kind& kind() const noexcept { return kind_; }

  bool has_atoms() const noexcept;
  bool has_density() const noexcept;
  bool is_discrete() const noexcept { return has_atoms() && !has_density(); }
  bool is_continuous() const noexcept { return has_density() && !has_atoms(); }

  double cdf(double y) const;
  /// P(Y < y).
  double cdf_left(double y) const;
  /// P(Y > y), computed without cancellation in the upper tail.
  double sf(double y) const;

  double log_density(double y) const;
  double log_atom(double y) const;

  /// Generalized inverse inf{y : cdf(y) >= p} for p in (0,1).
  double quantile(double p) const;
  /// inf{y : sf(y) <= q}; accurate for tiny upper-tail probabilities.
  double quantile_upper(double q) const;

  /// Closed interval carrying all mass (may be infinite).
  std::pair<double, double> support() const;

  /// Sorted atom locations (empty for continuous laws).
  std::vector<double> atom_points() const;

  double draw(RngStream& stream) const;

 private:
  explicit Distribution(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

/// Null law, alternative law and contamination fraction.
struct SparseMixture {
  Distribution null_dist;
  Distribution alt_dist;
  double epsilon = 0.0;

  SparseMixture(Distribution null_law, Distribution alt_law, double eps);

  /// (1 - epsilon) null + epsilon alt as a single law.
  Distribution mixed() const;
};

/// n^(-beta). n is usually an integer sample size but any real n >= 2 is accepted.
double epsilon_from_beta(double n, double beta);
/// sqrt(2 r log n).
double mu_from_r(double n, double r);

/// log(dG/dQ)(y) relative to the common dominating measure.
/// Throws singular-point when Q puts no weight at y but G does, and
/// undefined-point when neither does.
double log_likelihood_ratio(const Distribution& g, const Distribution& q, double y);

std::vector<double> sample(const Distribution& d, std::size_t n, RngStream& stream);
/// Bernoulli(epsilon) label, then a draw from the chosen component.
std::vector<double> sample(const SparseMixture& mix, std::size_t n, RngStream& stream);
void sample_into(const SparseMixture& mix, std::span<double> out, RngStream& stream);
void sample_into(const Distribution& d, std::span<double> out, RngStream& stream);

}  // namespace sdet
