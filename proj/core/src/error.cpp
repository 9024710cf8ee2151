#include "sdet/error.hpp"

namespace sdet {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_sample_size: return "invalid-sample-size";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_probability: return "invalid-probability";
    case ErrorKind::invalid_distance: return "invalid-distance";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::undefined_point: return "undefined-point";
    case ErrorKind::incompatible_laws: return "incompatible-laws";
    case ErrorKind::not_singular: return "not-singular";
    case ErrorKind::wrong_parametrization: return "wrong-parametrization";
    case ErrorKind::admissibility: return "admissibility-error";
    case ErrorKind::out_of_regime: return "out-of-regime";
    case ErrorKind::hc_boundary_undefined: return "hc-boundary-undefined";
    case ErrorKind::empty_support: return "empty-support";
    case ErrorKind::empty_grid: return "empty-grid";
    case ErrorKind::empty_sample: return "empty-sample";
    case ErrorKind::infinite_weight: return "infinite-weight";
    case ErrorKind::config: return "config-error";
    case ErrorKind::io: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace sdet
