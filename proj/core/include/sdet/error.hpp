#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdet {

enum class ErrorKind {
  invalid_sample_size,
  invalid_parameter,
  invalid_probability,
  invalid_distance,
  singular_point,
  undefined_point,
  incompatible_laws,
  not_singular,
  wrong_parametrization,
  admissibility,
  out_of_regime,
  hc_boundary_undefined,
  empty_support,
  empty_grid,
  empty_sample,
  infinite_weight,
  config,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain or I/O failure raised by library operations. The kind is stable and
/// used by the CLI to pick an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace sdet
