#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdet/boundary.hpp"
#include "sdet/distribution.hpp"
#include "sdet/exponent.hpp"
#include "sdet/hctest.hpp"
#include "sdet/sim.hpp"

namespace sdet::io {

using nlohmann::json;

/// Numbers as printed everywhere: 12 significant digits.
std::string fmt12(double x);
/// JSON number holding exactly the fmt12 digits; null for non-finite x.
json number12(double x);

json to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

json to_json(const BoundaryResult& b);
json to_json(const HCResult& r);

FamilyParams params_from_json(const json& j);
json to_json(const FamilyParams& p);

/// Keys: family, params, beta_grid, r_grid, n_list, replicates, tests, seed,
/// delta, hc_restricted, max_u, workers. Missing keys keep their defaults.
ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);
/// FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

json read_json_file(const std::string& path);

/// One number per line; a non-numeric first line is taken as a header.
/// Extra comma-separated columns are ignored.
std::vector<double> read_sample(const std::string& path);
std::vector<double> parse_sample(std::istream& in);

/// Two columns (x, value). The header's first field is `u` or `s` and sets
/// the axis; a line `# convolutional` sets the convolutional flag. `-inf`
/// values are accepted.
ExponentFunction read_exponent_csv(const std::string& path);
ExponentFunction parse_exponent_csv(std::istream& in);
void write_exponent_csv(std::ostream& out, const ExponentFunction& e, std::size_t points = 20001);

void write_phase_csv(std::ostream& out, const PhaseTable& table);
json manifest(const ExperimentConfig& cfg, const PhaseTable& table);

}  // namespace sdet::io
