/// @file config.hpp
/// @brief JSON experiment configs: strict schema validation with line-anchored
///        errors, canonical serialization and the content hash stamped into
///        every output file.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrns/initial_data.hpp"
#include "hrns/limit.hpp"
#include "hrns/models.hpp"

namespace hrns {

/// Config rejection with the 1-based line of the offending token (0 when the
/// location is unknown, e.g. a missing file).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(const std::string& msg, int line_in)
        : std::runtime_error(line_in > 0 ? "line " + std::to_string(line_in) + ": " + msg : msg),
          line(line_in) {}
};

/// Stability-map grid: hyperbolic (or 1D) runs over amplitude x eps cells.
struct StabilityConfig {
    std::string model = "hyperbolic"; // hyperbolic | burgers
    int n = 32;
    std::vector<double> eps_list;
    std::vector<double> amplitude_list;
    double horizon = 5.0;
    std::string dt_rule = "cfl:0.4";
    std::uint64_t seed = 1;
    std::string initial_kind = "random_smooth"; // amplitude comes from the grid
    DataSpec forcing{"zero", 0.0};
    int sample_stride = 8;
};

/// Canonical serialization (sorted keys, seed override applied) and its
/// FNV-1a 64 hash; stamped into every output header for provenance.
struct ConfigStamp {
    std::string canonical;
    std::uint64_t hash = 0;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

/// Parse + validate the `run` / `energy-report` / `blowup-study` schema.
/// Unknown keys, type mismatches and out-of-range values throw ConfigError
/// anchored to the offending line.
RunConfig parse_run_config(const std::string& text, std::optional<std::uint64_t> seed_override,
                           ConfigStamp* stamp = nullptr);

LimitStudyConfig parse_limit_study_config(const std::string& text,
                                          std::optional<std::uint64_t> seed_override,
                                          ConfigStamp* stamp = nullptr);

StabilityConfig parse_stability_config(const std::string& text,
                                       std::optional<std::uint64_t> seed_override,
                                       ConfigStamp* stamp = nullptr);

/// Whole-file read; ConfigError(line 0) when unreadable.
std::string read_text_file(const std::string& path);

} // namespace hrns
