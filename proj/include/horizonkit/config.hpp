#pragma once

// Experiment configuration: a flat `key = value` text format grouped in
// `[section]` blocks. `#` starts a comment line. See README for the keys.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "horizonkit/core.hpp"
#include "horizonkit/ricker.hpp"
#include "horizonkit/scoring.hpp"

namespace horizonkit {

/// Raw `section.key -> value` pairs; duplicate keys are rejected.
using ConfigEntries = std::map<std::string, std::string>;
ConfigEntries parse_config_entries(const std::string& text);

enum class Mode { Relative, Absolute, Grouped };
enum class ForecastSource { Ricker, Ensemble, Point, Errors };
enum class VerificationSource { Simulate, File, None };
enum class ReferenceType { Saturation, Persistence, Climatology, None };
enum class Aggregation { Mean, Median, Both };

struct SaturationSpec {
  std::size_t burn_in = 100;
  std::size_t members = 1000;
  std::size_t horizon = 1000;
};

struct SweepSpec {
  std::vector<std::int64_t> init_times;
  std::size_t horizon = 0;  // 0: use the forecast horizon
  Aggregation aggregation = Aggregation::Both;
};

struct ExperimentConfig {
  Mode mode = Mode::Relative;
  ScoreName score = ScoreName::CRPSS;
  std::optional<double> tolerance;

  ForecastSource forecast = ForecastSource::Ricker;
  std::string forecast_path;

  VerificationSource verification = VerificationSource::Simulate;
  std::string verification_path;
  std::optional<VerificationKind> verification_kind;
  std::optional<std::uint64_t> truth_seed;

  ReferenceType reference = ReferenceType::Saturation;
  std::string reference_path;
  SaturationSpec saturation;

  RickerConfig ricker;
  std::int64_t init_time = 0;
  SweepSpec sweep;
  std::string grouped_path;
  std::vector<double> rho;

  std::string output_dir = "out";
  std::size_t threads = 1;

  /// Verification kind after defaults: simulated truth is Simulated.
  VerificationKind effective_verification_kind() const;
  /// Truth seed after defaults (derived from the Ricker seed).
  std::uint64_t effective_truth_seed() const;
  std::size_t forecast_horizon() const { return ricker.horizon; }
  std::size_t sweep_horizon() const { return sweep.horizon ? sweep.horizon : ricker.horizon; }

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Normalized text of every field that affects results (output directory
  /// and thread count excluded).
  std::string canonical() const;
  /// 64-bit FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Command-line overrides applied on top of a parsed config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> members;
  std::optional<std::size_t> horizon;
  std::optional<std::string> score;
  std::optional<double> tolerance;
  std::optional<std::size_t> threads;
  std::optional<double> cv_params;
  std::optional<double> cv_init;
};

void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides);

/// Parses `0..50`, `0,5,10` or a mix (`0..3,10`).
std::vector<std::int64_t> parse_index_list(const std::string& text, const std::string& key);
/// Parses `0.1,0.2` or `start:stop:count` (inclusive, evenly spaced).
std::vector<double> parse_real_list(const std::string& text, const std::string& key);

}  // namespace horizonkit
