#pragma once

// File formats. All numeric output is locale-independent decimal with 17
// significant digits; missing values are the literal token `NA`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "horizonkit/core.hpp"
#include "horizonkit/limits.hpp"
#include "horizonkit/reference.hpp"
#include "horizonkit/scoring.hpp"

namespace horizonkit {

std::string format_real(double value);
std::string format_maybe(const MaybeReal& value);

/// `member,lead,value`; members 0-based, leads 1-based, rows in any order.
EnsembleForecast read_ensemble_csv(const std::filesystem::path& path, std::int64_t t0 = 0,
                                   const std::string& step = "step");
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleForecast& ensemble);

/// `lead,value`; leads contiguous from 1, `value` may be `NA`.
VerificationSeries read_series_csv(const std::filesystem::path& path,
                                   VerificationKind kind = VerificationKind::Observed, std::int64_t t0 = 0,
                                   const std::string& step = "step");
void write_series_csv(const std::filesystem::path& path, std::span<const MaybeReal> values);

/// `# cycle_length=<n>` comment, then `position,mean,std`.
GaussianClimatology read_climatology_csv(const std::filesystem::path& path);
void write_climatology_csv(const std::filesystem::path& path, const GaussianClimatology& clim);

/// One stand of a grouped-tolerance input.
struct StandRecord {
  std::string group;
  std::vector<MaybeReal> own;
  std::vector<MaybeReal> lower;
  std::vector<MaybeReal> upper;
};

/// `stand,group,lead,own_error,neighbor_lower_error,neighbor_upper_error`;
/// a neighbour column may be `NA` where that class does not exist.
std::map<std::string, StandRecord> read_stands_csv(const std::filesystem::path& path);

nlohmann::json limit_to_json(const LimitResult& limit);
nlohmann::json tolerance_to_json(const ToleranceSpec& tol);
nlohmann::json distribution_to_json(const LimitDistribution& dist, bool include_members = false);

/// One column of scores.csv.
struct NamedColumn {
  std::string label;
  std::vector<MaybeReal> values;
};

NamedColumn column_of(std::string label, const ScoreSeries& series);

struct NamedLimit {
  std::string label;
  LimitResult limit;
};

struct HeatmapCell {
  std::int64_t init_time;
  std::size_t lead;
  MaybeReal value;
};

struct ResultSet {
  std::vector<NamedColumn> scores;
  std::vector<NamedLimit> limits;
  std::vector<HeatmapCell> heatmap;
  /// Extra JSON documents written as `<name>.json`.
  std::map<std::string, nlohmann::json> documents;
  /// Extra CSV files written verbatim as `<name>`.
  std::map<std::string, std::string> tables;
};

struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> files;
  std::vector<std::string> omitted;
  nlohmann::json to_json() const;
};

/// Writes scores.csv, limits.json, heatmap.csv (omitted when empty), any
/// extra documents and tables, and manifest.json. Throws IoError.
Manifest write_results(const std::filesystem::path& dir, const ResultSet& results, const std::string& config_hash,
                       std::uint64_t seed);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace horizonkit
