#pragma once

// Forecast-limit detection on per-lead score series.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "horizonkit/core.hpp"
#include "horizonkit/scoring.hpp"

namespace horizonkit {

/// ScoreAtMost: acceptable while score <= rho. ScoreAtLeast: acceptable
/// while score >= rho (skill scores against 0).
enum class Direction { ScoreAtMost, ScoreAtLeast };

std::string_view to_string(Direction direction);

class ToleranceSpec {
 public:
  using PerLead = std::vector<double>;
  using Grouped = std::map<std::string, PerLead>;
  using Value = std::variant<double, PerLead, Grouped>;

  static ToleranceSpec scalar(double rho, Direction direction);
  /// NaN entries mean "no threshold at this lead"; such leads are skipped.
  static ToleranceSpec per_lead(PerLead rho, Direction direction);
  static ToleranceSpec grouped(Grouped rho, Direction direction);

  const Value& value() const noexcept { return value_; }
  Direction direction() const noexcept { return direction_; }

  /// Threshold at a 0-based lead index. Grouped specs need `group`.
  double threshold(std::size_t index, std::string_view group = {}) const;

  /// Throws AxisError if a per-lead series does not match `length`.
  void check_length(std::size_t length) const;

  friend bool operator==(const ToleranceSpec&, const ToleranceSpec&) = default;

 private:
  ToleranceSpec(Value value, Direction direction) : value_(std::move(value)), direction_(direction) {}

  Value value_;
  Direction direction_;
};

enum class LimitStatus { Crossed, NotReached, NeverAcceptable };
enum class LimitKind { Absolute, Relative, Potential };

std::string_view to_string(LimitStatus status);
std::string_view to_string(LimitKind kind);

/// Simulated verification always yields potential limits.
LimitKind limit_kind_for(VerificationKind verification, bool against_reference);

/// Inclusive range of 1-based leads over which the score was acceptable.
struct LeadInterval {
  std::size_t first;
  std::size_t last;
  friend bool operator==(const LeadInterval&, const LeadInterval&) = default;
};

struct LimitResult {
  LimitStatus status;
  /// First failing lead for Crossed and NeverAcceptable; the axis length
  /// for NotReached.
  std::size_t lead;
  std::int64_t absolute_time;
  std::size_t max_lead;
  ScoreName score_name;
  ToleranceSpec tolerance;
  LimitKind kind;
  /// Every acceptable run, including any after the first crossing.
  std::vector<LeadInterval> acceptable_intervals;

  /// Total order NeverAcceptable < Crossed(lead) < NotReached.
  std::size_t rank() const;
  /// Lead used in distribution statistics; empty for NotReached.
  std::optional<double> realized_lead() const;
};

struct LimitDistribution {
  std::vector<LimitResult> per_member_limits;
  std::optional<double> mean;
  std::optional<double> stddev;
  std::optional<double> median;
  std::optional<double> q25;
  std::optional<double> q75;
  std::size_t not_reached_count = 0;
  std::size_t never_acceptable_count = 0;
};

/// Quantile of sorted data with linear interpolation between order
/// statistics at position (n - 1) p.
double linear_quantile(std::span<const double> sorted, double p);

/// Aggregates realized limits (Crossed and NeverAcceptable); NotReached
/// results are counted only.
LimitDistribution summarize_limits(std::vector<LimitResult> limits);

/// First lead at which the tolerance condition fails. Missing scores are
/// skipped. A failure at the first evaluated lead is NeverAcceptable.
LimitResult detect_limit(const ScoreSeries& score, const ToleranceSpec& tol,
                         LimitKind kind = LimitKind::Absolute, std::string_view group = {});

/// Limit of the skill 1 - forecast/reference against 0; equal scores are
/// still acceptable.
LimitResult relative_limit(const ScoreSeries& score_forecast, const ScoreSeries& score_reference,
                           LimitKind kind = LimitKind::Relative);

struct StandLimit {
  std::string group;
  LimitResult limit;
  /// Neighbour error at the crossing lead; empty when never crossed.
  std::optional<double> threshold;
  /// threshold - |own error| per lead; empty when never crossed.
  std::vector<MaybeReal> bounded;
};

struct GroupedLimits {
  std::map<std::string, LimitDistribution> groups;
  std::map<std::string, StandLimit> stands;
};

/// Per stand, the limit is the first lead where |own error| reaches the
/// smallest |neighbour error|; limits are summarized per group key.
GroupedLimits grouped_limit(const std::map<std::string, ErrorSeries>& errors_by_stand,
                            const std::map<std::string, std::vector<ErrorSeries>>& neighbor_errors,
                            const std::map<std::string, std::string>& groups);

struct TolerancePoint {
  double rho;
  LimitResult limit;
};

std::vector<TolerancePoint> tolerance_curve(const ScoreSeries& score, std::span<const double> tolerances);

enum class Statistic { Mean, Median };

struct AggregateLimit {
  ScoreSeries aggregate;
  /// Sample standard deviation across series per lead.
  std::vector<MaybeReal> spread;
  LimitResult limit;
};

/// Aggregates skill series across initialization times lead by lead and
/// detects the limit of the aggregate at 0.
AggregateLimit limit_of_mean_score(std::span<const ScoreSeries> per_init_scores, Statistic statistic,
                                   LimitKind kind = LimitKind::Relative);

/// Same aggregation, detected against an explicit tolerance (used for
/// absolute-limit sweeps).
AggregateLimit limit_of_mean_score(std::span<const ScoreSeries> per_init_scores, Statistic statistic,
                                   const ToleranceSpec& tol, LimitKind kind);

LimitDistribution member_limit_distribution(std::span<const ScoreSeries> per_member_scores,
                                            const ToleranceSpec& tol, LimitKind kind = LimitKind::Absolute);

}  // namespace horizonkit
