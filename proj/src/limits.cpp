#include "horizonkit/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace horizonkit {

namespace {

bool acceptable(double score, double rho, Direction direction) {
  return direction == Direction::ScoreAtMost ? score <= rho : score >= rho;
}

void check_orientation(ScoreName name, Direction direction) {
  const bool skill = higher_is_better(name);
  if (skill != (direction == Direction::ScoreAtLeast)) {
    throw OrientationError(std::string(to_string(direction)) + " does not match the orientation of " +
                           std::string(to_string(name)));
  }
}

// Builds a LimitResult from per-lead acceptability flags (empty = no
// evidence at that lead).
LimitResult scan(const TimeAxis& axis, std::span<const std::optional<bool>> ok, ScoreName name,
                 ToleranceSpec tol, LimitKind kind) {
  LimitResult result{LimitStatus::NotReached, axis.length(), axis.absolute(axis.length()), axis.length(), name,
                     std::move(tol), kind, {}};
  bool seen_evidence = false;
  bool crossed = false;
  std::optional<LeadInterval> run;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (!ok[i]) continue;
    const std::size_t lead = i + 1;
    if (*ok[i]) {
      if (run) {
        run->last = lead;
      } else {
        run = LeadInterval{lead, lead};
      }
    } else {
      if (run) {
        result.acceptable_intervals.push_back(*run);
        run.reset();
      }
      if (!crossed) {
        crossed = true;
        result.status = seen_evidence ? LimitStatus::Crossed : LimitStatus::NeverAcceptable;
        result.lead = lead;
        result.absolute_time = axis.absolute(lead);
      }
    }
    seen_evidence = true;
  }
  if (run) result.acceptable_intervals.push_back(*run);
  return result;
}

double sample_std(std::span<const double> values, double mean) {
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

}  // namespace

std::string_view to_string(Direction direction) {
  return direction == Direction::ScoreAtMost ? "score_at_most" : "score_at_least";
}

std::string_view to_string(LimitStatus status) {
  switch (status) {
    case LimitStatus::Crossed: return "crossed";
    case LimitStatus::NotReached: return "not_reached";
    case LimitStatus::NeverAcceptable: return "never_acceptable";
  }
  return "unknown";
}

std::string_view to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::Absolute: return "absolute";
    case LimitKind::Relative: return "relative";
    case LimitKind::Potential: return "potential";
  }
  return "unknown";
}

LimitKind limit_kind_for(VerificationKind verification, bool against_reference) {
  if (verification == VerificationKind::Simulated) return LimitKind::Potential;
  return against_reference ? LimitKind::Relative : LimitKind::Absolute;
}

ToleranceSpec ToleranceSpec::scalar(double rho, Direction direction) {
  if (std::isnan(rho)) throw ToleranceError("tolerance must not be NaN");
  return ToleranceSpec(rho, direction);
}

ToleranceSpec ToleranceSpec::per_lead(PerLead rho, Direction direction) {
  if (rho.empty()) throw ToleranceError("per-lead tolerance must not be empty");
  return ToleranceSpec(std::move(rho), direction);
}

ToleranceSpec ToleranceSpec::grouped(Grouped rho, Direction direction) {
  if (rho.empty()) throw ToleranceError("grouped tolerance needs at least one group");
  for (const auto& [key, series] : rho) {
    if (series.empty()) throw ToleranceError("grouped tolerance for '" + key + "' is empty");
  }
  return ToleranceSpec(std::move(rho), direction);
}

double ToleranceSpec::threshold(std::size_t index, std::string_view group) const {
  if (const auto* rho = std::get_if<double>(&value_)) return *rho;
  if (const auto* series = std::get_if<PerLead>(&value_)) return series->at(index);
  const auto& groups = std::get<Grouped>(value_);
  const auto it = groups.find(std::string(group));
  if (it == groups.end()) throw CoverageError("no tolerance for group '" + std::string(group) + "'");
  return it->second.at(index);
}

void ToleranceSpec::check_length(std::size_t length) const {
  auto check = [&](const PerLead& series) {
    if (series.size() != length) {
      throw AxisError("per-lead tolerance has " + std::to_string(series.size()) + " entries, axis has " +
                      std::to_string(length));
    }
  };
  if (const auto* series = std::get_if<PerLead>(&value_)) check(*series);
  if (const auto* groups = std::get_if<Grouped>(&value_)) {
    for (const auto& entry : *groups) check(entry.second);
  }
}

std::size_t LimitResult::rank() const {
  switch (status) {
    case LimitStatus::NeverAcceptable: return 0;
    case LimitStatus::Crossed: return lead;
    case LimitStatus::NotReached: return max_lead + 1;
  }
  return 0;
}

std::optional<double> LimitResult::realized_lead() const {
  if (status == LimitStatus::NotReached) return std::nullopt;
  return static_cast<double>(lead);
}

double linear_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw EmptyInputError("quantile of empty sample");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

LimitDistribution summarize_limits(std::vector<LimitResult> limits) {
  LimitDistribution dist;
  std::vector<double> realized;
  for (const auto& limit : limits) {
    if (limit.status == LimitStatus::NotReached) ++dist.not_reached_count;
    if (limit.status == LimitStatus::NeverAcceptable) ++dist.never_acceptable_count;
    if (auto lead = limit.realized_lead()) realized.push_back(*lead);
  }
  dist.per_member_limits = std::move(limits);
  if (realized.empty()) return dist;
  std::sort(realized.begin(), realized.end());
  double sum = 0.0;
  for (double v : realized) sum += v;
  dist.mean = sum / static_cast<double>(realized.size());
  if (realized.size() >= 2) dist.stddev = sample_std(realized, *dist.mean);
  dist.median = linear_quantile(realized, 0.5);
  dist.q25 = linear_quantile(realized, 0.25);
  dist.q75 = linear_quantile(realized, 0.75);
  return dist;
}

LimitResult detect_limit(const ScoreSeries& score, const ToleranceSpec& tol, LimitKind kind,
                         std::string_view group) {
  check_orientation(score.name(), tol.direction());
  tol.check_length(score.axis().length());
  std::vector<std::optional<bool>> ok(score.axis().length());
  for (std::size_t i = 0; i < ok.size(); ++i) {
    const auto& s = score.at(i);
    if (!s) continue;
    const double rho = tol.threshold(i, group);
    if (std::isnan(rho)) continue;
    ok[i] = acceptable(*s, rho, tol.direction());
  }
  return scan(score.axis(), ok, score.name(), tol, kind);
}

LimitResult relative_limit(const ScoreSeries& score_forecast, const ScoreSeries& score_reference,
                           LimitKind kind) {
  if (kind == LimitKind::Absolute) throw ParameterError("relative_limit cannot produce an absolute limit");
  const bool probabilistic = score_forecast.name() == ScoreName::CRPS;
  const ScoreSeries skill = probabilistic ? crpss(score_forecast, score_reference)
                                          : mae_skill_score(score_forecast, score_reference);
  return detect_limit(skill, ToleranceSpec::scalar(0.0, Direction::ScoreAtLeast), kind);
}

GroupedLimits grouped_limit(const std::map<std::string, ErrorSeries>& errors_by_stand,
                            const std::map<std::string, std::vector<ErrorSeries>>& neighbor_errors,
                            const std::map<std::string, std::string>& groups) {
  GroupedLimits out;
  std::map<std::string, std::vector<LimitResult>> by_group;
  for (const auto& [stand, own] : errors_by_stand) {
    const auto nb = neighbor_errors.find(stand);
    if (nb == neighbor_errors.end() || nb->second.empty()) {
      throw CoverageError("stand '" + stand + "' has no neighbour-class errors");
    }
    const auto grp = groups.find(stand);
    if (grp == groups.end()) throw CoverageError("stand '" + stand + "' has no group key");
    const TimeAxis& axis = own.axis();
    for (const auto& series : nb->second) require_same_axis(axis, series.axis(), "grouped_limit");

    // Tolerance per lead: the smallest neighbour-class error.
    ToleranceSpec::PerLead rho(axis.length(), std::numeric_limits<double>::quiet_NaN());
    std::vector<std::optional<bool>> ok(axis.length());
    for (std::size_t i = 0; i < axis.length(); ++i) {
      for (const auto& series : nb->second) {
        if (const auto& e = series.at(i)) {
          const double a = std::abs(*e);
          if (std::isnan(rho[i]) || a < rho[i]) rho[i] = a;
        }
      }
      const auto& e = own.at(i);
      if (!e || std::isnan(rho[i])) continue;
      ok[i] = std::abs(*e) < rho[i];
    }

    StandLimit stand_limit{grp->second,
                           scan(axis, ok, ScoreName::AE,
                                ToleranceSpec::per_lead(rho, Direction::ScoreAtMost), LimitKind::Absolute),
                           std::nullopt,
                           {}};
    if (stand_limit.limit.status != LimitStatus::NotReached) {
      const double threshold = rho[stand_limit.limit.lead - 1];
      stand_limit.threshold = threshold;
      stand_limit.bounded.resize(axis.length());
      for (std::size_t i = 0; i < axis.length(); ++i) {
        if (const auto& e = own.at(i)) stand_limit.bounded[i] = threshold - std::abs(*e);
      }
    }
    by_group[grp->second].push_back(stand_limit.limit);
    out.stands.emplace(stand, std::move(stand_limit));
  }
  for (const auto& [stand, series] : neighbor_errors) {
    if (!errors_by_stand.contains(stand)) throw CoverageError("stand '" + stand + "' has no own-class errors");
  }
  for (auto& [group, limits] : by_group) out.groups.emplace(group, summarize_limits(std::move(limits)));
  return out;
}

std::vector<TolerancePoint> tolerance_curve(const ScoreSeries& score, std::span<const double> tolerances) {
  if (higher_is_better(score.name())) {
    throw OrientationError("tolerance_curve needs an error score, got " + std::string(to_string(score.name())));
  }
  for (std::size_t i = 1; i < tolerances.size(); ++i) {
    if (!(tolerances[i - 1] < tolerances[i])) throw InputOrderError("tolerances must be strictly ascending");
  }
  std::vector<TolerancePoint> curve;
  curve.reserve(tolerances.size());
  for (double rho : tolerances) {
    curve.push_back({rho, detect_limit(score, ToleranceSpec::scalar(rho, Direction::ScoreAtMost))});
  }
  return curve;
}

AggregateLimit limit_of_mean_score(std::span<const ScoreSeries> per_init_scores, Statistic statistic,
                                   LimitKind kind) {
  return limit_of_mean_score(per_init_scores, statistic, ToleranceSpec::scalar(0.0, Direction::ScoreAtLeast), kind);
}

AggregateLimit limit_of_mean_score(std::span<const ScoreSeries> per_init_scores, Statistic statistic,
                                   const ToleranceSpec& tol, LimitKind kind) {
  if (per_init_scores.empty()) throw EmptyInputError("limit_of_mean_score needs at least one series");
  const ScoreSeries& first = per_init_scores.front();
  const std::size_t leads = first.axis().length();
  for (const auto& s : per_init_scores) {
    if (s.axis().length() != leads) throw AxisError("per-init score series differ in length");
    if (s.name() != first.name()) throw ParameterError("per-init score series differ in score name");
  }
  std::vector<MaybeReal> aggregate(leads);
  std::vector<MaybeReal> spread(leads);
  std::vector<double> column;
  for (std::size_t i = 0; i < leads; ++i) {
    column.clear();
    for (const auto& s : per_init_scores) {
      if (const auto& v = s.at(i)) column.push_back(*v);
    }
    if (column.empty()) continue;
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / static_cast<double>(column.size());
    if (statistic == Statistic::Mean) {
      aggregate[i] = mean;
    } else {
      std::sort(column.begin(), column.end());
      aggregate[i] = linear_quantile(column, 0.5);
    }
    if (column.size() >= 2) spread[i] = sample_std(column, mean);
  }
  ScoreSeries series(first.axis(), std::move(aggregate), first.name());
  LimitResult limit = detect_limit(series, tol, kind);
  return {std::move(series), std::move(spread), std::move(limit)};
}

LimitDistribution member_limit_distribution(std::span<const ScoreSeries> per_member_scores,
                                            const ToleranceSpec& tol, LimitKind kind) {
  if (per_member_scores.empty()) throw EmptyInputError("member_limit_distribution needs at least one series");
  std::vector<LimitResult> limits;
  limits.reserve(per_member_scores.size());
  for (const auto& s : per_member_scores) limits.push_back(detect_limit(s, tol, kind));
  return summarize_limits(std::move(limits));
}

}  // namespace horizonkit
