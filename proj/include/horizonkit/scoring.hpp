#pragma once

// Scoring functions evaluated per lead.

#include <span>
#include <string_view>
#include <vector>

#include "horizonkit/core.hpp"

namespace horizonkit {

enum class ScoreName { AE, MAE, CRPS, CRPSS, MAESS, ShiftedAE };

std::string_view to_string(ScoreName name);
ScoreName score_name_from_string(std::string_view text);

/// True for scores where larger is better (skill scores and ShiftedAE).
bool higher_is_better(ScoreName name);

class ScoreSeries {
 public:
  ScoreSeries(TimeAxis axis, std::vector<MaybeReal> values, ScoreName name);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::span<const MaybeReal> values() const noexcept { return values_; }
  const MaybeReal& at(std::size_t index) const { return values_.at(index); }
  ScoreName name() const noexcept { return name_; }

 private:
  TimeAxis axis_;
  std::vector<MaybeReal> values_;
  ScoreName name_;
};

class GaussianDistribution {
 public:
  GaussianDistribution(double mean, double std);

  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }

  friend bool operator==(const GaussianDistribution&, const GaussianDistribution&) = default;

 private:
  double mean_;
  double std_;
};

double standard_normal_cdf(double z);
double standard_normal_pdf(double z);

ScoreSeries absolute_error(const ErrorSeries& err);

/// tolerance - |error|; the forecast is acceptable while this stays >= 0.
ScoreSeries shifted_absolute_error(const ErrorSeries& err, double tolerance);

/// Per-lead mean of |error| over the rows present at that lead.
ScoreSeries mean_absolute_error(std::span<const ErrorSeries> errs);

/// CRPS of the empirical step CDF of `members` against `observation`,
/// via the energy form E|X - y| - E|X - X'| / 2 on sorted members.
double crps_ensemble(std::span<const double> members, double observation);

/// Closed-form CRPS of a Gaussian predictive distribution.
double crps_gaussian(const GaussianDistribution& dist, double observation);

/// Per-lead ensemble CRPS; missing where the verification is missing.
ScoreSeries crps_series(const EnsembleForecast& forecast, const VerificationSeries& verification);

/// 1 - forecast/reference per lead. Both zero gives 1; zero reference
/// with positive forecast raises DegenerateReferenceError.
ScoreSeries crpss(const ScoreSeries& crps_forecast, const ScoreSeries& crps_reference);
ScoreSeries mae_skill_score(const ScoreSeries& mae_forecast, const ScoreSeries& mae_reference);

}  // namespace horizonkit
