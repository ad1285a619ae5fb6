#pragma once

// Reference models used as the benchmark for relative and potential
// limits.

#include <cstdint>
#include <variant>
#include <vector>

#include "horizonkit/core.hpp"
#include "horizonkit/scoring.hpp"

namespace horizonkit {

/// Gaussian per position of a repeating cycle. Absolute time `t` uses
/// position `t mod cycle_length`; a cycle length of 1 is a constant
/// climatology.
class GaussianClimatology {
 public:
  explicit GaussianClimatology(std::vector<GaussianDistribution> positions);

  std::size_t cycle_length() const noexcept { return positions_.size(); }
  std::span<const GaussianDistribution> positions() const noexcept { return positions_; }
  const GaussianDistribution& at_time(std::int64_t absolute_time) const;

 private:
  std::vector<GaussianDistribution> positions_;
};

struct SaturatedEnsemble {
  EnsembleForecast runs;
};

struct Persistence {
  double anchor;
};

struct ExternalScores {
  ScoreSeries scores;
};

using ReferenceModel = std::variant<GaussianClimatology, SaturatedEnsemble, Persistence, ExternalScores>;

/// Builds a SaturatedEnsemble reference, rejecting ensembles with fewer
/// than two members.
ReferenceModel make_saturated_ensemble(EnsembleForecast runs);

/// Sample mean and Bessel-corrected std per cycle position of `history`,
/// where a value at absolute time t belongs to position t mod cycle_length.
GaussianClimatology climatology_from_history(const VerificationSeries& history, std::size_t cycle_length);

/// Single Gaussian from every member value at leads after `burn_in`.
GaussianClimatology climatology_from_saturation(const EnsembleForecast& model_runs, std::size_t burn_in);

PointForecast persistence_forecast(double anchor, const TimeAxis& axis);

/// Per-lead CRPS of the reference against the verification. Persistence is
/// a point forecast, for which CRPS reduces to the absolute error.
ScoreSeries reference_crps(const ReferenceModel& ref, const VerificationSeries& verification);

/// Per-lead MAE of the reference: |mean - y| for a climatology, member MAE
/// for a saturated ensemble, |anchor - y| for persistence.
ScoreSeries reference_mae(const ReferenceModel& ref, const VerificationSeries& verification);

}  // namespace horizonkit
