#pragma once

// Step-wise forecast-limit recipe for one initialization time: build the
// forecast, pick the verification window, score against the reference or
// the tolerance, and detect the limit.

#include <cstdint>
#include <optional>
#include <string>

#include "horizonkit/config.hpp"
#include "horizonkit/limits.hpp"
#include "horizonkit/reference.hpp"
#include "horizonkit/scoring.hpp"

namespace horizonkit {

struct CaseResult {
  std::int64_t init_time;
  VerificationSeries verification;
  /// CRPS, MAE or AE of the forecast itself.
  ScoreSeries forecast_score;
  std::optional<ScoreSeries> reference_score;
  /// Series the limit is detected on (skill score, shifted AE, MAE or CRPS).
  ScoreSeries limit_score;
  ToleranceSpec tolerance;
  LimitResult limit;
};

class Experiment {
 public:
  /// Loads or simulates everything shared across initialization times.
  /// `max_init` and `horizon` bound the verification window needed.
  Experiment(ExperimentConfig cfg, std::int64_t max_init, std::size_t horizon);

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const std::optional<VerificationSeries>& verification() const noexcept { return verification_; }
  const std::optional<GaussianClimatology>& climatology() const noexcept { return climatology_; }

  /// Verification value at absolute time t; time 0 of a simulated truth is
  /// the configured initial value.
  double value_at(std::int64_t t) const;

  CaseResult run_case(std::int64_t init_time, std::size_t threads) const;

  std::string unit() const;

 private:
  ExperimentConfig cfg_;
  std::size_t horizon_;
  std::optional<VerificationSeries> verification_;
  std::optional<GaussianClimatology> climatology_;
};

/// Stream reserved for the saturation run so it never coincides with an
/// initialization-time stream.
inline constexpr std::uint64_t kSaturationStream = ~std::uint64_t{0};

}  // namespace horizonkit
