#include "horizonkit/pipeline.hpp"

#include <filesystem>

#include "horizonkit/io.hpp"
#include "horizonkit/ricker.hpp"

namespace horizonkit {

namespace {

std::filesystem::path per_init_path(const std::string& path, std::int64_t init_time) {
  const std::filesystem::path p(path);
  if (std::filesystem::is_directory(p)) return p / ("forecast_init" + std::to_string(init_time) + ".csv");
  return p;
}

EnsembleForecast as_ensemble(const VerificationSeries& series) {
  std::vector<double> values;
  values.reserve(series.axis().length());
  for (std::size_t i = 0; i < series.axis().length(); ++i) {
    if (!series.at(i)) throw FormatError("point forecast has a missing value at lead " + std::to_string(i + 1), 0);
    values.push_back(*series.at(i));
  }
  return EnsembleForecast(series.axis(), 1, std::move(values));
}

}  // namespace

Experiment::Experiment(ExperimentConfig cfg, std::int64_t max_init, std::size_t horizon)
    : cfg_(std::move(cfg)), horizon_(horizon) {
  if (cfg_.verification == VerificationSource::Simulate) {
    RickerConfig truth_cfg = cfg_.ricker;
    truth_cfg.t0 = 0;
    truth_cfg.horizon = static_cast<std::size_t>(max_init) + horizon_;
    const auto truth = simulate_truth(truth_cfg, cfg_.effective_truth_seed());
    verification_ = VerificationSeries(truth.axis(),
                                       std::vector<MaybeReal>(truth.values().begin(), truth.values().end()),
                                       cfg_.effective_verification_kind());
  } else if (cfg_.verification == VerificationSource::File) {
    verification_ = read_series_csv(cfg_.verification_path, cfg_.effective_verification_kind(), 0, unit());
  }

  if (cfg_.mode != Mode::Relative) return;
  if (cfg_.reference == ReferenceType::Saturation) {
    RickerConfig sat = cfg_.ricker;
    sat.member_count = cfg_.saturation.members;
    sat.horizon = cfg_.saturation.horizon;
    sat.stream = kSaturationStream;
    sat.t0 = 0;
    climatology_ = climatology_from_saturation(simulate_ensemble(sat, cfg_.threads), cfg_.saturation.burn_in);
  } else if (cfg_.reference == ReferenceType::Climatology) {
    climatology_ = read_climatology_csv(cfg_.reference_path);
  }
}

std::string Experiment::unit() const { return cfg_.forecast == ForecastSource::Ricker ? "generation" : "step"; }

double Experiment::value_at(std::int64_t t) const {
  if (t == 0 && cfg_.verification == VerificationSource::Simulate) return cfg_.ricker.init_value;
  if (!verification_ || t < 1 || static_cast<std::size_t>(t) > verification_->axis().length()) {
    throw CoverageError("no verification value at time " + std::to_string(t));
  }
  const auto& v = verification_->at(static_cast<std::size_t>(t) - 1);
  if (!v) throw CoverageError("verification value at time " + std::to_string(t) + " is missing");
  return *v;
}

CaseResult Experiment::run_case(std::int64_t init_time, std::size_t threads) const {
  const bool relative = cfg_.mode == Mode::Relative;

  // Errors ingested directly: no forecast or verification to build.
  if (cfg_.forecast == ForecastSource::Errors) {
    const auto raw = read_series_csv(per_init_path(cfg_.forecast_path, init_time), VerificationKind::Observed,
                                     init_time, unit());
    const ErrorSeries errors(raw.axis(), std::vector<MaybeReal>(raw.values().begin(), raw.values().end()));
    auto ae = absolute_error(errors);
    auto shifted = shifted_absolute_error(errors, *cfg_.tolerance);
    auto tol = ToleranceSpec::scalar(0.0, Direction::ScoreAtLeast);
    auto limit = detect_limit(shifted, tol, LimitKind::Absolute);
    return {init_time, raw, std::move(ae), std::nullopt, std::move(shifted), std::move(tol), std::move(limit)};
  }

  std::optional<EnsembleForecast> ensemble;
  if (cfg_.forecast == ForecastSource::Ricker) {
    RickerConfig rc = cfg_.ricker;
    rc.init_value = value_at(init_time);
    rc.t0 = init_time;
    rc.stream = static_cast<std::uint64_t>(init_time);
    rc.horizon = horizon_;
    ensemble = simulate_ensemble(rc, threads);
  } else if (cfg_.forecast == ForecastSource::Ensemble) {
    ensemble = read_ensemble_csv(per_init_path(cfg_.forecast_path, init_time), init_time, unit());
  } else {
    ensemble = as_ensemble(read_series_csv(per_init_path(cfg_.forecast_path, init_time), VerificationKind::Observed,
                                           init_time, unit()));
  }

  const std::size_t leads = ensemble->lead_count();
  if (init_time < 0) throw CoverageError("initialization time must be >= 0");
  auto verification = verification_->slice(static_cast<std::size_t>(init_time) + 1, leads);
  const VerificationKind vkind = verification.kind();
  const LimitKind kind = limit_kind_for(vkind, relative);

  if (relative) {
    ReferenceModel ref = [&]() -> ReferenceModel {
      if (climatology_) return *climatology_;
      return Persistence{value_at(init_time)};
    }();
    if (cfg_.score == ScoreName::MAESS) {
      auto forecast = mean_absolute_error(member_errors(*ensemble, verification));
      auto reference = reference_mae(ref, verification);
      auto skill = mae_skill_score(forecast, reference);
      auto limit = relative_limit(forecast, reference, kind);
      auto tol = limit.tolerance;
      return {init_time, std::move(verification), std::move(forecast), std::move(reference), std::move(skill),
              std::move(tol), std::move(limit)};
    }
    auto forecast = crps_series(*ensemble, verification);
    auto reference = reference_crps(ref, verification);
    auto skill = crpss(forecast, reference);
    auto limit = relative_limit(forecast, reference, kind);
    auto tol = limit.tolerance;
    return {init_time, std::move(verification), std::move(forecast), std::move(reference), std::move(skill),
            std::move(tol), std::move(limit)};
  }

  const double rho = *cfg_.tolerance;
  if (cfg_.score == ScoreName::AE) {
    const auto errors = point_error(ensemble->mean(), verification);
    auto ae = absolute_error(errors);
    auto shifted = shifted_absolute_error(errors, rho);
    auto tol = ToleranceSpec::scalar(0.0, Direction::ScoreAtLeast);
    auto limit = detect_limit(shifted, tol, kind);
    return {init_time, std::move(verification), std::move(ae), std::nullopt, std::move(shifted), std::move(tol),
            std::move(limit)};
  }
  auto score = cfg_.score == ScoreName::MAE ? mean_absolute_error(member_errors(*ensemble, verification))
                                            : crps_series(*ensemble, verification);
  auto tol = ToleranceSpec::scalar(rho, Direction::ScoreAtMost);
  auto limit = detect_limit(score, tol, kind);
  ScoreSeries limit_score = score;
  return {init_time, std::move(verification), std::move(score), std::nullopt, std::move(limit_score),
          std::move(tol), std::move(limit)};
}

}  // namespace horizonkit
