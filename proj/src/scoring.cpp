#include "horizonkit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace horizonkit {

namespace {

bool is_error_score(ScoreName name) {
  return name == ScoreName::AE || name == ScoreName::MAE || name == ScoreName::CRPS;
}

ScoreSeries skill_score(const ScoreSeries& forecast, const ScoreSeries& reference, ScoreName out_name,
                        const char* context) {
  require_same_axis(forecast.axis(), reference.axis(), context);
  if (higher_is_better(forecast.name()) || higher_is_better(reference.name())) {
    throw OrientationError(std::string(context) + ": inputs must be error scores (smaller is better)");
  }
  std::vector<MaybeReal> out(forecast.axis().length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& f = forecast.at(i);
    const auto& r = reference.at(i);
    if (!f || !r) continue;
    if (*r == 0.0) {
      if (*f == 0.0) {
        out[i] = 1.0;
        continue;
      }
      throw DegenerateReferenceError(std::string(context) + ": reference score is zero at lead " +
                                     std::to_string(i + 1));
    }
    out[i] = 1.0 - *f / *r;
  }
  return ScoreSeries(forecast.axis(), std::move(out), out_name);
}

}  // namespace

std::string_view to_string(ScoreName name) {
  switch (name) {
    case ScoreName::AE: return "ae";
    case ScoreName::MAE: return "mae";
    case ScoreName::CRPS: return "crps";
    case ScoreName::CRPSS: return "crpss";
    case ScoreName::MAESS: return "maess";
    case ScoreName::ShiftedAE: return "shifted_ae";
  }
  return "unknown";
}

ScoreName score_name_from_string(std::string_view text) {
  for (auto name : {ScoreName::AE, ScoreName::MAE, ScoreName::CRPS, ScoreName::CRPSS, ScoreName::MAESS,
                    ScoreName::ShiftedAE}) {
    if (to_string(name) == text) return name;
  }
  throw ParameterError("unknown score name '" + std::string(text) + "'");
}

bool higher_is_better(ScoreName name) { return !is_error_score(name); }

ScoreSeries::ScoreSeries(TimeAxis axis, std::vector<MaybeReal> values, ScoreName name)
    : axis_(std::move(axis)), values_(std::move(values)), name_(name) {
  if (values_.size() != axis_.length()) throw AxisError("score series length does not match axis");
  for (const auto& v : values_) {
    if (!v) continue;
    if (std::isnan(*v)) throw ParameterError("score series: NaN value");
    if (is_error_score(name_) && *v < 0.0) {
      throw ParameterError(std::string(to_string(name_)) + " values must be non-negative");
    }
    if ((name_ == ScoreName::CRPSS || name_ == ScoreName::MAESS) && *v > 1.0) {
      throw ParameterError(std::string(to_string(name_)) + " values must not exceed 1");
    }
  }
}

GaussianDistribution::GaussianDistribution(double mean, double std) : mean_(mean), std_(std) {
  if (!std::isfinite(mean) || !std::isfinite(std) || !(std > 0.0)) {
    throw DistributionError("Gaussian needs finite mean and std > 0 (got std " + std::to_string(std) + ")");
  }
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

ScoreSeries absolute_error(const ErrorSeries& err) {
  std::vector<MaybeReal> out(err.axis().length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (const auto& e = err.at(i)) out[i] = std::abs(*e);
  }
  return ScoreSeries(err.axis(), std::move(out), ScoreName::AE);
}

ScoreSeries shifted_absolute_error(const ErrorSeries& err, double tolerance) {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw ToleranceError("tolerance must be finite and >= 0");
  }
  std::vector<MaybeReal> out(err.axis().length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (const auto& e = err.at(i)) out[i] = tolerance - std::abs(*e);
  }
  return ScoreSeries(err.axis(), std::move(out), ScoreName::ShiftedAE);
}

ScoreSeries mean_absolute_error(std::span<const ErrorSeries> errs) {
  if (errs.empty()) throw EmptyInputError("mean_absolute_error needs at least one error series");
  const TimeAxis& axis = errs.front().axis();
  std::vector<double> sum(axis.length(), 0.0);
  std::vector<std::size_t> count(axis.length(), 0);
  for (const auto& row : errs) {
    require_same_axis(axis, row.axis(), "mean_absolute_error");
    for (std::size_t i = 0; i < sum.size(); ++i) {
      if (const auto& e = row.at(i)) {
        sum[i] += std::abs(*e);
        ++count[i];
      }
    }
  }
  std::vector<MaybeReal> out(axis.length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (count[i] > 0) out[i] = sum[i] / static_cast<double>(count[i]);
  }
  return ScoreSeries(axis, std::move(out), ScoreName::MAE);
}

double crps_ensemble(std::span<const double> members, double observation) {
  if (members.empty()) throw EmptyInputError("crps_ensemble needs at least one member");
  std::vector<double> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<double>(sorted.size());
  double abs_sum = 0.0;
  double spread_sum = 0.0;
  // sum_{i,j} |x_i - x_j| = 2 sum_i (2i - M - 1) x_(i) for 1-based sorted i.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    abs_sum += std::abs(sorted[i] - observation);
    spread_sum += (2.0 * static_cast<double>(i + 1) - m - 1.0) * sorted[i];
  }
  const double crps = abs_sum / m - spread_sum / (m * m);
  return std::max(crps, 0.0);
}

double crps_gaussian(const GaussianDistribution& dist, double observation) {
  const double z = (observation - dist.mean()) / dist.std();
  return dist.std() *
         (z * (2.0 * standard_normal_cdf(z) - 1.0) + 2.0 * standard_normal_pdf(z) - 1.0 / std::sqrt(std::numbers::pi));
}

ScoreSeries crps_series(const EnsembleForecast& forecast, const VerificationSeries& verification) {
  require_same_axis(forecast.axis(), verification.axis(), "crps_series");
  std::vector<MaybeReal> out(forecast.lead_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (const auto& y = verification.at(i)) out[i] = crps_ensemble(forecast.column(i), *y);
  }
  return ScoreSeries(forecast.axis(), std::move(out), ScoreName::CRPS);
}

ScoreSeries crpss(const ScoreSeries& crps_forecast, const ScoreSeries& crps_reference) {
  return skill_score(crps_forecast, crps_reference, ScoreName::CRPSS, "crpss");
}

ScoreSeries mae_skill_score(const ScoreSeries& mae_forecast, const ScoreSeries& mae_reference) {
  return skill_score(mae_forecast, mae_reference, ScoreName::MAESS, "mae_skill_score");
}

}  // namespace horizonkit
