#include "horizonkit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace horizonkit {

namespace {

struct SampleStats {
  double mean;
  double std;
};

SampleStats sample_stats(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

std::size_t position_of(std::int64_t t, std::size_t cycle) {
  const auto c = static_cast<std::int64_t>(cycle);
  return static_cast<std::size_t>(((t % c) + c) % c);
}

void require_coverage(const TimeAxis& ref_axis, const TimeAxis& verification_axis, const char* what) {
  if (!(ref_axis == verification_axis)) {
    throw CoverageError(std::string(what) + " does not cover the verification axis");
  }
}

}  // namespace

GaussianClimatology::GaussianClimatology(std::vector<GaussianDistribution> positions)
    : positions_(std::move(positions)) {
  if (positions_.empty()) throw CoverageError("climatology needs at least one cycle position");
}

const GaussianDistribution& GaussianClimatology::at_time(std::int64_t absolute_time) const {
  return positions_[position_of(absolute_time, positions_.size())];
}

ReferenceModel make_saturated_ensemble(EnsembleForecast runs) {
  if (runs.member_count() < 2) throw ParameterError("saturated ensemble needs at least two members");
  return SaturatedEnsemble{std::move(runs)};
}

GaussianClimatology climatology_from_history(const VerificationSeries& history, std::size_t cycle_length) {
  if (cycle_length < 1) throw ParameterError("cycle_length must be >= 1");
  std::vector<std::vector<double>> samples(cycle_length);
  for (std::size_t lead = 1; lead <= history.axis().length(); ++lead) {
    if (const auto& v = history.at(lead - 1)) {
      samples[position_of(history.axis().absolute(lead), cycle_length)].push_back(*v);
    }
  }
  std::vector<GaussianDistribution> positions;
  positions.reserve(cycle_length);
  for (std::size_t p = 0; p < cycle_length; ++p) {
    if (samples[p].size() < 2) {
      throw InsufficientHistoryError("cycle position " + std::to_string(p) + " has " +
                                     std::to_string(samples[p].size()) + " samples, need >= 2");
    }
    // Sorted so the statistics do not depend on sample order.
    std::sort(samples[p].begin(), samples[p].end());
    const auto stats = sample_stats(samples[p]);
    if (!(stats.std > 0.0)) {
      throw DegenerateHistoryError("cycle position " + std::to_string(p) + " has zero variance");
    }
    positions.emplace_back(stats.mean, stats.std);
  }
  return GaussianClimatology(std::move(positions));
}

GaussianClimatology climatology_from_saturation(const EnsembleForecast& model_runs, std::size_t burn_in) {
  const std::size_t leads = model_runs.lead_count();
  if (burn_in >= leads) {
    throw BurnInError("burn_in " + std::to_string(burn_in) + " leaves no leads of " + std::to_string(leads));
  }
  if (model_runs.member_count() < 2) throw ParameterError("saturation needs at least two members");
  std::vector<double> block;
  block.reserve(model_runs.member_count() * (leads - burn_in));
  for (std::size_t m = 0; m < model_runs.member_count(); ++m) {
    auto row = model_runs.member(m);
    block.insert(block.end(), row.begin() + static_cast<std::ptrdiff_t>(burn_in), row.end());
  }
  const auto stats = sample_stats(block);
  if (!(stats.std > 0.0)) throw DegenerateHistoryError("saturated ensemble has zero variance");
  return GaussianClimatology({GaussianDistribution(stats.mean, stats.std)});
}

PointForecast persistence_forecast(double anchor, const TimeAxis& axis) {
  if (!std::isfinite(anchor)) throw ParameterError("persistence anchor must be finite");
  return PointForecast(axis, std::vector<double>(axis.length(), anchor));
}

ScoreSeries reference_crps(const ReferenceModel& ref, const VerificationSeries& verification) {
  const TimeAxis& axis = verification.axis();
  std::vector<MaybeReal> out(axis.length());
  auto each_lead = [&](auto&& score_at) {
    for (std::size_t lead = 1; lead <= axis.length(); ++lead) {
      if (const auto& y = verification.at(lead - 1)) out[lead - 1] = score_at(lead, *y);
    }
  };

  if (const auto* clim = std::get_if<GaussianClimatology>(&ref)) {
    each_lead([&](std::size_t lead, double y) { return crps_gaussian(clim->at_time(axis.absolute(lead)), y); });
  } else if (const auto* sat = std::get_if<SaturatedEnsemble>(&ref)) {
    require_coverage(sat->runs.axis(), axis, "saturated ensemble");
    each_lead([&](std::size_t lead, double y) { return crps_ensemble(sat->runs.column(lead - 1), y); });
  } else if (const auto* pers = std::get_if<Persistence>(&ref)) {
    each_lead([&](std::size_t, double y) { return std::abs(pers->anchor - y); });
  } else {
    const auto& ext = std::get<ExternalScores>(ref);
    require_coverage(ext.scores.axis(), axis, "external scores");
    return ext.scores;
  }
  return ScoreSeries(axis, std::move(out), ScoreName::CRPS);
}

ScoreSeries reference_mae(const ReferenceModel& ref, const VerificationSeries& verification) {
  const TimeAxis& axis = verification.axis();
  if (const auto* sat = std::get_if<SaturatedEnsemble>(&ref)) {
    require_coverage(sat->runs.axis(), axis, "saturated ensemble");
    const auto errs = member_errors(sat->runs, verification);
    return mean_absolute_error(errs);
  }
  if (const auto* ext = std::get_if<ExternalScores>(&ref)) {
    require_coverage(ext->scores.axis(), axis, "external scores");
    return ext->scores;
  }
  std::vector<MaybeReal> out(axis.length());
  for (std::size_t lead = 1; lead <= axis.length(); ++lead) {
    const auto& y = verification.at(lead - 1);
    if (!y) continue;
    if (const auto* clim = std::get_if<GaussianClimatology>(&ref)) {
      out[lead - 1] = std::abs(clim->at_time(axis.absolute(lead)).mean() - *y);
    } else {
      out[lead - 1] = std::abs(std::get<Persistence>(ref).anchor - *y);
    }
  }
  return ScoreSeries(axis, std::move(out), ScoreName::MAE);
}

}  // namespace horizonkit
