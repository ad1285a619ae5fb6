#include "horizonkit/core.hpp"

#include <cmath>
#include <utility>

namespace horizonkit {

namespace {

void require_finite(std::span<const double> values, const char* context) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError(std::string(context) + ": non-finite value");
  }
}

}  // namespace

TimeAxis::TimeAxis(std::int64_t t0, std::string step, std::size_t length)
    : t0_(t0), step_(std::move(step)), length_(length) {
  if (length_ < 1) throw AxisError("time axis needs at least one lead");
}

std::int64_t TimeAxis::absolute(std::size_t lead) const {
  if (lead < 1 || lead > length_) {
    throw AxisError("lead " + std::to_string(lead) + " outside [1, " + std::to_string(length_) + "]");
  }
  return t0_ + static_cast<std::int64_t>(lead);
}

void require_same_axis(const TimeAxis& a, const TimeAxis& b, const char* context) {
  if (!(a == b)) {
    throw AxisError(std::string(context) + ": axis mismatch (t0 " + std::to_string(a.t0()) + "/" +
                    std::to_string(b.t0()) + ", length " + std::to_string(a.length()) + "/" +
                    std::to_string(b.length()) + ", step '" + a.step() + "'/'" + b.step() + "')");
  }
}

PointForecast::PointForecast(TimeAxis axis, std::vector<double> values)
    : axis_(std::move(axis)), values_(std::move(values)) {
  if (values_.size() != axis_.length()) throw AxisError("point forecast length does not match axis");
  require_finite(values_, "point forecast");
}

EnsembleForecast::EnsembleForecast(TimeAxis axis, std::size_t member_count, std::vector<double> values)
    : axis_(std::move(axis)), member_count_(member_count), values_(std::move(values)) {
  if (member_count_ < 1) throw EmptyInputError("ensemble needs at least one member");
  if (values_.size() != member_count_ * axis_.length()) {
    throw AxisError("ensemble matrix size does not match member_count x axis length");
  }
  require_finite(values_, "ensemble forecast");
}

EnsembleForecast::EnsembleForecast(TimeAxis axis, const std::vector<std::vector<double>>& rows)
    : axis_(std::move(axis)), member_count_(rows.size()) {
  if (member_count_ < 1) throw EmptyInputError("ensemble needs at least one member");
  values_.reserve(member_count_ * axis_.length());
  for (const auto& row : rows) {
    if (row.size() != axis_.length()) throw AxisError("ensemble row length does not match axis");
    values_.insert(values_.end(), row.begin(), row.end());
  }
  require_finite(values_, "ensemble forecast");
}

std::span<const double> EnsembleForecast::member(std::size_t m) const {
  if (m >= member_count_) throw AxisError("member index out of range");
  return std::span<const double>(values_).subspan(m * lead_count(), lead_count());
}

std::vector<double> EnsembleForecast::column(std::size_t index) const {
  std::vector<double> out(member_count_);
  for (std::size_t m = 0; m < member_count_; ++m) out[m] = at(m, index);
  return out;
}

PointForecast EnsembleForecast::mean() const {
  std::vector<double> out(lead_count(), 0.0);
  for (std::size_t m = 0; m < member_count_; ++m) {
    for (std::size_t i = 0; i < lead_count(); ++i) out[i] += at(m, i);
  }
  for (double& v : out) v /= static_cast<double>(member_count_);
  return PointForecast(axis_, std::move(out));
}

VerificationSeries::VerificationSeries(TimeAxis axis, std::vector<MaybeReal> values, VerificationKind kind)
    : axis_(std::move(axis)), values_(std::move(values)), kind_(kind) {
  if (values_.size() != axis_.length()) throw AxisError("verification length does not match axis");
  for (const auto& v : values_) {
    if (v && !std::isfinite(*v)) throw ParameterError("verification: non-finite value");
  }
}

VerificationSeries VerificationSeries::slice(std::size_t first_lead, std::size_t length) const {
  if (first_lead < 1 || length < 1 || first_lead + length - 1 > axis_.length()) {
    throw CoverageError("verification covers leads [1, " + std::to_string(axis_.length()) +
                        "], requested [" + std::to_string(first_lead) + ", " +
                        std::to_string(first_lead + length - 1) + "]");
  }
  std::vector<MaybeReal> part(values_.begin() + static_cast<std::ptrdiff_t>(first_lead - 1),
                              values_.begin() + static_cast<std::ptrdiff_t>(first_lead - 1 + length));
  TimeAxis axis(axis_.t0() + static_cast<std::int64_t>(first_lead) - 1, axis_.step(), length);
  return VerificationSeries(std::move(axis), std::move(part), kind_);
}

ErrorSeries::ErrorSeries(TimeAxis axis, std::vector<MaybeReal> values)
    : axis_(std::move(axis)), values_(std::move(values)) {
  if (values_.size() != axis_.length()) throw AxisError("error series length does not match axis");
}

ErrorSeries point_error(const PointForecast& forecast, const VerificationSeries& verification) {
  require_same_axis(forecast.axis(), verification.axis(), "point_error");
  std::vector<MaybeReal> out(forecast.axis().length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (const auto& y = verification.at(i)) out[i] = forecast.at(i) - *y;
  }
  return ErrorSeries(forecast.axis(), std::move(out));
}

std::vector<ErrorSeries> member_errors(const EnsembleForecast& forecast,
                                       const VerificationSeries& verification) {
  require_same_axis(forecast.axis(), verification.axis(), "member_errors");
  std::vector<ErrorSeries> rows;
  rows.reserve(forecast.member_count());
  for (std::size_t m = 0; m < forecast.member_count(); ++m) {
    std::vector<MaybeReal> out(forecast.lead_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (const auto& y = verification.at(i)) out[i] = forecast.at(m, i) - *y;
    }
    rows.emplace_back(forecast.axis(), std::move(out));
  }
  return rows;
}

}  // namespace horizonkit
