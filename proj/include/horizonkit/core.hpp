#pragma once

// Lead-indexed data model shared by every other module.
//
// Leads are 1-based: lead `tau` of an axis maps to absolute time
// `t0 + tau`. Containers store lead `tau` at index `tau - 1`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "horizonkit/errors.hpp"

namespace horizonkit {

using MaybeReal = std::optional<double>;

class TimeAxis {
 public:
  TimeAxis(std::int64_t t0, std::string step, std::size_t length);

  std::int64_t t0() const noexcept { return t0_; }
  const std::string& step() const noexcept { return step_; }
  std::size_t length() const noexcept { return length_; }

  /// Absolute time of a 1-based lead.
  std::int64_t absolute(std::size_t lead) const;

  /// Same unit label and length, starting at a different initial time.
  TimeAxis with_t0(std::int64_t t0) const { return TimeAxis(t0, step_, length_); }

  friend bool operator==(const TimeAxis&, const TimeAxis&) = default;

 private:
  std::int64_t t0_;
  std::string step_;
  std::size_t length_;
};

/// Throws AxisError unless both axes are identical.
void require_same_axis(const TimeAxis& a, const TimeAxis& b, const char* context);

class PointForecast {
 public:
  PointForecast(TimeAxis axis, std::vector<double> values);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t index) const { return values_.at(index); }

 private:
  TimeAxis axis_;
  std::vector<double> values_;
};

/// Member x lead matrix, row-major.
class EnsembleForecast {
 public:
  EnsembleForecast(TimeAxis axis, std::size_t member_count, std::vector<double> values);
  EnsembleForecast(TimeAxis axis, const std::vector<std::vector<double>>& rows);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::size_t member_count() const noexcept { return member_count_; }
  std::size_t lead_count() const noexcept { return axis_.length(); }

  std::span<const double> member(std::size_t m) const;
  double at(std::size_t m, std::size_t index) const { return values_[m * lead_count() + index]; }

  /// All member values at one lead (index = lead - 1).
  std::vector<double> column(std::size_t index) const;
  PointForecast mean() const;

  std::span<const double> flat() const noexcept { return values_; }

 private:
  TimeAxis axis_;
  std::size_t member_count_;
  std::vector<double> values_;
};

enum class VerificationKind { Observed, Simulated };

class VerificationSeries {
 public:
  VerificationSeries(TimeAxis axis, std::vector<MaybeReal> values,
                     VerificationKind kind = VerificationKind::Observed);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::span<const MaybeReal> values() const noexcept { return values_; }
  const MaybeReal& at(std::size_t index) const { return values_.at(index); }
  VerificationKind kind() const noexcept { return kind_; }

  /// Leads [first_lead, first_lead + length) re-anchored so that the new
  /// axis starts at the absolute time preceding `first_lead`.
  VerificationSeries slice(std::size_t first_lead, std::size_t length) const;

 private:
  TimeAxis axis_;
  std::vector<MaybeReal> values_;
  VerificationKind kind_;
};

class ErrorSeries {
 public:
  ErrorSeries(TimeAxis axis, std::vector<MaybeReal> values);

  const TimeAxis& axis() const noexcept { return axis_; }
  std::span<const MaybeReal> values() const noexcept { return values_; }
  const MaybeReal& at(std::size_t index) const { return values_.at(index); }

 private:
  TimeAxis axis_;
  std::vector<MaybeReal> values_;
};

/// Predictive error: forecast minus verification. Missing verification
/// stays missing.
ErrorSeries point_error(const PointForecast& forecast, const VerificationSeries& verification);

/// One ErrorSeries per ensemble member.
std::vector<ErrorSeries> member_errors(const EnsembleForecast& forecast,
                                       const VerificationSeries& verification);

}  // namespace horizonkit
