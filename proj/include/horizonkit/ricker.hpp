#pragma once

// Stochastic Ricker ensemble simulator. Growth rate and carrying capacity
// are redrawn from Gaussians at every step; the initial state is perturbed
// once per member.

#include <cstddef>
#include <cstdint>

#include "horizonkit/core.hpp"

namespace horizonkit {

struct RickerConfig {
  double alpha_mean = 0.06;
  double k_mean = 1.0;
  double param_cv = 0.03;
  double init_value = 0.992;
  double init_cv = 0.001;
  std::size_t member_count = 1000;
  std::size_t horizon = 25;
  std::uint64_t seed = 1;
  double process_noise_sd = 0.0;
  /// Initial absolute time of the forecast axis.
  std::int64_t t0 = 0;
  /// Selects an independent family of member streams under the same seed,
  /// e.g. one per initialization time.
  std::uint64_t stream = 0;

  /// Throws ParameterError on invalid fields.
  void validate() const;

  /// Main single-species experiment: k = 1, CV 0.03 on parameters and 0.001
  /// on the initial state, 1000 members over 25 generations.
  static RickerConfig main_experiment();
  /// Supplementary parameterisation: r ~ N(0.1, 0.01), k ~ N(2, 0.2),
  /// y0 = 1 + N(0.01, 0.001), 500 members.
  static RickerConfig supplementary();
};

struct SimulationReport {
  /// Number of states floored at 0 after additive process noise.
  std::size_t floored_states = 0;
};

/// y * exp(alpha * (1 - y / k)).
double ricker_step(double y, double alpha, double k);

/// Seed of the random stream for (master seed, domain, stream, index).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t stream,
                                 std::uint64_t index);

/// One trajectory for member `member` of `cfg`; identical to the matching
/// row of simulate_ensemble.
std::vector<double> simulate_member(const RickerConfig& cfg, std::size_t member, SimulationReport* report = nullptr);

EnsembleForecast simulate_ensemble(const RickerConfig& cfg, std::size_t threads = 1,
                                   SimulationReport* report = nullptr);

/// Verification trajectory from the unperturbed initial value, on a stream
/// disjoint from every member stream, without process noise.
VerificationSeries simulate_truth(const RickerConfig& cfg, std::uint64_t truth_seed);

}  // namespace horizonkit
