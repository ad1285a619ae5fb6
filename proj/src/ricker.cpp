#include "horizonkit/ricker.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <string>

#include "horizonkit/parallel.hpp"

namespace horizonkit {

namespace {

constexpr std::uint64_t kMemberDomain = 0x6d656d626572ULL;  // "member"
constexpr std::uint64_t kTruthDomain = 0x7472757468ULL;     // "truth"

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Positive draw from N(mean, sd^2), resampling non-positive values.
double positive_normal(std::mt19937_64& rng, double mean, double sd) {
  if (sd == 0.0) return mean;
  std::normal_distribution<double> dist(mean, sd);
  for (;;) {
    const double v = dist(rng);
    if (v > 0.0) return v;
  }
}

double draw(std::mt19937_64& rng, double mean, double sd) {
  if (sd == 0.0) return mean;
  return std::normal_distribution<double>(mean, sd)(rng);
}

std::vector<double> trajectory(const RickerConfig& cfg, std::mt19937_64& rng, double y0, double noise_sd,
                               std::size_t& floored) {
  const double alpha_sd = cfg.param_cv * std::abs(cfg.alpha_mean);
  const double k_sd = cfg.param_cv * cfg.k_mean;
  std::vector<double> out(cfg.horizon);
  double y = y0;
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    const double alpha = draw(rng, cfg.alpha_mean, alpha_sd);
    const double k = positive_normal(rng, cfg.k_mean, k_sd);
    y = ricker_step(y, alpha, k);
    if (noise_sd > 0.0) {
      y += draw(rng, 0.0, noise_sd);
      if (y < 0.0) {
        y = 0.0;
        ++floored;
      }
    }
    out[t] = y;
  }
  return out;
}

TimeAxis axis_of(const RickerConfig& cfg) { return TimeAxis(cfg.t0, "generation", cfg.horizon); }

}  // namespace

void RickerConfig::validate() const {
  auto fail = [](const std::string& what) { throw ParameterError("ricker: " + what); };
  if (!std::isfinite(alpha_mean)) fail("alpha must be finite");
  if (!(k_mean > 0.0) || !std::isfinite(k_mean)) fail("k must be > 0");
  if (!(param_cv >= 0.0) || !(init_cv >= 0.0)) fail("coefficients of variation must be >= 0");
  if (!(init_value >= 0.0) || !std::isfinite(init_value)) fail("initial value must be finite and >= 0");
  if (!(process_noise_sd >= 0.0)) fail("process noise sd must be >= 0");
  if (member_count < 1) fail("member count must be >= 1");
  if (horizon < 1) fail("horizon must be >= 1");
}

RickerConfig RickerConfig::main_experiment() { return RickerConfig{}; }

RickerConfig RickerConfig::supplementary() {
  RickerConfig cfg;
  cfg.alpha_mean = 0.1;
  cfg.k_mean = 2.0;
  cfg.param_cv = 0.1;
  cfg.init_value = 1.01;
  cfg.init_cv = 0.001 / 1.01;
  cfg.member_count = 500;
  return cfg;
}

double ricker_step(double y, double alpha, double k) {
  if (!(k > 0.0)) throw ParameterError("ricker_step: carrying capacity must be > 0");
  if (y < 0.0) throw ParameterError("ricker_step: state must be >= 0");
  return y * std::exp(alpha * (1.0 - y / k));
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ domain);
  h = splitmix64(h ^ stream);
  return splitmix64(h ^ index);
}

std::vector<double> simulate_member(const RickerConfig& cfg, std::size_t member, SimulationReport* report) {
  cfg.validate();
  std::mt19937_64 rng(derive_stream_seed(cfg.seed, kMemberDomain, cfg.stream, member));
  const double y0 = positive_normal(rng, cfg.init_value, cfg.init_cv * cfg.init_value);
  std::size_t floored = 0;
  auto out = trajectory(cfg, rng, y0, cfg.process_noise_sd, floored);
  if (report) report->floored_states += floored;
  return out;
}

EnsembleForecast simulate_ensemble(const RickerConfig& cfg, std::size_t threads, SimulationReport* report) {
  cfg.validate();
  std::vector<double> values(cfg.member_count * cfg.horizon);
  std::atomic<std::size_t> floored{0};
  parallel_for(cfg.member_count, threads, [&](std::size_t m) {
    SimulationReport local;
    const auto row = simulate_member(cfg, m, &local);
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(m * cfg.horizon));
    floored += local.floored_states;
  });
  if (report) report->floored_states += floored.load();
  return EnsembleForecast(axis_of(cfg), cfg.member_count, std::move(values));
}

VerificationSeries simulate_truth(const RickerConfig& cfg, std::uint64_t truth_seed) {
  cfg.validate();
  std::mt19937_64 rng(derive_stream_seed(truth_seed, kTruthDomain, 0, 0));
  std::size_t floored = 0;
  const auto path = trajectory(cfg, rng, cfg.init_value, 0.0, floored);
  return VerificationSeries(axis_of(cfg), std::vector<MaybeReal>(path.begin(), path.end()),
                            VerificationKind::Simulated);
}

}  // namespace horizonkit
