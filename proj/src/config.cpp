#include "horizonkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "horizonkit/io.hpp"

namespace horizonkit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& text, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& text, const std::string& key) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

template <typename Enum>
Enum to_enum(const std::string& text, const std::string& key, const std::map<std::string, Enum>& choices) {
  const auto it = choices.find(text);
  if (it != choices.end()) return it->second;
  std::string allowed;
  for (const auto& [name, value] : choices) allowed += (allowed.empty() ? "" : "|") + name;
  throw ConfigError(key, "expected one of " + allowed + ", got '" + text + "'");
}

const std::map<std::string, Mode> kModes{{"relative", Mode::Relative}, {"absolute", Mode::Absolute},
                                        {"grouped", Mode::Grouped}};
const std::map<std::string, ForecastSource> kForecasts{{"ricker", ForecastSource::Ricker},
                                                      {"ensemble", ForecastSource::Ensemble},
                                                      {"point", ForecastSource::Point},
                                                      {"errors", ForecastSource::Errors}};
const std::map<std::string, VerificationSource> kVerifications{{"simulate", VerificationSource::Simulate},
                                                              {"file", VerificationSource::File},
                                                              {"none", VerificationSource::None}};
const std::map<std::string, VerificationKind> kKinds{{"observed", VerificationKind::Observed},
                                                     {"simulated", VerificationKind::Simulated}};
const std::map<std::string, ReferenceType> kReferences{{"saturation", ReferenceType::Saturation},
                                                      {"persistence", ReferenceType::Persistence},
                                                      {"climatology", ReferenceType::Climatology},
                                                      {"none", ReferenceType::None}};
const std::map<std::string, Aggregation> kAggregations{
    {"mean", Aggregation::Mean}, {"median", Aggregation::Median}, {"both", Aggregation::Both}};

template <typename Enum>
std::string name_of(Enum value, const std::map<std::string, Enum>& choices) {
  for (const auto& [name, v] : choices) {
    if (v == value) return name;
  }
  return "?";
}

ScoreName to_score(const std::string& text, const std::string& key) {
  if (text == "shifted_ae") throw ConfigError(key, "shifted_ae is derived from ae; use score = ae");
  try {
    return score_name_from_string(text);
  } catch (const ParameterError&) {
    throw ConfigError(key, "expected ae|mae|crps|crpss|maess, got '" + text + "'");
  }
}

}  // namespace

ConfigEntries parse_config_entries(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw);
    if (content.empty() || content.front() == '#' || content.front() == ';') continue;
    const std::string where = "line " + std::to_string(line);
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(where, "unterminated section header");
      section = trim(content.substr(1, content.size() - 2));
      if (section.empty()) throw ConfigError(where, "empty section name");
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (section.empty()) throw ConfigError(key, "key outside of any [section]");
    const std::string full = section + "." + key;
    if (!entries.emplace(full, value).second) throw ConfigError(full, "duplicate key");
  }
  return entries;
}

std::vector<std::int64_t> parse_index_list(const std::string& text, const std::string& key) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty list item");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int<std::int64_t>(item, key));
      continue;
    }
    const auto lo = to_int<std::int64_t>(trim(item.substr(0, dots)), key);
    const auto hi = to_int<std::int64_t>(trim(item.substr(dots + 2)), key);
    if (hi < lo) throw ConfigError(key, "descending range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (std::count(t.begin(), t.end(), ':') == 2) {
    const auto a = t.find(':');
    const auto b = t.find(':', a + 1);
    const double start = to_real(trim(t.substr(0, a)), key);
    const double stop = to_real(trim(t.substr(a + 1, b - a - 1)), key);
    const auto count = to_int<std::size_t>(trim(t.substr(b + 1)), key);
    if (count < 2) throw ConfigError(key, "grid needs at least two points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
  }
  std::vector<double> out;
  std::istringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_real(trim(item), key));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  const ConfigEntries entries = parse_config_entries(text);
  ExperimentConfig cfg;

  // The preset is applied first so explicit [ricker] keys override it.
  if (const auto it = entries.find("ricker.preset"); it != entries.end()) {
    if (it->second == "main") {
      cfg.ricker = RickerConfig::main_experiment();
    } else if (it->second == "supplementary") {
      cfg.ricker = RickerConfig::supplementary();
    } else {
      throw ConfigError(it->first, "expected main|supplementary, got '" + it->second + "'");
    }
  }

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"experiment.mode", [&](auto& k, auto& v) { cfg.mode = to_enum(v, k, kModes); }},
      {"experiment.score", [&](auto& k, auto& v) { cfg.score = to_score(v, k); }},
      {"experiment.tolerance", [&](auto& k, auto& v) { cfg.tolerance = to_real(v, k); }},
      {"experiment.output", [&](auto&, auto& v) { cfg.output_dir = v; }},
      {"experiment.threads", [&](auto& k, auto& v) { cfg.threads = to_int<std::size_t>(v, k); }},
      {"experiment.init_time", [&](auto& k, auto& v) { cfg.init_time = to_int<std::int64_t>(v, k); }},
      {"forecast.source", [&](auto& k, auto& v) { cfg.forecast = to_enum(v, k, kForecasts); }},
      {"forecast.path", [&](auto&, auto& v) { cfg.forecast_path = v; }},
      {"verification.source", [&](auto& k, auto& v) { cfg.verification = to_enum(v, k, kVerifications); }},
      {"verification.path", [&](auto&, auto& v) { cfg.verification_path = v; }},
      {"verification.kind", [&](auto& k, auto& v) { cfg.verification_kind = to_enum(v, k, kKinds); }},
      {"verification.truth_seed", [&](auto& k, auto& v) { cfg.truth_seed = to_int<std::uint64_t>(v, k); }},
      {"reference.type", [&](auto& k, auto& v) { cfg.reference = to_enum(v, k, kReferences); }},
      {"reference.path", [&](auto&, auto& v) { cfg.reference_path = v; }},
      {"reference.burn_in", [&](auto& k, auto& v) { cfg.saturation.burn_in = to_int<std::size_t>(v, k); }},
      {"reference.members", [&](auto& k, auto& v) { cfg.saturation.members = to_int<std::size_t>(v, k); }},
      {"reference.horizon", [&](auto& k, auto& v) { cfg.saturation.horizon = to_int<std::size_t>(v, k); }},
      {"ricker.preset", [](auto&, auto&) {}},
      {"ricker.alpha", [&](auto& k, auto& v) { cfg.ricker.alpha_mean = to_real(v, k); }},
      {"ricker.k", [&](auto& k, auto& v) { cfg.ricker.k_mean = to_real(v, k); }},
      {"ricker.param_cv", [&](auto& k, auto& v) { cfg.ricker.param_cv = to_real(v, k); }},
      {"ricker.init_value", [&](auto& k, auto& v) { cfg.ricker.init_value = to_real(v, k); }},
      {"ricker.init_cv", [&](auto& k, auto& v) { cfg.ricker.init_cv = to_real(v, k); }},
      {"ricker.members", [&](auto& k, auto& v) { cfg.ricker.member_count = to_int<std::size_t>(v, k); }},
      {"ricker.horizon", [&](auto& k, auto& v) { cfg.ricker.horizon = to_int<std::size_t>(v, k); }},
      {"ricker.seed", [&](auto& k, auto& v) { cfg.ricker.seed = to_int<std::uint64_t>(v, k); }},
      {"ricker.process_noise_sd", [&](auto& k, auto& v) { cfg.ricker.process_noise_sd = to_real(v, k); }},
      {"sweep.init_times", [&](auto& k, auto& v) { cfg.sweep.init_times = parse_index_list(v, k); }},
      {"sweep.horizon", [&](auto& k, auto& v) { cfg.sweep.horizon = to_int<std::size_t>(v, k); }},
      {"sweep.aggregation", [&](auto& k, auto& v) { cfg.sweep.aggregation = to_enum(v, k, kAggregations); }},
      {"grouped.path", [&](auto&, auto& v) { cfg.grouped_path = v; }},
      {"tolerance_curve.rho", [&](auto& k, auto& v) { cfg.rho = parse_real_list(v, k); }},
  };

  for (const auto& [key, value] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

VerificationKind ExperimentConfig::effective_verification_kind() const {
  if (verification_kind) return *verification_kind;
  return verification == VerificationSource::Simulate ? VerificationKind::Simulated : VerificationKind::Observed;
}

std::uint64_t ExperimentConfig::effective_truth_seed() const {
  return truth_seed ? *truth_seed : derive_stream_seed(ricker.seed, 0x74727574685f6964ULL, 0, 0);
}

void ExperimentConfig::validate() const {
  try {
    ricker.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("ricker", e.what());
  }
  if (threads < 1) throw ConfigError("experiment.threads", "must be >= 1");

  if (mode == Mode::Grouped) {
    if (grouped_path.empty()) throw ConfigError("grouped.path", "required in grouped mode");
    return;
  }

  if (mode == Mode::Relative) {
    if (score != ScoreName::CRPS && score != ScoreName::CRPSS && score != ScoreName::MAESS) {
      throw ConfigError("experiment.score", "relative mode needs crps, crpss or maess");
    }
    if (tolerance) throw ConfigError("experiment.tolerance", "relative limits take no tolerance");
    if (reference == ReferenceType::None) throw ConfigError("reference.type", "relative mode needs a reference");
  } else {
    if (score != ScoreName::AE && score != ScoreName::MAE && score != ScoreName::CRPS) {
      throw ConfigError("experiment.score", "absolute mode needs ae, mae or crps");
    }
    if (!tolerance) throw ConfigError("experiment.tolerance", "absolute mode needs a tolerance");
    if (*tolerance < 0.0) throw ConfigError("experiment.tolerance", "must be >= 0");
  }

  if (forecast == ForecastSource::Errors) {
    if (verification != VerificationSource::None) {
      throw ConfigError("verification.source", "error series are already verified; use none");
    }
    if (mode != Mode::Absolute || score != ScoreName::AE) {
      throw ConfigError("forecast.source", "error series support only absolute mode with score = ae");
    }
  } else if (verification == VerificationSource::None) {
    throw ConfigError("verification.source", "forecasts need a verification source");
  }
  if (forecast != ForecastSource::Ricker && forecast_path.empty()) {
    throw ConfigError("forecast.path", "required unless forecast.source = ricker");
  }
  if (verification == VerificationSource::Simulate && forecast != ForecastSource::Ricker) {
    throw ConfigError("verification.source", "simulate requires forecast.source = ricker");
  }
  if (verification == VerificationSource::File && verification_path.empty()) {
    throw ConfigError("verification.path", "required when verification.source = file");
  }
  if (mode == Mode::Relative) {
    if (reference == ReferenceType::Saturation && forecast != ForecastSource::Ricker) {
      throw ConfigError("reference.type", "saturation requires forecast.source = ricker");
    }
    if (reference == ReferenceType::Saturation) {
      if (saturation.members < 2) throw ConfigError("reference.members", "must be >= 2");
      if (saturation.burn_in >= saturation.horizon) throw ConfigError("reference.burn_in", "must be < horizon");
    }
    if (reference == ReferenceType::Climatology && reference_path.empty()) {
      throw ConfigError("reference.path", "required for a climatology reference");
    }
  }
  for (std::size_t i = 1; i < sweep.init_times.size(); ++i) {
    if (sweep.init_times[i - 1] >= sweep.init_times[i]) {
      throw ConfigError("sweep.init_times", "must be strictly ascending");
    }
  }
  if (!sweep.init_times.empty() && sweep.init_times.front() < 0) {
    throw ConfigError("sweep.init_times", "must be >= 0");
  }
  if (init_time < 0) throw ConfigError("experiment.init_time", "must be >= 0");
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i - 1] < rho[i])) throw ConfigError("tolerance_curve.rho", "must be strictly ascending");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& value) { out << key << '=' << value << '\n'; };
  auto real = [](double v) { return format_real(v); };
  put("experiment.mode", name_of(mode, kModes));
  put("experiment.score", std::string(to_string(score)));
  put("experiment.tolerance", tolerance ? real(*tolerance) : "none");
  put("experiment.init_time", std::to_string(init_time));
  put("forecast.source", name_of(forecast, kForecasts));
  put("forecast.path", forecast_path);
  put("verification.source", name_of(verification, kVerifications));
  put("verification.path", verification_path);
  put("verification.kind", name_of(effective_verification_kind(), kKinds));
  put("verification.truth_seed", std::to_string(effective_truth_seed()));
  put("reference.type", name_of(reference, kReferences));
  put("reference.path", reference_path);
  put("reference.burn_in", std::to_string(saturation.burn_in));
  put("reference.members", std::to_string(saturation.members));
  put("reference.horizon", std::to_string(saturation.horizon));
  put("ricker.alpha", real(ricker.alpha_mean));
  put("ricker.k", real(ricker.k_mean));
  put("ricker.param_cv", real(ricker.param_cv));
  put("ricker.init_value", real(ricker.init_value));
  put("ricker.init_cv", real(ricker.init_cv));
  put("ricker.members", std::to_string(ricker.member_count));
  put("ricker.horizon", std::to_string(ricker.horizon));
  put("ricker.seed", std::to_string(ricker.seed));
  put("ricker.process_noise_sd", real(ricker.process_noise_sd));
  std::string inits;
  for (auto t : sweep.init_times) inits += std::to_string(t) + ",";
  put("sweep.init_times", inits);
  put("sweep.horizon", std::to_string(sweep.horizon));
  put("sweep.aggregation", name_of(sweep.aggregation, kAggregations));
  put("grouped.path", grouped_path);
  std::string rhos;
  for (double r : rho) rhos += real(r) + ",";
  put("tolerance_curve.rho", rhos);
  return out.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.ricker.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.members) cfg.ricker.member_count = *o.members;
  if (o.horizon) cfg.ricker.horizon = *o.horizon;
  if (o.threads) cfg.threads = *o.threads;
  if (o.cv_params) cfg.ricker.param_cv = *o.cv_params;
  if (o.cv_init) cfg.ricker.init_cv = *o.cv_init;
  if (o.tolerance) cfg.tolerance = *o.tolerance;
  if (o.score) cfg.score = to_score(*o.score, "--score");
  // ae/mae imply absolute limits and skill scores relative ones; crps is
  // absolute exactly when a tolerance is given.
  if ((o.score || o.tolerance) && cfg.mode != Mode::Grouped) {
    switch (cfg.score) {
      case ScoreName::AE:
      case ScoreName::MAE: cfg.mode = Mode::Absolute; break;
      case ScoreName::CRPS: cfg.mode = cfg.tolerance ? Mode::Absolute : Mode::Relative; break;
      default:
        cfg.mode = Mode::Relative;
        if (!o.tolerance) cfg.tolerance.reset();
        break;
    }
  }
  cfg.validate();
}

}  // namespace horizonkit
