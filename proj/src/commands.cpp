#include "horizonkit/commands.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "horizonkit/io.hpp"
#include "horizonkit/parallel.hpp"
#include "horizonkit/pipeline.hpp"
#include "horizonkit/ricker.hpp"

namespace horizonkit {

namespace {

using nlohmann::json;

std::ostream& out_of(const CommandOptions& o) { return o.out ? *o.out : std::cout; }
std::ostream& err_of(const CommandOptions& o) { return o.err ? *o.err : std::cerr; }

ExperimentConfig load(const CommandOptions& options) {
  ExperimentConfig cfg = options.config ? load_config(*options.config) : ExperimentConfig{};
  Overrides overrides = options.overrides;
  if (!overrides.threads && std::getenv("HORIZONKIT_THREADS")) overrides.threads = resolve_threads(std::nullopt);
  apply_overrides(cfg, overrides);
  return cfg;
}

// Maps library errors onto exit codes.
template <typename Fn>
int guarded(const CommandOptions& options, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err_of(options) << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err_of(options) << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err_of(options) << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::string describe(const LimitResult& limit, const std::string& unit) {
  std::ostringstream s;
  const auto plural = [&](std::size_t n) { return std::to_string(n) + " " + unit + (n == 1 ? "" : "s"); };
  switch (limit.status) {
    case LimitStatus::Crossed: s << "lead " << limit.lead << " (" << plural(limit.lead) << ")"; break;
    case LimitStatus::NotReached: s << "not reached within " << plural(limit.max_lead); break;
    case LimitStatus::NeverAcceptable: s << "never acceptable (fails at lead " << limit.lead << ")"; break;
  }
  return s.str();
}

std::vector<NamedColumn> case_columns(const CaseResult& c) {
  std::vector<NamedColumn> cols;
  cols.push_back(column_of(std::string(to_string(c.forecast_score.name())), c.forecast_score));
  if (c.reference_score) {
    cols.push_back(column_of(std::string(to_string(c.reference_score->name())) + "_reference", *c.reference_score));
  }
  if (c.limit_score.name() != c.forecast_score.name()) {
    cols.push_back(column_of(std::string(to_string(c.limit_score.name())), c.limit_score));
  }
  return cols;
}

int run_grouped(const ExperimentConfig& cfg, std::ostream& out) {
  const auto stands = read_stands_csv(cfg.grouped_path);
  std::map<std::string, ErrorSeries> own;
  std::map<std::string, std::vector<ErrorSeries>> neighbors;
  std::map<std::string, std::string> groups;
  for (const auto& [stand, rec] : stands) {
    const TimeAxis axis(0, "step", rec.own.size());
    own.emplace(stand, ErrorSeries(axis, rec.own));
    auto& nb = neighbors[stand];
    for (const auto* side : {&rec.lower, &rec.upper}) {
      const bool any = std::any_of(side->begin(), side->end(), [](const MaybeReal& v) { return v.has_value(); });
      if (any) nb.emplace_back(axis, *side);
    }
    groups.emplace(stand, rec.group);
  }
  const auto result = grouped_limit(own, neighbors, groups);

  ResultSet rs;
  std::ostringstream bounded;
  bounded << "stand,lead,abs_error,bounded\n";
  for (const auto& [stand, sl] : result.stands) {
    rs.limits.push_back({stand, sl.limit});
    const auto& errors = own.at(stand);
    for (std::size_t i = 0; i < errors.axis().length(); ++i) {
      const MaybeReal abs = errors.at(i) ? MaybeReal(std::abs(*errors.at(i))) : std::nullopt;
      bounded << stand << ',' << (i + 1) << ',' << format_maybe(abs) << ','
              << format_maybe(sl.bounded.empty() ? std::nullopt : sl.bounded[i]) << '\n';
    }
  }
  json doc = json::object();
  for (const auto& [group, dist] : result.groups) {
    doc[group] = distribution_to_json(dist);
    out << "group " << group << ": mean limit "
        << (dist.mean ? format_real(*dist.mean) : std::string("n/a")) << ", not reached "
        << dist.not_reached_count << " of " << dist.per_member_limits.size() << '\n';
  }
  rs.documents["grouped_limits"] = doc;
  rs.tables["bounded.csv"] = bounded.str();
  write_results(cfg.output_dir, rs, cfg.hash(), cfg.ricker.seed);
  return kExitOk;
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HORIZONKIT_THREADS")) {
    const auto n = std::strtoul(env, nullptr, 10);
    if (n > 0) return n;
  }
  return 1;
}

int cmd_simulate_ricker(const CommandOptions& options) {
  return guarded(options, [&] {
    const ExperimentConfig cfg = load(options);
    if (cfg.forecast != ForecastSource::Ricker) {
      throw ConfigError("forecast.source", "simulate-ricker needs forecast.source = ricker");
    }
    RickerConfig rc = cfg.ricker;
    rc.t0 = cfg.init_time;
    rc.stream = static_cast<std::uint64_t>(cfg.init_time);
    SimulationReport report;
    const auto ensemble = simulate_ensemble(rc, cfg.threads, &report);
    const auto truth = simulate_truth(rc, cfg.effective_truth_seed());

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
    const std::filesystem::path dir(cfg.output_dir);
    write_ensemble_csv(dir / "ensemble.csv", ensemble);
    write_series_csv(dir / "truth.csv", truth.values());
    Manifest manifest{cfg.hash(), cfg.ricker.seed, {"ensemble.csv", "truth.csv"}, {}};
    write_text_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
    out_of(options) << "simulated " << ensemble.member_count() << " members x " << ensemble.lead_count()
                    << " generations";
    if (report.floored_states) out_of(options) << " (" << report.floored_states << " states floored at 0)";
    out_of(options) << '\n';
    return kExitOk;
  });
}

int cmd_limit(const CommandOptions& options) {
  return guarded(options, [&] {
    const ExperimentConfig cfg = load(options);
    if (cfg.mode == Mode::Grouped) return run_grouped(cfg, out_of(options));

    const Experiment experiment(cfg, cfg.init_time, cfg.forecast_horizon());
    const CaseResult c = experiment.run_case(cfg.init_time, cfg.threads);

    ResultSet rs;
    rs.scores = case_columns(c);
    rs.limits.push_back({"limit", c.limit});
    if (experiment.climatology()) {
      json clim = json::array();
      for (const auto& g : experiment.climatology()->positions()) clim.push_back({{"mean", g.mean()}, {"std", g.std()}});
      rs.documents["climatology"] = clim;
    }
    write_results(cfg.output_dir, rs, cfg.hash(), cfg.ricker.seed);
    out_of(options) << to_string(c.limit.kind) << " limit: " << describe(c.limit, experiment.unit()) << '\n';
    return c.limit.status == LimitStatus::NeverAcceptable ? kExitNeverAcceptable : kExitOk;
  });
}

int cmd_sweep(const CommandOptions& options) {
  return guarded(options, [&] {
    const ExperimentConfig cfg = load(options);
    if (cfg.mode == Mode::Grouped) throw ConfigError("experiment.mode", "sweep does not support grouped mode");
    const std::vector<std::int64_t> inits =
        cfg.sweep.init_times.empty() ? std::vector<std::int64_t>{cfg.init_time} : cfg.sweep.init_times;
    const std::size_t horizon = cfg.sweep_horizon();
    const Experiment experiment(cfg, inits.back(), horizon);

    std::vector<std::optional<CaseResult>> cases(inits.size());
    parallel_for(inits.size(), cfg.threads, [&](std::size_t i) { cases[i] = experiment.run_case(inits[i], 1); });

    ResultSet rs;
    std::vector<ScoreSeries> series;
    for (const auto& c : cases) {
      series.push_back(c->limit_score);
      for (std::size_t lead = 1; lead <= c->limit_score.axis().length(); ++lead) {
        rs.heatmap.push_back({c->init_time, lead, c->limit_score.at(lead - 1)});
      }
    }
    const ToleranceSpec& tol = cases.front()->tolerance;
    const LimitKind kind = cases.front()->limit.kind;
    const std::string unit = experiment.unit();
    int code = kExitOk;
    auto aggregate = [&](Statistic stat, const std::string& label) {
      const auto agg = limit_of_mean_score(series, stat, tol, kind);
      rs.scores.push_back(column_of(label, agg.aggregate));
      if (stat == Statistic::Mean) rs.scores.push_back({label + "_std", agg.spread});
      rs.limits.push_back({label, agg.limit});
      out_of(options) << label << " " << to_string(agg.limit.kind) << " limit: " << describe(agg.limit, unit)
                      << '\n';
      if (rs.limits.size() == 1 && agg.limit.status == LimitStatus::NeverAcceptable) code = kExitNeverAcceptable;
    };
    if (cfg.sweep.aggregation != Aggregation::Median) aggregate(Statistic::Mean, "mean");
    if (cfg.sweep.aggregation != Aggregation::Mean) aggregate(Statistic::Median, "median");

    std::vector<LimitResult> per_init;
    for (const auto& c : cases) {
      per_init.push_back(c->limit);
      rs.limits.push_back({"init_" + std::to_string(c->init_time), c->limit});
    }
    const auto dist = summarize_limits(std::move(per_init));
    rs.documents["limit_distribution"] = distribution_to_json(dist);
    out_of(options) << "per-init limits: mean "
                    << (dist.mean ? format_real(*dist.mean) : std::string("n/a")) << ", median "
                    << (dist.median ? format_real(*dist.median) : std::string("n/a")) << ", not reached "
                    << dist.not_reached_count << " of " << cases.size() << '\n';
    write_results(cfg.output_dir, rs, cfg.hash(), cfg.ricker.seed);
    return code;
  });
}

int cmd_tolerance_curve(const CommandOptions& options) {
  return guarded(options, [&] {
    ExperimentConfig cfg = load(options);
    if (options.rho) cfg.rho = parse_real_list(*options.rho, "--rho");
    if (cfg.rho.empty()) throw ConfigError("tolerance_curve.rho", "no tolerances given (use --rho)");
    if (cfg.mode == Mode::Grouped) throw ConfigError("experiment.mode", "tolerance-curve needs a score series");

    const Experiment experiment(cfg, cfg.init_time, cfg.forecast_horizon());
    const CaseResult c = experiment.run_case(cfg.init_time, cfg.threads);
    const auto curve = tolerance_curve(c.forecast_score, cfg.rho);

    ResultSet rs;
    rs.scores.push_back(column_of(std::string(to_string(c.forecast_score.name())), c.forecast_score));
    std::ostringstream csv;
    csv << "rho,status,lead\n";
    for (const auto& point : curve) {
      csv << format_real(point.rho) << ',' << to_string(point.limit.status) << ',';
      if (point.limit.status == LimitStatus::NotReached) {
        csv << "NA";
      } else {
        csv << point.limit.lead;
      }
      csv << '\n';
      rs.limits.push_back({"rho=" + format_real(point.rho), point.limit});
    }
    rs.tables["tolerance_curve.csv"] = csv.str();
    write_results(cfg.output_dir, rs, cfg.hash(), cfg.ricker.seed);
    out_of(options) << "tolerance curve: " << curve.size() << " points written\n";
    return kExitOk;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"horizonkit: empirical forecast limits for point and ensemble forecasts"};
  app.require_subcommand(1);

  CommandOptions options;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t members = 0;
  std::size_t horizon = 0;
  std::string score;
  double tolerance = 0.0;
  std::size_t threads = 0;
  double cv_params = 0.0;
  double cv_init = 0.0;
  std::string rho;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment config file");
    sub->add_option("--seed", seed, "master random seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--members", members, "ensemble size")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", horizon, "forecast horizon (leads)")->check(CLI::PositiveNumber);
    sub->add_option("--score", score, "scoring function")->check(CLI::IsMember({"ae", "mae", "crps", "crpss", "maess"}));
    sub->add_option("--tolerance", tolerance, "absolute error tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", threads, "worker threads (env HORIZONKIT_THREADS)")->check(CLI::PositiveNumber);
    sub->add_option("--cv-params", cv_params, "coefficient of variation of growth rate and capacity")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--cv-init", cv_init, "coefficient of variation of the initial state")
        ->check(CLI::NonNegativeNumber);
  };

  auto* simulate = app.add_subcommand("simulate-ricker", "simulate a stochastic Ricker ensemble and truth");
  auto* limit = app.add_subcommand("limit", "compute the forecast limit of one forecast");
  auto* sweep = app.add_subcommand("sweep", "repeat the limit over initialization times");
  auto* curve = app.add_subcommand("tolerance-curve", "forecast limit as a function of the tolerance");
  for (auto* sub : {simulate, limit, sweep, curve}) add_common(sub);
  curve->add_option("--rho", rho, "tolerances: a,b,c or start:stop:count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto* active = app.get_subcommands().front();
  auto given = [&](const char* name) { return active->count(name) > 0; };
  if (given("--config")) options.config = config;
  if (given("--seed")) options.overrides.seed = seed;
  if (given("--out")) options.overrides.out = out;
  if (given("--members")) options.overrides.members = members;
  if (given("--horizon")) options.overrides.horizon = horizon;
  if (given("--score")) options.overrides.score = score;
  if (given("--tolerance")) options.overrides.tolerance = tolerance;
  if (given("--threads")) options.overrides.threads = threads;
  if (given("--cv-params")) options.overrides.cv_params = cv_params;
  if (given("--cv-init")) options.overrides.cv_init = cv_init;
  if (active == curve && given("--rho")) options.rho = rho;

  if (active == simulate) return cmd_simulate_ricker(options);
  if (active == limit) return cmd_limit(options);
  if (active == sweep) return cmd_sweep(options);
  return cmd_tolerance_curve(options);
}

}  // namespace horizonkit
