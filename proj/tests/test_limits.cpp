#include <doctest.h>

#include <cmath>
#include <random>

#include "horizonkit/errors.hpp"
#include "horizonkit/limits.hpp"
#include "oracles.hpp"

using namespace horizonkit;

namespace {

ScoreSeries scores(std::vector<MaybeReal> v, ScoreName name = ScoreName::MAE, std::int64_t t0 = 0) {
  const auto n = v.size();
  return ScoreSeries(TimeAxis(t0, "step", n), std::move(v), name);
}

ErrorSeries errs(std::vector<MaybeReal> v) {
  const auto n = v.size();
  return ErrorSeries(TimeAxis(0, "year", n), std::move(v));
}

const auto at_most = [](double rho) { return ToleranceSpec::scalar(rho, Direction::ScoreAtMost); };
const auto skill_zero = ToleranceSpec::scalar(0.0, Direction::ScoreAtLeast);

}  // namespace

TEST_CASE("detect_limit hand scans") {
  auto r = detect_limit(scores({0.1, 0.2, 0.3}), at_most(0.25));
  CHECK(r.status == LimitStatus::Crossed);
  CHECK(r.lead == 3);
  CHECK(r.max_lead == 3);

  auto below = detect_limit(scores({0.1, 0.2, 0.3}), at_most(1.0));
  CHECK(below.status == LimitStatus::NotReached);
  CHECK(below.lead == 3);

  auto never = detect_limit(scores({0.5, 0.1}), at_most(0.25));
  CHECK(never.status == LimitStatus::NeverAcceptable);
  CHECK(never.lead == 1);

  auto tie = detect_limit(scores({0.1, 0.25, 0.3}), at_most(0.25));
  CHECK(tie.lead == 3);
}

TEST_CASE("detect_limit records absolute time and kind") {
  auto r = detect_limit(scores({0.1, 0.9}, ScoreName::CRPS, 40), at_most(0.5), LimitKind::Potential);
  CHECK(r.absolute_time == 42);
  CHECK(r.kind == LimitKind::Potential);
  CHECK(r.score_name == ScoreName::CRPS);
  CHECK(r.tolerance == at_most(0.5));
}

TEST_CASE("detect_limit rejects orientation mismatches") {
  CHECK_THROWS_AS(detect_limit(scores({0.1}, ScoreName::AE), skill_zero), OrientationError);
  CHECK_THROWS_AS(detect_limit(scores({0.1}, ScoreName::CRPSS), at_most(0.0)), OrientationError);
  CHECK_THROWS_AS(detect_limit(scores({0.1, 0.2}), ToleranceSpec::per_lead({1.0}, Direction::ScoreAtMost)),
                  AxisError);
}

TEST_CASE("missing scores are skipped") {
  auto r = detect_limit(scores({std::nullopt, 0.1, std::nullopt, 0.9}), at_most(0.5));
  CHECK(r.status == LimitStatus::Crossed);
  CHECK(r.lead == 4);
  auto first = detect_limit(scores({std::nullopt, 0.9, 0.1}), at_most(0.5));
  CHECK(first.status == LimitStatus::NeverAcceptable);
  CHECK(first.lead == 2);
  auto none = detect_limit(scores({std::nullopt, std::nullopt}), at_most(0.5));
  CHECK(none.status == LimitStatus::NotReached);
}

TEST_CASE("return of skill is kept as acceptable intervals") {
  auto r = detect_limit(scores({0.1, 0.6, 0.7, 0.2, 0.3, 0.9}), at_most(0.5));
  CHECK(r.lead == 2);
  REQUIRE(r.acceptable_intervals.size() == 2);
  CHECK(r.acceptable_intervals[0] == LeadInterval{1, 1});
  CHECK(r.acceptable_intervals[1] == LeadInterval{4, 5});
}

TEST_CASE("per-lead and grouped tolerances") {
  auto per = ToleranceSpec::per_lead({1.0, 0.5, 0.2}, Direction::ScoreAtMost);
  auto r = detect_limit(scores({0.3, 0.4, 0.3}), per);
  CHECK(r.lead == 3);
  auto grouped = ToleranceSpec::grouped({{"a", {1.0, 1.0}}, {"b", {0.1, 0.1}}}, Direction::ScoreAtMost);
  CHECK(detect_limit(scores({0.5, 0.5}), grouped, LimitKind::Absolute, "a").status == LimitStatus::NotReached);
  CHECK(detect_limit(scores({0.5, 0.5}), grouped, LimitKind::Absolute, "b").status ==
        LimitStatus::NeverAcceptable);
  CHECK_THROWS_AS(detect_limit(scores({0.5, 0.5}), grouped, LimitKind::Absolute, "c"), CoverageError);
}

TEST_CASE("rank orders statuses") {
  auto never = detect_limit(scores({0.9, 0.1}), at_most(0.5));
  auto crossed = detect_limit(scores({0.1, 0.9}), at_most(0.5));
  auto fine = detect_limit(scores({0.1, 0.1}), at_most(0.5));
  CHECK(never.rank() < crossed.rank());
  CHECK(crossed.rank() < fine.rank());
  CHECK(crossed.realized_lead() == 2.0);
  CHECK(never.realized_lead() == 1.0);
  CHECK_FALSE(fine.realized_lead().has_value());
}

TEST_CASE("detect_limit agrees with a naive indicator scan") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_real_distribution<double> u(0, 1);
  for (int c = 0; c < 2000; ++c) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<MaybeReal> v(n);
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (u(rng) > 0.1) v[i] = std::round(u(rng) * 20) / 20;
      rho[i] = u(rng) < 0.05 ? std::nan("") : std::round(u(rng) * 20) / 20;
    }
    const bool most = u(rng) < 0.5;
    auto s = most ? scores(v) : scores(v, ScoreName::CRPSS);
    auto tol = ToleranceSpec::per_lead(rho, most ? Direction::ScoreAtMost : Direction::ScoreAtLeast);
    auto got = detect_limit(s, tol);
    auto want = oracle::naive_scan(v, rho, most);
    CHECK(got.status == want.status);
    CHECK(got.lead == want.lead);
  }
}

TEST_CASE("relative_limit") {
  auto strictly = relative_limit(scores({0.1, 0.2}, ScoreName::CRPS), scores({0.3, 0.3}, ScoreName::CRPS));
  CHECK(strictly.status == LimitStatus::NotReached);
  CHECK(strictly.kind == LimitKind::Relative);
  CHECK(strictly.score_name == ScoreName::CRPSS);

  auto equal = relative_limit(scores({0.3, 0.3}, ScoreName::CRPS), scores({0.3, 0.3}, ScoreName::CRPS));
  CHECK(equal.status == LimitStatus::NotReached);

  auto hand = relative_limit(scores({1, 2, 3}, ScoreName::MAE), scores({2, 2, 2}, ScoreName::MAE));
  CHECK(hand.status == LimitStatus::Crossed);
  CHECK(hand.lead == 3);
  CHECK(hand.score_name == ScoreName::MAESS);

  CHECK_THROWS_AS(relative_limit(scores({1}), scores({1}), LimitKind::Absolute), ParameterError);
  CHECK(relative_limit(scores({1}), scores({1}), LimitKind::Potential).kind == LimitKind::Potential);
}

TEST_CASE("relative limits are invariant to common rescaling") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_real_distribution<double> scale(0.001, 1000.0);
  for (int c = 0; c < 100; ++c) {
    std::vector<MaybeReal> f(20), r(20), fs(20), rs(20);
    const double k = scale(rng);
    for (int i = 0; i < 20; ++i) {
      f[i] = u(rng);
      r[i] = u(rng);
      fs[i] = *f[i] * k;
      rs[i] = *r[i] * k;
    }
    auto a = relative_limit(scores(f, ScoreName::CRPS), scores(r, ScoreName::CRPS));
    auto b = relative_limit(scores(fs, ScoreName::CRPS), scores(rs, ScoreName::CRPS));
    CHECK(a.status == b.status);
    CHECK(a.lead == b.lead);
  }
}

TEST_CASE("limit kinds") {
  CHECK(limit_kind_for(VerificationKind::Simulated, true) == LimitKind::Potential);
  CHECK(limit_kind_for(VerificationKind::Simulated, false) == LimitKind::Potential);
  CHECK(limit_kind_for(VerificationKind::Observed, true) == LimitKind::Relative);
  CHECK(limit_kind_for(VerificationKind::Observed, false) == LimitKind::Absolute);
}

TEST_CASE("grouped limit on a three-stand fixture") {
  // own < nearest neighbour until the constructed crossing lead.
  std::map<std::string, ErrorSeries> own{
      {"s1", errs({0.1, 0.9, 0.1, 0.1, 0.1, 0.1})},
      {"s2", errs({0.1, 0.2, 0.3, 0.4, 1.5, 0.1})},
      {"s3", errs({0.1, -0.2, 0.3, -0.4, 0.5, 0.6})},
  };
  std::map<std::string, std::vector<ErrorSeries>> nb{
      {"s1", {errs({0.5, 0.5, 0.5, 0.5, 0.5, 0.5}), errs({-2, -2, -2, -2, -2, -2})}},
      {"s2", {errs({1.0, 1.0, 1.0, 1.0, 1.0, 1.0})}},
      {"s3", {errs({-1.0, 1.0, -1.0, 1.0, -1.0, 1.0}), errs({std::nullopt, 2, 2, 2, 2, 2})}},
  };
  std::map<std::string, std::string> groups{{"s1", "A"}, {"s2", "A"}, {"s3", "A"}};
  auto out = grouped_limit(own, nb, groups);
  CHECK(out.stands.at("s1").limit.lead == 2);
  CHECK(out.stands.at("s2").limit.lead == 5);
  CHECK(out.stands.at("s3").limit.status == LimitStatus::NotReached);
  const auto& g = out.groups.at("A");
  CHECK(*g.mean == 3.5);
  CHECK(g.not_reached_count == 1);

  CHECK(*out.stands.at("s1").threshold == 0.5);
  CHECK(*out.stands.at("s2").bounded[4] == doctest::Approx(-0.5));
  CHECK(*out.stands.at("s2").bounded[0] == doctest::Approx(0.9));
  CHECK(out.stands.at("s3").bounded.empty());
}

TEST_CASE("grouped limit edge cases") {
  std::map<std::string, std::string> groups{{"s", "g"}};
  auto never = grouped_limit({{"s", errs({1.0, 0.0})}}, {{"s", {errs({1.0, 1.0})}}}, groups);
  CHECK(never.stands.at("s").limit.status == LimitStatus::NeverAcceptable);
  CHECK(never.groups.at("g").never_acceptable_count == 1);

  CHECK_THROWS_AS(grouped_limit({{"s", errs({1.0})}}, {}, groups), CoverageError);
  CHECK_THROWS_AS(grouped_limit({}, {{"s", {errs({1.0})}}}, groups), CoverageError);
  CHECK_THROWS_AS(grouped_limit({{"s", errs({1.0})}}, {{"s", {errs({1.0})}}}, {}), CoverageError);
}

TEST_CASE("tolerance curve") {
  auto inc = scores({0.1, 0.2, 0.4, 0.8});
  std::vector<double> rho{0.05, 0.1, 0.3, 0.5, 1.0};
  auto curve = tolerance_curve(inc, rho);
  CHECK(curve[0].limit.status == LimitStatus::NeverAcceptable);
  CHECK(curve[1].limit.lead == 2);
  CHECK(curve[2].limit.lead == 3);
  CHECK(curve[3].limit.lead == 4);
  CHECK(curve[4].limit.status == LimitStatus::NotReached);

  std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS(tolerance_curve(inc, unsorted), InputOrderError);
  CHECK_THROWS_AS(tolerance_curve(scores({0.1}, ScoreName::CRPSS), rho), OrientationError);
}

TEST_CASE("tolerance curve is monotone and matches per-tolerance scans") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0, 2);
  for (int c = 0; c < 50; ++c) {
    std::vector<MaybeReal> v(25);
    for (auto& x : v) x = u(rng);
    auto s = scores(v);
    std::vector<double> rho;
    for (int k = 0; k < 100; ++k) rho.push_back(0.02 * k);
    auto curve = tolerance_curve(s, rho);
    for (std::size_t k = 0; k < rho.size(); ++k) {
      auto single = detect_limit(s, at_most(rho[k]));
      CHECK(curve[k].limit.status == single.status);
      CHECK(curve[k].limit.lead == single.lead);
      if (k > 0) CHECK(curve[k - 1].limit.rank() <= curve[k].limit.rank());
    }
  }
}

TEST_CASE("limit of the mean score") {
  auto s = scores({0.5, 0.2, -0.1}, ScoreName::CRPSS);
  std::vector<ScoreSeries> copies(4, s);
  auto agg = limit_of_mean_score(copies, Statistic::Mean);
  for (std::size_t i = 0; i < 3; ++i) CHECK(*agg.aggregate.at(i) == doctest::Approx(*s.at(i)));
  CHECK(agg.limit.lead == 3);
  CHECK(*agg.spread[0] == doctest::Approx(0.0));

  std::vector<ScoreSeries> pair{scores({1, -1}, ScoreName::CRPSS), scores({-1, 1}, ScoreName::CRPSS)};
  auto zero = limit_of_mean_score(pair, Statistic::Mean);
  CHECK(*zero.aggregate.at(0) == 0.0);
  CHECK(*zero.aggregate.at(1) == 0.0);
  CHECK(zero.limit.status == LimitStatus::NotReached);
  CHECK(*zero.spread[0] == doctest::Approx(std::sqrt(2.0)));

  std::vector<ScoreSeries> three{scores({0.9}, ScoreName::CRPSS), scores({-5.0}, ScoreName::CRPSS),
                                 scores({0.1}, ScoreName::CRPSS)};
  CHECK(*limit_of_mean_score(three, Statistic::Median).aggregate.at(0) == doctest::Approx(0.1));
  CHECK(limit_of_mean_score(three, Statistic::Mean).limit.status == LimitStatus::NeverAcceptable);

  CHECK_THROWS_AS(limit_of_mean_score(std::span<const ScoreSeries>{}, Statistic::Mean), EmptyInputError);
  std::vector<ScoreSeries> ragged{scores({0.1}, ScoreName::CRPSS), scores({0.1, 0.2}, ScoreName::CRPSS)};
  CHECK_THROWS_AS(limit_of_mean_score(ragged, Statistic::Mean), AxisError);
}

TEST_CASE("member limit distribution") {
  std::vector<ScoreSeries> same(5, scores({0.1, 0.2, 0.9}));
  auto d = member_limit_distribution(same, at_most(0.5));
  CHECK(*d.q25 == 3.0);
  CHECK(*d.median == 3.0);
  CHECK(*d.q75 == 3.0);

  std::vector<ScoreSeries> spread;
  for (std::size_t cross : {2u, 4u, 6u, 8u}) {
    std::vector<MaybeReal> v(10, 0.1);
    for (std::size_t i = cross - 1; i < 10; ++i) v[i] = 0.9;
    spread.push_back(scores(v));
  }
  spread.push_back(scores(std::vector<MaybeReal>(10, 0.1)));
  auto q = member_limit_distribution(spread, at_most(0.5));
  CHECK(*q.mean == 5.0);
  CHECK(*q.median == 5.0);
  CHECK(*q.q25 == 3.5);
  CHECK(*q.q75 == 6.5);
  CHECK(q.not_reached_count == 1);
  CHECK(q.per_member_limits.size() == 5);
  CHECK(*q.stddev == doctest::Approx(std::sqrt(20.0 / 3.0)));

  CHECK_THROWS_AS(member_limit_distribution(std::span<const ScoreSeries>{}, at_most(0.5)), EmptyInputError);

  std::vector<ScoreSeries> fine(3, scores({0.1}));
  auto none = member_limit_distribution(fine, at_most(0.5));
  CHECK_FALSE(none.mean.has_value());
  CHECK(none.not_reached_count == 3);
}

TEST_CASE("linear quantile") {
  std::vector<double> v{1, 2, 3, 4};
  CHECK(linear_quantile(v, 0.0) == 1.0);
  CHECK(linear_quantile(v, 1.0) == 4.0);
  CHECK(linear_quantile(v, 0.5) == 2.5);
  CHECK_THROWS_AS(linear_quantile(std::span<const double>{}, 0.5), EmptyInputError);
}
