#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "horizonkit/errors.hpp"
#include "horizonkit/scoring.hpp"
#include "oracles.hpp"

using namespace horizonkit;

namespace {

ErrorSeries errs(std::vector<MaybeReal> v) {
  const auto n = v.size();
  return ErrorSeries(TimeAxis(0, "step", n), std::move(v));
}

ScoreSeries scores(std::vector<MaybeReal> v, ScoreName name) {
  const auto n = v.size();
  return ScoreSeries(TimeAxis(0, "step", n), std::move(v), name);
}

}  // namespace

TEST_CASE("score names round-trip") {
  for (auto n : {ScoreName::AE, ScoreName::MAE, ScoreName::CRPS, ScoreName::CRPSS, ScoreName::MAESS,
                 ScoreName::ShiftedAE}) {
    CHECK(score_name_from_string(to_string(n)) == n);
  }
  CHECK_THROWS_AS(score_name_from_string("rmse"), Error);
  CHECK_FALSE(higher_is_better(ScoreName::CRPS));
  CHECK(higher_is_better(ScoreName::CRPSS));
  CHECK(higher_is_better(ScoreName::ShiftedAE));
}

TEST_CASE("score series enforce orientation bounds") {
  CHECK_THROWS_AS(scores({-0.1}, ScoreName::CRPS), Error);
  CHECK_THROWS_AS(scores({1.5}, ScoreName::CRPSS), Error);
  CHECK_NOTHROW(scores({-7.0, 1.0}, ScoreName::CRPSS));
  CHECK_NOTHROW(scores({-7.0}, ScoreName::ShiftedAE));
}

TEST_CASE("absolute_error") {
  auto a = absolute_error(errs({-0.5, 0.5}));
  CHECK(*a.at(0) == 0.5);
  CHECK(*a.at(1) == 0.5);
  CHECK(*absolute_error(errs({0.0})).at(0) == 0.0);
  auto m = absolute_error(errs({std::nullopt, 2.0}));
  CHECK_FALSE(m.at(0).has_value());
  CHECK(*m.at(1) == 2.0);
  CHECK(m.name() == ScoreName::AE);
}

TEST_CASE("shifted_absolute_error") {
  auto s = shifted_absolute_error(errs({0.5, 2.0}), 1.5);
  CHECK(*s.at(0) == 1.0);
  CHECK(*s.at(1) == -0.5);
  CHECK(*shifted_absolute_error(errs({0.0}), 0.0).at(0) == 0.0);
  auto soil = shifted_absolute_error(errs({1.0, 1.4, 1.6}), 1.5);
  CHECK(*soil.at(0) == doctest::Approx(0.5));
  CHECK(*soil.at(1) == doctest::Approx(0.1));
  CHECK(*soil.at(2) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(shifted_absolute_error(errs({0.0}), -0.1), ToleranceError);
}

TEST_CASE("mean_absolute_error") {
  std::vector<ErrorSeries> rows{errs({1.0}), errs({-3.0})};
  CHECK(*mean_absolute_error(rows).at(0) == 2.0);

  std::vector<ErrorSeries> one{errs({-1.0, 0.25, std::nullopt})};
  auto mae = mean_absolute_error(one);
  auto ae = absolute_error(one[0]);
  for (std::size_t i = 0; i < 3; ++i) CHECK(mae.at(i) == ae.at(i));

  CHECK_THROWS_AS(mean_absolute_error(std::span<const ErrorSeries>{}), EmptyInputError);
}

TEST_CASE("mean_absolute_error matches a brute-force column loop") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 2);
  std::vector<std::vector<double>> raw(100, std::vector<double>(8));
  std::vector<ErrorSeries> rows;
  for (auto& r : raw) {
    std::vector<MaybeReal> v;
    for (auto& x : r) {
      x = n(rng);
      v.push_back(x);
    }
    rows.push_back(errs(v));
  }
  auto mae = mean_absolute_error(rows);
  for (std::size_t j = 0; j < 8; ++j) {
    double s = 0;
    for (const auto& r : raw) s += std::abs(r[j]);
    CHECK(*mae.at(j) == doctest::Approx(s / 100.0).epsilon(1e-13));
  }
}

TEST_CASE("crps_ensemble basic cases") {
  std::vector<double> same(10, 0.7);
  CHECK(crps_ensemble(same, 0.7) == 0.0);
  std::vector<double> one{2.5};
  CHECK(crps_ensemble(one, -1.0) == doctest::Approx(3.5));
  CHECK_THROWS_AS(crps_ensemble(std::span<const double>{}, 0.0), EmptyInputError);
  std::vector<double> two{0.0, 1.0};
  // E|X-y| = 0.5, E|X-X'|/2 = 0.25
  CHECK(crps_ensemble(two, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("crps_ensemble matches quadrature for a 500-member Gaussian sample") {
  std::mt19937_64 rng(2024);
  auto members = oracle::normal_sample(rng, 500, 0.0, 1.0);
  const double fast = crps_ensemble(members, 0.3);
  const double slow = oracle::crps_quadrature(members, 0.3, 200000);
  CHECK(std::abs(fast - slow) <= 1e-6 * std::abs(slow));
}

TEST_CASE("crps_ensemble is nonnegative, zero only for a point mass, and scale equivariant") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 40);
  std::normal_distribution<double> n(0, 1);
  for (int c = 0; c < 200; ++c) {
    auto members = oracle::normal_sample(rng, static_cast<std::size_t>(size(rng)), n(rng), 1.0);
    const double y = n(rng);
    const double v = crps_ensemble(members, y);
    CHECK(v > 0.0);
    std::vector<double> scaled(members);
    for (auto& x : scaled) x *= 3.0;
    CHECK(crps_ensemble(scaled, 3.0 * y) == doctest::Approx(3.0 * v).epsilon(1e-12));
    std::vector<double> shifted(members);
    for (auto& x : shifted) x += 10.0;
    CHECK(crps_ensemble(shifted, y + 10.0) == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("single-member CRPS is the absolute error") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int c = 0; c < 1000; ++c) {
    const double x = u(rng);
    const double y = u(rng);
    std::vector<double> m{x};
    CHECK(std::abs(crps_ensemble(m, y) - std::abs(x - y)) <= 1e-12);
  }
}

TEST_CASE("crps_gaussian closed form") {
  const double expected = 2.0 / std::sqrt(2.0 * std::numbers::pi) - 1.0 / std::sqrt(std::numbers::pi);
  CHECK(crps_gaussian(GaussianDistribution(1.3, 1.0), 1.3) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.23370).epsilon(1e-4));
  CHECK(oracle::crps_gaussian_quadrature(1.3, 1.0, 1.3) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(crps_gaussian(GaussianDistribution(0.0, 1e-6), 0.0) < 1e-5);
  CHECK(crps_gaussian(GaussianDistribution(0.0, 2.0), 3.0) ==
        doctest::Approx(2.0 * crps_gaussian(GaussianDistribution(0.0, 1.0), 1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(GaussianDistribution(0.0, 0.0), DistributionError);
  CHECK_THROWS_AS(GaussianDistribution(0.0, -1.0), DistributionError);
}

TEST_CASE("crps_gaussian agrees with quadrature on random cases") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mu(-5, 5);
  std::uniform_real_distribution<double> sd(0.2, 5);
  std::uniform_real_distribution<double> z(-6, 6);
  for (int c = 0; c < 50; ++c) {
    const double m = mu(rng);
    const double s = sd(rng);
    const double y = m + z(rng) * s;
    CHECK(std::abs(crps_gaussian(GaussianDistribution(m, s), y) - oracle::crps_gaussian_quadrature(m, s, y)) <=
          1e-8);
  }
}

TEST_CASE("normal helpers") {
  CHECK(standard_normal_cdf(0.0) == 0.5);
  CHECK(standard_normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-7));
  CHECK(standard_normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("crps_series scores each lead and keeps missing leads") {
  EnsembleForecast ens(TimeAxis(0, "step", 3), {{0.0, 1.0, 2.0}, {1.0, 1.0, 4.0}});
  VerificationSeries ver(TimeAxis(0, "step", 3), {0.5, std::nullopt, 2.0});
  auto s = crps_series(ens, ver);
  CHECK(s.name() == ScoreName::CRPS);
  CHECK(*s.at(0) == doctest::Approx(0.25));
  CHECK_FALSE(s.at(1).has_value());
  CHECK(*s.at(2) == doctest::Approx(crps_ensemble(std::vector<double>{2.0, 4.0}, 2.0)));
}

TEST_CASE("crpss") {
  auto f = scores({0.3, 0.7}, ScoreName::CRPS);
  auto zeros = crpss(f, f);
  CHECK(*zeros.at(0) == 0.0);
  CHECK(*zeros.at(1) == 0.0);
  CHECK(*crpss(scores({0.0}, ScoreName::CRPS), scores({0.4}, ScoreName::CRPS)).at(0) == 1.0);
  CHECK(*crpss(scores({0.2}, ScoreName::CRPS), scores({0.1}, ScoreName::CRPS)).at(0) == doctest::Approx(-1.0));
  CHECK(*crpss(scores({0.0}, ScoreName::CRPS), scores({0.0}, ScoreName::CRPS)).at(0) == 1.0);
  CHECK_THROWS_AS(crpss(scores({0.1}, ScoreName::CRPS), scores({0.0}, ScoreName::CRPS)), DegenerateReferenceError);
  CHECK_THROWS_AS(crpss(scores({0.1}, ScoreName::CRPSS), scores({0.2}, ScoreName::CRPS)), OrientationError);
  CHECK_THROWS_AS(crpss(scores({0.1, 0.1}, ScoreName::CRPS), scores({0.2}, ScoreName::CRPS)), AxisError);
  auto missing = crpss(scores({std::nullopt}, ScoreName::CRPS), scores({0.5}, ScoreName::CRPS));
  CHECK_FALSE(missing.at(0).has_value());
  CHECK(missing.name() == ScoreName::CRPSS);
}

TEST_CASE("mae_skill_score") {
  auto f = scores({0.3, 0.7}, ScoreName::MAE);
  CHECK(*mae_skill_score(f, f).at(1) == 0.0);
  CHECK(*mae_skill_score(scores({0.5}, ScoreName::MAE), scores({1.0}, ScoreName::MAE)).at(0) == 0.5);
  CHECK(mae_skill_score(f, f).name() == ScoreName::MAESS);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 3);
  std::vector<MaybeReal> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back(u(rng));
    b.push_back(u(rng));
  }
  auto s = mae_skill_score(scores(a, ScoreName::MAE), scores(b, ScoreName::MAE));
  for (int i = 0; i < 200; ++i) CHECK(*s.at(i) == doctest::Approx(1.0 - *a[i] / *b[i]).epsilon(1e-14));
}
