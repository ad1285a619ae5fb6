#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "horizonkit/limits.hpp"

namespace horizonkit::oracle {

inline double heaviside(double x) { return x < 0.0 ? 0.0 : 1.0; }

/// Integral of [P(x) - H(x - y)]^2 by composite midpoint quadrature on a
/// grid over [min - 5 sd, max + 5 sd] refined at every jump of the
/// integrand, with at least `nodes` nodes in total. P is the empirical CDF,
/// counted by walking the sorted members along the grid.
inline double crps_quadrature(const std::vector<double>& members, double y, std::size_t nodes = 100000) {
  std::vector<double> sorted(members);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts(sorted);
  cuts.push_back(y);
  std::sort(cuts.begin(), cuts.end());
  double mean = 0.0;
  for (double v : members) mean += v;
  mean /= static_cast<double>(members.size());
  double var = 0.0;
  for (double v : members) var += (v - mean) * (v - mean);
  const double sd = std::max(std::sqrt(var / static_cast<double>(members.size())), 1.0);
  const double lo = cuts.front() - 5.0 * sd;
  const double hi = cuts.back() + 5.0 * sd;
  cuts.insert(cuts.begin(), lo);
  cuts.push_back(hi);

  const double m = static_cast<double>(sorted.size());
  std::size_t below = 0;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    if (!(b > a)) continue;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(nodes * (b - a) / (hi - lo))));
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = a + (static_cast<double>(k) + 0.5) * h;
      while (below < sorted.size() && sorted[below] <= x) ++below;
      const double d = static_cast<double>(below) / m - heaviside(x - y);
      total += d * d * h;
    }
  }
  return total;
}

/// Integral of [Phi((x - mu)/sigma) - H(x - y)]^2 by composite Simpson on
/// either side of the observation.
inline double crps_gaussian_quadrature(double mu, double sigma, double y, std::size_t intervals = 20000) {
  auto phi = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0))); };
  auto simpson = [&](double a, double b, auto&& f) {
    const double h = (b - a) / static_cast<double>(intervals);
    double s = f(a) + f(b);
    for (std::size_t k = 1; k < intervals; ++k) {
      s += f(a + static_cast<double>(k) * h) * (k % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
  };
  const double lo = std::min(mu - 14.0 * sigma, y - sigma);
  const double hi = std::max(mu + 14.0 * sigma, y + sigma);
  const double left = simpson(lo, y, [&](double x) { return phi(x) * phi(x); });
  const double right = simpson(y, hi, [&](double x) { return (1.0 - phi(x)) * (1.0 - phi(x)); });
  return left + right;
}

/// Step-function scan: gamma_t = 1 where the tolerance condition fails.
/// Returns (status, first failing lead).
struct NaiveLimit {
  LimitStatus status;
  std::size_t lead;
};

inline NaiveLimit naive_scan(const std::vector<std::optional<double>>& score, const std::vector<double>& rho,
                             bool at_most) {
  bool evaluated = false;
  for (std::size_t t = 0; t < score.size(); ++t) {
    if (!score[t] || std::isnan(rho[t])) continue;
    const int gamma = at_most ? (*score[t] > rho[t] ? 1 : 0) : (*score[t] < rho[t] ? 1 : 0);
    if (gamma == 1) return {evaluated ? LimitStatus::Crossed : LimitStatus::NeverAcceptable, t + 1};
    evaluated = true;
  }
  return {LimitStatus::NotReached, score.size()};
}

inline std::vector<double> normal_sample(std::mt19937_64& rng, std::size_t n, double mean, double sd) {
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> out(n);
  for (double& v : out) v = d(rng);
  return out;
}

}  // namespace horizonkit::oracle
