#include "cfmimo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile: empty sample");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: p must lie in [0, 100]");
  if (sorted.size() == 1) return sorted.front();
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return percentile_sorted(values, p);
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty sample");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = percentile_sorted(values, 50.0);
  s.p5 = percentile_sorted(values, 5.0);
  s.p95 = percentile_sorted(values, 95.0);
  return s;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> points;
  points.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    points.emplace_back(values[i], static_cast<double>(i + 1) / n);
  return points;
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& model_cdf) {
  if (values.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = model_cdf(values[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

std::pair<double, double> bootstrap_percentile_ci(const std::vector<double>& values, double p,
                                                  int resamples, double alpha,
                                                  std::mt19937_64& g) {
  if (values.empty()) throw std::invalid_argument("bootstrap: empty sample");
  if (resamples < 2) throw std::invalid_argument("bootstrap: need at least two resamples");
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> stat(resamples);
  std::vector<double> sample(values.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& v : sample) v = values[pick(g)];
    stat[r] = percentile(sample, p);
  }
  std::sort(stat.begin(), stat.end());
  return {percentile_sorted(stat, 100.0 * alpha / 2.0),
          percentile_sorted(stat, 100.0 * (1.0 - alpha / 2.0))};
}

}  // namespace cfmimo
