#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace cfmimo {

// p-th percentile (p in [0, 100]) by linear interpolation between order
// statistics: rank r = p/100 * (n-1) on the sorted values.
double percentile_sorted(const std::vector<double>& sorted, double p);
double percentile(std::vector<double> values, double p);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
};

SummaryStats summarize(std::vector<double> values);

// Empirical CDF points: (sorted value, (i+1)/n).
std::vector<std::pair<double, double>> ecdf(std::vector<double> values);

// Kolmogorov-Smirnov statistic of the sample against a model CDF.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& model_cdf);

// Bootstrap confidence interval for a percentile: resamples with replacement
// and returns the (alpha/2, 1-alpha/2) quantiles of the resampled statistic.
std::pair<double, double> bootstrap_percentile_ci(const std::vector<double>& values, double p,
                                                  int resamples, double alpha,
                                                  std::mt19937_64& g);

}  // namespace cfmimo
