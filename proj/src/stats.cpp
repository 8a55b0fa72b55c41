#include "hamcond/stats.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "hamcond/error.hpp"

namespace hamcond {

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) throw Error(ErrorCode::InvalidArgument, "chi_square: size mismatch");
  ChiSquare result;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) throw Error(ErrorCode::InvalidArgument, "chi_square: non-positive expectation");
    const double diff = observed[i] - expected[i];
    result.statistic += diff * diff / expected[i];
  }
  result.dof = observed.size() > 1 ? observed.size() - 1 : 0;
  if (result.dof == 0) {
    result.p_value = 1;
  } else {
    const boost::math::chi_squared dist(static_cast<double>(result.dof));
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  }
  return result;
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> observed) {
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> expected(observed.size(), total / static_cast<double>(observed.size()));
  return chi_square(obs, expected);
}

ChiSquare chi_square_poisson(std::span<const std::uint64_t> histogram, double mean, double min_expected) {
  const double total = std::accumulate(histogram.begin(), histogram.end(), 0.0);
  std::vector<double> obs, expected;
  double pmf = std::exp(-mean), cumulative = 0, pending_obs = 0, pending_exp = 0;
  for (std::size_t k = 0;; ++k) {
    const double count = k < histogram.size() ? static_cast<double>(histogram[k]) : 0.0;
    const double tail_after = 1 - cumulative - pmf;
    pending_obs += count;
    pending_exp += total * pmf;
    cumulative += pmf;
    pmf *= mean / static_cast<double>(k + 1);
    // Close the cell once it is large enough and the rest can form one more.
    if (pending_exp >= min_expected && total * tail_after >= min_expected) {
      obs.push_back(pending_obs);
      expected.push_back(pending_exp);
      pending_obs = pending_exp = 0;
      continue;
    }
    if (total * tail_after < min_expected && k + 1 >= histogram.size()) {
      double rest = 0;
      for (std::size_t j = k + 1; j < histogram.size(); ++j) rest += static_cast<double>(histogram[j]);
      pending_obs += rest;
      pending_exp += total * std::max(tail_after, 0.0);
      obs.push_back(pending_obs);
      expected.push_back(pending_exp);
      break;
    }
  }
  // A lone pooled cell folds into its neighbour when too small.
  while (expected.size() > 1 && expected.back() < min_expected) {
    expected[expected.size() - 2] += expected.back();
    obs[obs.size() - 2] += obs.back();
    expected.pop_back();
    obs.pop_back();
  }
  return chi_square(obs, expected);
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  const double mu = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace hamcond
