#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hamcond {

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct ChiSquare {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};

/// Goodness of fit of observed counts against expected counts (same length).
ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected);

/// Observed counts against the uniform law on the same cells.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> observed);

/// Histogram of non-negative counts against Poisson(mean); the upper tail
/// is pooled so that every cell expects at least `min_expected`.
ChiSquare chi_square_poisson(std::span<const std::uint64_t> histogram, double mean, double min_expected = 5.0);

double mean_of(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double variance_of(std::span<const double> xs);

}  // namespace hamcond
