// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace tracelab {

/// Point estimate with a delta-method standard error and a normal 95%
/// confidence interval. exact = true marks exhaustive evaluations, whose
/// standard error is zero by definition.
struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

namespace detail {
inline double power(double v, double r) {
  if (r == 1.0) return v;
  if (r == 2.0) return v * v;
  return std::pow(v, r);
}
}  // namespace detail

/// L_r moment root (mean of v^r)^{1/r} of nonnegative sample values. The
/// standard error comes from the delta method applied to the r-th moment.
inline EstimateReport moment_root_estimate(std::span<const double> values, double r,
                                           std::uint64_t seed, bool exact = false) {
  if (values.empty()) throw std::invalid_argument("moment_root_estimate: no samples");
  if (!(r > 0.0)) throw std::invalid_argument("moment_root_estimate: r must be positive");
  const double k = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += detail::power(v, r);
  mean /= k;

  EstimateReport rep;
  rep.samples = static_cast<std::int64_t>(values.size());
  rep.seed = seed;
  rep.exact = exact;
  rep.estimate = mean > 0.0 ? std::pow(mean, 1.0 / r) : 0.0;
  if (!exact && values.size() > 1 && mean > 0.0) {
    double ss = 0.0;
    for (double v : values) {
      const double d = detail::power(v, r) - mean;
      ss += d * d;
    }
    const double var_mean = ss / (k - 1.0) / k;
    rep.std_error = (1.0 / r) * std::pow(mean, 1.0 / r - 1.0) * std::sqrt(var_mean);
  }
  rep.ci95_low = rep.estimate - 1.96 * rep.std_error;
  rep.ci95_high = rep.estimate + 1.96 * rep.std_error;
  return rep;
}

}  // namespace tracelab
