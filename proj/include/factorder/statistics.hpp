#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "factorder/error.hpp"

namespace factorder {

struct SignificanceConfig {
  double alpha = 0.005;
};

inline void validate_significance(const SignificanceConfig& config) {
  require(config.alpha > 0.0 && config.alpha < 1.0, ErrorKind::configuration,
          "alpha must lie strictly between 0 and 1");
}

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
  double p = 1.0;
  bool significant = false;
  bool degenerate_variance = false;  // all differences equal and non-zero
  double mean_difference = 0.0;
};

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
inline double two_tailed_p(double t, std::size_t df) {
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

inline double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Paired two-tailed t-test on per-fold scores a[i] vs b[i]; d = a - b.
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                                 const SignificanceConfig& config = {}) {
  validate_significance(config);
  require(a.size() == b.size(), ErrorKind::contract, "paired t-test on score lists of different length");
  require(a.size() >= 2, ErrorKind::contract, "paired t-test needs at least two pairs");
  const std::size_t k = a.size();
  std::vector<double> d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = a[i] - b[i];

  TTestResult r;
  r.df = k - 1;
  r.mean_difference = mean(d);
  // Tolerates rounding left over from subtracting fold accuracies.
  const bool all_equal =
      std::all_of(d.begin(), d.end(), [&](double x) { return std::fabs(x - d.front()) <= 1e-12; });
  if (all_equal) {
    if (std::fabs(d.front()) <= 1e-12) return r;  // t = 0, p = 1
    r.degenerate_variance = true;
    r.t = d.front() > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.significant = true;
    return r;
  }
  const double se = sample_sd(d) / std::sqrt(static_cast<double>(k));
  r.t = r.mean_difference / se;
  r.p = two_tailed_p(r.t, r.df);
  r.significant = r.p < config.alpha;
  return r;
}

}  // namespace factorder
