#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace soc {

/// One-sided exact sign test: P(X >= successes) for X ~ Binomial(trials, 1/2).
inline double sign_test_p_value(int successes, int trials) {
  if (trials <= 0) return 1.0;
  double p = 0.0;
  for (int k = successes; k <= trials; ++k) {
    p += std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) -
                  trials * std::log(2.0));
  }
  return std::min(1.0, p);
}

struct PairedComparison {
  int lower = 0;   // pairs where the first sample is strictly lower
  int higher = 0;  // pairs where it is strictly higher
  int ties = 0;
  double p_value = 1.0;  // one-sided, H1: first tends to be lower
};

inline PairedComparison compare_paired(const std::vector<double>& first,
                                       const std::vector<double>& second) {
  PairedComparison c;
  const std::size_t n = std::min(first.size(), second.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] < second[i]) {
      ++c.lower;
    } else if (first[i] > second[i]) {
      ++c.higher;
    } else {
      ++c.ties;
    }
  }
  c.p_value = sign_test_p_value(c.lower, c.lower + c.higher);
  return c;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace soc
