// Copyright 2026 The irsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSEST_GOF_HPP
#define IRSEST_GOF_HPP

// Goodness-of-fit statistics used to compare sampled channels with the
// closed-form laws: one- and two-sample Kolmogorov-Smirnov and a chi-square
// test on probability-integral-transformed samples.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "irsest/error.hpp"
#include "irsest/specfun.hpp"

namespace irsest {

struct TestOutcome {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// p-value of a KS distance with effective sample size n_eff (Stephens'
// small-sample correction).
inline double ks_p_value(double distance, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * distance);
}

template <class Cdf>
TestOutcome ks_one_sample(std::vector<double> samples, const Cdf& cdf) {
  if (samples.empty()) throw DomainError("ks_one_sample: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, ks_p_value(d, n)};
}

inline TestOutcome ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

// Pearson chi-square with `bins` equiprobable cells under `cdf`.
template <class Cdf>
TestOutcome chi_square_equiprobable(std::span<const double> samples,
                                    const Cdf& cdf, int bins) {
  if (samples.empty() || bins < 2)
    throw DomainError("chi_square_equiprobable: need samples and >= 2 bins");
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double x : samples) {
    const double u = std::clamp(cdf(x), 0.0, 1.0);
    const int k = std::min(bins - 1, static_cast<int>(u * bins));
    counts[static_cast<std::size_t>(k)] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  return {stat, regularized_upper_gamma(0.5 * (bins - 1), 0.5 * stat)};
}

}  // namespace irsest

#endif  // IRSEST_GOF_HPP
