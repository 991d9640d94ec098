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

#ifndef IRSEST_STATS_HPP
#define IRSEST_STATS_HPP

// Closed-form laws of the equivalent channel: characteristic function and
// density of one entry, density of one row, and the scale prior of the
// Gaussian-scale-mixture representation. Densities are evaluated in log
// space so that channel scales near 1e-17 stay representable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "irsest/error.hpp"
#include "irsest/quadrature.hpp"
#include "irsest/specfun.hpp"

namespace irsest {

struct BesselKChannelDist {
  int num_irs_elements = 1;
  double channel_scale = 1.0;  // c = beta_1,i beta_2 v^2
  int num_bs_antennas = 1;

  void validate() const {
    if (num_irs_elements < 1 || num_bs_antennas < 1)
      throw DomainError("BesselKChannelDist: counts must be >= 1");
    if (!(channel_scale > 0.0) || !std::isfinite(channel_scale))
      throw DomainError("BesselKChannelDist: channel scale must be > 0");
  }
};

/// (1 + (c/4)(t1^2 + t2^2))^-M1.
inline double charfun(const BesselKChannelDist& dist, double t1, double t2) {
  dist.validate();
  const double r2 = t1 * t1 + t2 * t2;
  return std::exp(-dist.num_irs_elements *
                  std::log1p(0.25 * dist.channel_scale * r2));
}

/// Log density of one entry g = g1 + j g2 with respect to dg1 dg2.
inline double log_pdf_entry(const BesselKChannelDist& dist, double g1,
                            double g2) {
  dist.validate();
  const int m1 = dist.num_irs_elements;
  const double c = dist.channel_scale;
  const double r = std::hypot(g1, g2);
  if (!std::isfinite(r)) throw DomainError("log_pdf_entry: non-finite point");
  if (r == 0.0) {
    if (m1 == 1)
      throw DomainError("log_pdf_entry: density is singular at 0 for M1 = 1");
    // |g|^n K_n(2|g|/sqrt(c)) -> Gamma(n) c^(n/2) / 2.
    return -std::log(std::numbers::pi * (m1 - 1) * c);
  }
  return std::numbers::ln2 + (m1 - 1) * std::log(r) -
         std::log(std::numbers::pi) - std::lgamma(m1) -
         0.5 * (m1 + 1) * std::log(c) +
         log_bessel_k(m1 - 1, 2.0 * r / std::sqrt(c));
}

/// Log density of an M-dimensional complex row at any point of norm
/// `row_norm`; the law is isotropic. The Bessel order M1 - M may be negative.
inline double log_pdf_row(const BesselKChannelDist& dist, double row_norm) {
  dist.validate();
  if (!(row_norm > 0.0) || !std::isfinite(row_norm))
    throw DomainError("log_pdf_row: row norm must be > 0");
  const int m1 = dist.num_irs_elements;
  const int m = dist.num_bs_antennas;
  const double c = dist.channel_scale;
  return std::numbers::ln2 + (m1 - m) * std::log(row_norm) -
         m * std::log(std::numbers::pi) - std::lgamma(m1) -
         0.5 * (m + m1) * std::log(c) +
         log_bessel_k(m1 - m, 2.0 * row_norm / std::sqrt(c));
}

/// ln p_A(a) = ln(2 a^(2 M1 - 1) e^(-a^2) / Gamma(M1)).
inline double log_pdf_scale(int num_irs_elements, double a) {
  if (num_irs_elements < 1) throw DomainError("log_pdf_scale: M1 must be >= 1");
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("log_pdf_scale: a must be > 0");
  return std::numbers::ln2 + (2.0 * num_irs_elements - 1.0) * std::log(a) -
         a * a - std::lgamma(num_irs_elements);
}

// Density of |g| for one entry: 2 pi r p(r).
inline double entry_norm_density(const BesselKChannelDist& dist, double r) {
  if (r <= 0.0) return 0.0;
  return 2.0 * std::numbers::pi * r * std::exp(log_pdf_entry(dist, r, 0.0));
}

// Density of ||g_i||: the row density times the surface measure
// 2 pi^M r^(2M - 1) / Gamma(M) of the sphere in C^M.
inline double row_norm_density(const BesselKChannelDist& dist, double r) {
  if (r <= 0.0) return 0.0;
  const int m = dist.num_bs_antennas;
  return std::exp(std::numbers::ln2 + m * std::log(std::numbers::pi) +
                  (2.0 * m - 1.0) * std::log(r) - std::lgamma(m) +
                  log_pdf_row(dist, r));
}

/// Max over probe points of |mean(exp(j(t1 Re s + t2 Im s))) - charfun|.
inline double empirical_charfun_check(
    std::span<const std::complex<double>> samples,
    const BesselKChannelDist& dist,
    std::span<const std::pair<double, double>> probes) {
  if (samples.empty())
    throw DomainError("empirical_charfun_check: no samples");
  double worst = 0.0;
  for (const auto& [t1, t2] : probes) {
    double re = 0.0;
    double im = 0.0;
    for (const auto& s : samples) {
      const double phase = t1 * s.real() + t2 * s.imag();
      re += std::cos(phase);
      im += std::sin(phase);
    }
    const double n = static_cast<double>(samples.size());
    const std::complex<double> empirical(re / n, im / n);
    worst = std::max(worst, std::abs(empirical - charfun(dist, t1, t2)));
  }
  return worst;
}

// CDF of a density on (0, inf), tabulated by quadrature on a log-spaced grid
// and interpolated by monotone cubic Hermite segments whose slopes are the
// density itself. Immutable after construction.
class RadialCdf {
 public:
  template <class Density>
  RadialCdf(Density&& density, double lo, double hi, std::size_t points = 2048,
            const QuadratureSpec& spec = {1e-10, 1e-300, 4000}) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
      throw DomainError("RadialCdf: need 0 < lo < hi and >= 2 points");
    nodes_.resize(points);
    cdf_.resize(points);
    slope_.resize(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k)
      nodes_[k] = lo * std::exp(step * static_cast<double>(k));
    nodes_.back() = hi;

    double acc = integrate(density, 0.0, lo, spec).value;
    cdf_[0] = acc;
    for (std::size_t k = 1; k < points; ++k) {
      acc += integrate(density, nodes_[k - 1], nodes_[k], spec).value;
      cdf_[k] = acc;
    }
    const double tail =
        integrate_half_line([&](double t) { return density(hi + t); },
                            hi, spec)
            .value;
    total_ = acc + tail;
    for (std::size_t k = 0; k < points; ++k) {
      cdf_[k] /= total_;
      slope_[k] = density(nodes_[k]) / total_;
    }
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    if (r < nodes_.front()) return cdf_.front() * (r / nodes_.front());
    if (r >= nodes_.back()) {
      // Beyond the table: close the remaining mass linearly over one width.
      const double rest = 1.0 - cdf_.back();
      const double width = nodes_.back() - nodes_[nodes_.size() - 2];
      return std::min(1.0, cdf_.back() + rest * (r - nodes_.back()) / width);
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double h = nodes_[k + 1] - nodes_[k];
    const double s = (r - nodes_[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    // Increment form keeps rounding relative to the segment rise, not to 1.
    const double rise = (-2 * s3 + 3 * s2) * (cdf_[k + 1] - cdf_[k]) +
                        (s3 - 2 * s2 + s) * h * slope_[k] +
                        (s3 - s2) * h * slope_[k + 1];
    return cdf_[k] + std::clamp(rise, 0.0, cdf_[k + 1] - cdf_[k]);
  }

  // Integral of the density before normalization; 1 for a proper density.
  double total_mass() const { return total_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> cdf_;
  std::vector<double> slope_;
  double total_ = 0.0;
};

// CDF of |g_ik|, grid spanning the scale sqrt(M1 c).
inline RadialCdf entry_norm_cdf(const BesselKChannelDist& dist,
                                std::size_t points = 2048) {
  dist.validate();
  const double s = std::sqrt(dist.num_irs_elements * dist.channel_scale);
  return RadialCdf([dist](double r) { return entry_norm_density(dist, r); },
                   1e-6 * s, 12.0 * s + 20.0 * std::sqrt(dist.channel_scale),
                   points);
}

// CDF of ||g_i||, grid spanning the scale sqrt(M1 M c).
inline RadialCdf row_norm_cdf(const BesselKChannelDist& dist,
                              std::size_t points = 2048) {
  dist.validate();
  const double s = std::sqrt(static_cast<double>(dist.num_irs_elements) *
                             dist.num_bs_antennas * dist.channel_scale);
  return RadialCdf([dist](double r) { return row_norm_density(dist, r); },
                   1e-6 * s, 12.0 * s + 20.0 * std::sqrt(dist.channel_scale),
                   points);
}

}  // namespace irsest

#endif  // IRSEST_STATS_HPP
