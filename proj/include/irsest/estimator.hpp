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

#ifndef IRSEST_ESTIMATOR_HPP
#define IRSEST_ESTIMATOR_HPP

// Row-wise shrinkage estimators of the equivalent channel from the
// decorrelated pilot observation Ytilde = G + noise, and the analytic bounds
// on their mean square error.
//
// Every estimator here multiplies row i of Ytilde by a scalar weight in
// [0, 1]; they differ only in how the weight is chosen:
//   conditional   c a_i^2 / (c a_i^2 + s2)          (scale a_i known)
//   mmse          E_prior[c a^2 / (c a^2 + s2)]     (closed form below)
//   asymptotic    M1 c / (M1 c + s2)                (Gaussian approximation)
//   posterior     E[c a^2 / (c a^2 + s2) | row]     (numerical, diagnostic)
// with c = beta_1,i beta_2 v^2 and s2 the noise variance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "irsest/channel.hpp"
#include "irsest/error.hpp"
#include "irsest/quadrature.hpp"
#include "irsest/rng.hpp"
#include "irsest/specfun.hpp"

namespace irsest {

enum class EstimatorKind { kConditional, kMmse, kAsymptotic, kPosterior };
enum class PilotMode { kDft, kShortcut };

inline std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kConditional: return "conditional";
    case EstimatorKind::kMmse: return "mmse";
    case EstimatorKind::kAsymptotic: return "asymptotic";
    case EstimatorKind::kPosterior: return "posterior";
  }
  return "?";
}

struct PilotBlock {
  ComplexMatrix pilot;         // N x N unitary
  ComplexMatrix received;      // Y = P G + noise
  ComplexMatrix decorrelated;  // P^H Y
  double noise_variance = 0.0;
};

struct EstimatorOutput {
  ComplexMatrix estimate;
  std::vector<double> weights;
  EstimatorKind kind = EstimatorKind::kMmse;
};

struct MseBounds {
  std::vector<double> per_user_lower;
  std::vector<double> per_user_upper;
  double aggregate_lower = 0.0;
  double aggregate_upper = 0.0;
  double aggregate_asymptotic = 0.0;
};

/// Unitary N x N DFT matrix, entries e^(-2 pi j r c / N) / sqrt(N).
inline ComplexMatrix dft_pilot(int n) {
  ComplexMatrix p(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      p(r, c) = std::polar(norm, -2.0 * std::numbers::pi *
                                     static_cast<double>((r * c) % n) / n);
  return p;
}

inline PilotBlock build_pilot_block(const ComplexMatrix& g,
                                    double noise_variance, PilotMode mode,
                                    RngStream& rng) {
  if (!(noise_variance >= 0.0))
    throw DomainError("build_pilot_block: noise variance must be >= 0");
  const auto n = g.rows();
  const auto m = g.cols();
  ComplexMatrix noise(n, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      noise(r, c) = complex_normal(rng, noise_variance);

  PilotBlock block;
  block.noise_variance = noise_variance;
  if (mode == PilotMode::kShortcut || n == 1) {
    block.pilot = ComplexMatrix::Identity(n, n);
    block.received = g + noise;
    block.decorrelated = block.received;
  } else {
    block.pilot = dft_pilot(static_cast<int>(n));
    block.received = block.pilot * g + noise;
    block.decorrelated = block.pilot.adjoint() * block.received;
  }
  return block;
}

namespace detail {

inline EstimatorOutput apply_weights(const PilotBlock& block,
                                     std::vector<double> weights,
                                     EstimatorKind kind) {
  EstimatorOutput out;
  out.kind = kind;
  out.estimate = block.decorrelated;
  for (Eigen::Index i = 0; i < out.estimate.rows(); ++i)
    out.estimate.row(i) *= weights[static_cast<std::size_t>(i)];
  out.weights = std::move(weights);
  return out;
}

inline void check_rows(const PilotBlock& block, const PathLossProfile& profile) {
  if (block.decorrelated.rows() != profile.num_users())
    throw DomainError("estimator: observation rows do not match users");
}

inline void check_m1(int m1) {
  if (m1 < 1) throw DomainError("estimator: M1 must be >= 1");
}

}  // namespace detail

/// Shrinkage given the per-row scale a_i.
inline EstimatorOutput conditional_mmse(const PilotBlock& block,
                                        const PathLossProfile& profile,
                                        double amplitude,
                                        std::span<const double> a) {
  detail::check_rows(block, profile);
  if (static_cast<int>(a.size()) != profile.num_users())
    throw DomainError("conditional_mmse: one scale per user required");
  std::vector<double> w(a.size());
  for (int i = 0; i < profile.num_users(); ++i) {
    const double ai = a[static_cast<std::size_t>(i)];
    if (!(ai >= 0.0)) throw DomainError("conditional_mmse: scales must be >= 0");
    const double signal = profile.channel_scale(i, amplitude) * ai * ai;
    const double denom = signal + block.noise_variance;
    w[static_cast<std::size_t>(i)] = denom > 0.0 ? signal / denom : 0.0;
  }
  return detail::apply_weights(block, std::move(w), EstimatorKind::kConditional);
}

/// Prior-averaged shrink factor M1 z^M1 Gamma(-M1, z) e^z with
/// z = noise_variance / channel_scale, evaluated in log-scaled form.
inline double mmse_weight(int num_irs_elements, double channel_scale,
                          double noise_variance) {
  detail::check_m1(num_irs_elements);
  if (!(channel_scale > 0.0) || !std::isfinite(channel_scale))
    throw DomainError("mmse_weight: channel scale must be > 0");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw DomainError("mmse_weight: noise variance must be >= 0");
  if (noise_variance == 0.0) return 1.0;
  const double m1 = num_irs_elements;
  const double z = noise_variance / channel_scale;
  if (z > 1e12 * m1) return m1 / z * (1.0 - (m1 + 1.0) / z);
  return std::min(1.0, m1 * std::exp(log_scaled_upper_gamma(-m1, z)));
}

inline double asymptotic_weight(int num_irs_elements, double channel_scale,
                                double noise_variance) {
  const double signal = num_irs_elements * channel_scale;
  const double denom = signal + noise_variance;
  return denom > 0.0 ? signal / denom : 0.0;
}

inline EstimatorOutput mmse_estimate(const PilotBlock& block,
                                     const PathLossProfile& profile,
                                     double amplitude, int num_irs_elements) {
  detail::check_rows(block, profile);
  detail::check_m1(num_irs_elements);
  std::vector<double> w(static_cast<std::size_t>(profile.num_users()));
  for (int i = 0; i < profile.num_users(); ++i) {
    const double c = profile.channel_scale(i, amplitude);
    // A zero channel is estimated as zero.
    w[static_cast<std::size_t>(i)] =
        c > 0.0 ? mmse_weight(num_irs_elements, c, block.noise_variance) : 0.0;
  }
  return detail::apply_weights(block, std::move(w), EstimatorKind::kMmse);
}

inline EstimatorOutput asymptotic_estimate(const PilotBlock& block,
                                           const PathLossProfile& profile,
                                           double amplitude,
                                           int num_irs_elements) {
  detail::check_rows(block, profile);
  detail::check_m1(num_irs_elements);
  std::vector<double> w(static_cast<std::size_t>(profile.num_users()));
  for (int i = 0; i < profile.num_users(); ++i)
    w[static_cast<std::size_t>(i)] =
        asymptotic_weight(num_irs_elements, profile.channel_scale(i, amplitude),
                          block.noise_variance);
  return detail::apply_weights(block, std::move(w), EstimatorKind::kAsymptotic);
}

/// Posterior-mean weight for one observed row: the conditional weight
/// averaged over p(u | row), u = a^2 ~ Gamma(M1, 1), given only
/// ||row||^2 and the row length M.
inline double posterior_weight(int num_irs_elements, double channel_scale,
                               double noise_variance, double row_energy,
                               int row_length) {
  detail::check_m1(num_irs_elements);
  if (!(channel_scale > 0.0)) return 0.0;
  if (noise_variance == 0.0) return 1.0;
  const double m1 = num_irs_elements;
  const double m = row_length;
  auto log_kernel = [&](double u) {
    const double var = channel_scale * u + noise_variance;
    return -m * std::log(var) - row_energy / var + (m1 - 1.0) * std::log(u) - u;
  };
  // Centre the kernel at its coarse maximum to keep exp() in range.
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = -40; k <= 40; ++k)
    peak = std::max(peak, log_kernel(m1 * std::ldexp(1.0, k) * 0.5));
  const QuadratureSpec spec{1e-10, 1e-300, 4000};
  const double den = integrate_half_line(
      [&](double u) { return std::exp(log_kernel(u) - peak); }, m1, spec).value;
  const double num = integrate_half_line(
      [&](double u) {
        const double s = channel_scale * u;
        return s / (s + noise_variance) * std::exp(log_kernel(u) - peak);
      },
      m1, spec).value;
  return std::clamp(num / den, 0.0, 1.0);
}

inline EstimatorOutput posterior_mean_estimate(const PilotBlock& block,
                                               const PathLossProfile& profile,
                                               double amplitude,
                                               int num_irs_elements) {
  detail::check_rows(block, profile);
  detail::check_m1(num_irs_elements);
  const auto& y = block.decorrelated;
  std::vector<double> w(static_cast<std::size_t>(profile.num_users()));
  for (int i = 0; i < profile.num_users(); ++i)
    w[static_cast<std::size_t>(i)] = posterior_weight(
        num_irs_elements, profile.channel_scale(i, amplitude),
        block.noise_variance, y.row(i).squaredNorm(),
        static_cast<int>(y.cols()));
  return detail::apply_weights(block, std::move(w), EstimatorKind::kPosterior);
}

/// Per-coefficient MSE bounds of the prior-averaged estimator: lower is
/// s2 * mmse_weight (the known-scale error averaged over the prior), upper
/// is M1 c s2 / (M1 c + s2), which is also the MSE of the asymptotic
/// estimator.
inline MseBounds mse_bounds(const PathLossProfile& profile, double amplitude,
                            int num_irs_elements, double noise_variance) {
  detail::check_m1(num_irs_elements);
  if (!(noise_variance >= 0.0))
    throw DomainError("mse_bounds: noise variance must be >= 0");
  MseBounds b;
  const int n = profile.num_users();
  b.per_user_lower.resize(static_cast<std::size_t>(n));
  b.per_user_upper.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double c = profile.channel_scale(i, amplitude);
    const auto k = static_cast<std::size_t>(i);
    if (c > 0.0 && noise_variance > 0.0) {
      b.per_user_lower[k] =
          noise_variance * mmse_weight(num_irs_elements, c, noise_variance);
      b.per_user_upper[k] =
          noise_variance * asymptotic_weight(num_irs_elements, c, noise_variance);
    } else {
      b.per_user_lower[k] = 0.0;
      b.per_user_upper[k] = 0.0;
    }
  }
  const double inv_n = 1.0 / n;
  b.aggregate_lower =
      std::accumulate(b.per_user_lower.begin(), b.per_user_lower.end(), 0.0) *
      inv_n;
  b.aggregate_upper =
      std::accumulate(b.per_user_upper.begin(), b.per_user_upper.end(), 0.0) *
      inv_n;
  b.aggregate_asymptotic = b.aggregate_upper;
  return b;
}

}  // namespace irsest

#endif  // IRSEST_ESTIMATOR_HPP
