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

#ifndef IRSEST_MC_HPP
#define IRSEST_MC_HPP

// Seeded Monte Carlo harness: per-trial channel draw, pilot observation,
// estimation and squared error, with the analytic bounds of the same
// geometry alongside. Trial t of point p always uses the streams derived
// from (master_seed, p, t), so the worker count never changes a result.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "irsest/channel.hpp"
#include "irsest/config.hpp"
#include "irsest/error.hpp"
#include "irsest/estimator.hpp"
#include "irsest/rng.hpp"

namespace irsest {

enum class SweepAxis { kIrsElements, kSnrDb, kAmplitude };

inline std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kIrsElements: return "irs_elements";
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kAmplitude: return "amplitude";
  }
  return "?";
}

struct RunOptions {
  bool resample_geometry = false;
  PilotMode pilot_mode = PilotMode::kShortcut;
  unsigned workers = 1;  // 0 = hardware concurrency
  std::uint64_t point_index = 0;
};

struct MseRecord {
  double axis_value = 0.0;
  double mse_empirical = 0.0;
  double mse_stderr = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double mse_asymptotic = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::kIrsElements;
  std::vector<double> values;
  std::size_t trials = 10000;
  SystemConfig base_config;
  EstimatorKind estimator_kind = EstimatorKind::kMmse;
  bool resample_geometry = false;
  PilotMode pilot_mode = PilotMode::kShortcut;
  unsigned workers = 1;

  void validate() const {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    if (trials < 1) throw ConfigError("sweep needs trials >= 1");
    const bool up = values.size() < 2 || values[1] > values[0];
    for (std::size_t k = 1; k < values.size(); ++k)
      if (up ? !(values[k] > values[k - 1]) : !(values[k] < values[k - 1]))
        throw ConfigError("sweep values must be strictly monotone");
  }
};

/// (1 / (N M)) sum |estimate - truth|^2.
inline double empirical_mse(const ComplexMatrix& truth,
                            const ComplexMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    throw DomainError("empirical_mse: shape mismatch");
  if (truth.size() == 0) throw DomainError("empirical_mse: empty matrices");
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

namespace detail {

// Pairwise summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

inline unsigned resolve_workers(unsigned requested, std::size_t trials) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency())
                              : requested;
  return static_cast<unsigned>(std::min<std::size_t>(w, trials));
}

struct TrialResult {
  double mse = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

inline TrialResult run_trial(const SystemConfig& config, EstimatorKind kind,
                             const RunOptions& options,
                             const PathLossProfile* fixed_profile,
                             const MseBounds* fixed_bounds,
                             std::uint64_t trial) {
  const std::uint64_t seed = config.master_seed;
  const double sigma2 = config.resolved_noise_variance();
  const double v = config.scattering_amplitude;
  const int m1 = config.num_irs_elements;

  PathLossProfile drawn;
  const PathLossProfile* profile = fixed_profile;
  if (profile == nullptr) {
    auto geometry =
        derive_stream(seed, options.point_index, trial, StreamPurpose::kGeometry);
    drawn = draw_path_loss_profile(config, geometry);
    profile = &drawn;
  }

  auto channel_rng =
      derive_stream(seed, options.point_index, trial, StreamPurpose::kChannel);
  const ChannelRealization channel =
      synthesize_channel(config, *profile, channel_rng);
  auto noise_rng =
      derive_stream(seed, options.point_index, trial, StreamPurpose::kNoise);
  const PilotBlock block =
      build_pilot_block(channel.g, sigma2, options.pilot_mode, noise_rng);

  EstimatorOutput est;
  switch (kind) {
    case EstimatorKind::kConditional: {
      const auto a = channel.row_scales();
      est = conditional_mmse(block, *profile, v, a);
      break;
    }
    case EstimatorKind::kMmse:
      est = mmse_estimate(block, *profile, v, m1);
      break;
    case EstimatorKind::kAsymptotic:
      est = asymptotic_estimate(block, *profile, v, m1);
      break;
    case EstimatorKind::kPosterior:
      est = posterior_mean_estimate(block, *profile, v, m1);
      break;
  }

  TrialResult r;
  r.mse = empirical_mse(channel.g, est.estimate);
  if (fixed_bounds != nullptr) {
    r.lower = fixed_bounds->aggregate_lower;
    r.upper = fixed_bounds->aggregate_upper;
  } else {
    const MseBounds b = mse_bounds(*profile, v, m1, sigma2);
    r.lower = b.aggregate_lower;
    r.upper = b.aggregate_upper;
  }
  return r;
}

}  // namespace detail

/// Runs `trials` independent trials of one configuration. Bounds come from
/// the same geometry as the trials (averaged when geometry is resampled).
inline MseRecord run_point(const SystemConfig& config, EstimatorKind kind,
                           std::size_t trials, const RunOptions& options = {}) {
  config.validate();
  if (trials < 2) throw DomainError("run_point: need at least 2 trials");

  PathLossProfile fixed_profile;
  MseBounds fixed_bounds;
  const bool fixed = !options.resample_geometry;
  if (fixed) {
    // Shared by every point of a sweep: independent of point_index.
    auto geometry = derive_stream(config.master_seed, 0, 0,
                                  StreamPurpose::kGeometry);
    fixed_profile = draw_path_loss_profile(config, geometry);
    fixed_bounds =
        mse_bounds(fixed_profile, config.scattering_amplitude,
                   config.num_irs_elements, config.resolved_noise_variance());
  }

  std::vector<double> mse(trials);
  std::vector<double> lower(trials);
  std::vector<double> upper(trials);
  const unsigned workers = detail::resolve_workers(options.workers, trials);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    const std::size_t begin = trials * w / workers;
    const std::size_t end = trials * (w + 1) / workers;
    try {
      for (std::size_t t = begin; t < end; ++t) {
        const auto r = detail::run_trial(
            config, kind, options, fixed ? &fixed_profile : nullptr,
            fixed ? &fixed_bounds : nullptr, t);
        mse[t] = r.mse;
        lower[t] = r.lower;
        upper[t] = r.upper;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const double n = static_cast<double>(trials);
  MseRecord rec;
  rec.trials = trials;
  rec.seed = config.master_seed;
  rec.mse_empirical = detail::pairwise_sum(mse) / n;
  std::vector<double> dev(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const double d = mse[t] - rec.mse_empirical;
    dev[t] = d * d;
  }
  rec.mse_stderr = std::sqrt(detail::pairwise_sum(dev) / (n - 1.0) / n);
  rec.lower_bound = detail::pairwise_sum(lower) / n;
  rec.upper_bound = detail::pairwise_sum(upper) / n;
  rec.mse_asymptotic = rec.upper_bound;
  return rec;
}

/// Applies one axis value to a copy of the base configuration.
inline SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis,
                               double value) {
  SystemConfig c = base;
  switch (axis) {
    case SweepAxis::kIrsElements:
      if (!(value >= 1.0) || value != std::floor(value))
        throw ConfigError("irs_elements values must be positive integers");
      c.num_irs_elements = static_cast<int>(value);
      break;
    case SweepAxis::kSnrDb:
      c.set_snr_db(value);
      break;
    case SweepAxis::kAmplitude:
      c.scattering_amplitude = value;
      break;
  }
  c.validate();
  return c;
}

/// One record per axis value. A point that throws is returned with
/// `failed` set and NaN statistics; the remaining points still run.
inline std::vector<MseRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<MseRecord> out;
  out.reserve(spec.values.size());
  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    const double value = spec.values[p];
    RunOptions options;
    options.resample_geometry = spec.resample_geometry;
    options.pilot_mode = spec.pilot_mode;
    options.workers = spec.workers;
    options.point_index = p;
    try {
      const SystemConfig c = apply_axis(spec.base_config, spec.axis, value);
      MseRecord r = run_point(c, spec.estimator_kind, spec.trials, options);
      r.axis_value = value;
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      MseRecord r;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      r.axis_value = value;
      r.mse_empirical = r.mse_stderr = r.lower_bound = r.upper_bound =
          r.mse_asymptotic = nan;
      r.trials = spec.trials;
      r.seed = spec.base_config.master_seed;
      r.failed = true;
      r.failure = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace irsest

#endif  // IRSEST_MC_HPP
