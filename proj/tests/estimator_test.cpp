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

#include "irsest/estimator.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace irsest {
namespace {

using testing::kWeightM1OneZOne;
using testing::kWeightM1TenZOne;
using testing::relative_error;

// Users with channel scale c_i = beta1[i] at unit amplitude.
PathLossProfile profile_with_scales(std::vector<double> scales) {
  PathLossProfile p;
  p.beta1 = std::move(scales);
  p.beta2 = 1.0;
  p.user_distances.assign(p.beta1.size(), 1.0);
  return p;
}

ComplexMatrix random_channel(int n, int m, std::uint64_t seed) {
  auto rng = derive_stream(seed, 0, 0, StreamPurpose::kChannel);
  ComplexMatrix g(n, m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = complex_normal(rng);
  return g;
}

TEST(PilotBlock, DftIsUnitary) {
  for (int n : {1, 2, 5, 20}) {
    const auto p = dft_pilot(n);
    EXPECT_LT((p.adjoint() * p - ComplexMatrix::Identity(n, n)).norm(), 1e-13);
  }
}

TEST(PilotBlock, NoiselessDftRecoversChannel) {
  const auto g = random_channel(5, 3, 1);
  auto rng = derive_stream(1, 0, 0, StreamPurpose::kNoise);
  const auto b = build_pilot_block(g, 0.0, PilotMode::kDft, rng);
  EXPECT_LT((b.decorrelated - g).norm(), 1e-13 * g.norm());
  EXPECT_LT((b.received - b.pilot * g).norm(), 1e-13 * g.norm());
}

TEST(PilotBlock, SingleUserUsesUnitPilot) {
  const auto g = random_channel(1, 4, 2);
  auto rng = derive_stream(2, 0, 0, StreamPurpose::kNoise);
  const auto b = build_pilot_block(g, 0.5, PilotMode::kDft, rng);
  EXPECT_EQ(b.pilot.rows(), 1);
  EXPECT_EQ(b.pilot(0, 0), std::complex<double>(1.0, 0.0));
  EXPECT_TRUE((b.received.array() == b.decorrelated.array()).all());
}

TEST(PilotBlock, NoiseVarianceMatchesInBothModes) {
  const double s2 = 0.7;
  const auto g = random_channel(4, 2, 3);
  for (PilotMode mode : {PilotMode::kDft, PilotMode::kShortcut}) {
    auto rng = derive_stream(3, static_cast<int>(mode), 0, StreamPurpose::kNoise);
    double sum = 0.0, sum2 = 0.0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) {
      const auto b = build_pilot_block(g, s2, mode, rng);
      const double e = std::norm(b.decorrelated(2, 1) - g(2, 1));
      sum += e;
      sum2 += e * e;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / (draws - 1));
    EXPECT_NEAR(mean, s2, 3 * se);
  }
}

TEST(PilotBlock, RejectsNegativeNoise) {
  RngStream rng(1);
  EXPECT_THROW(build_pilot_block(random_channel(2, 2, 1), -1.0,
                                 PilotMode::kShortcut, rng),
               DomainError);
}

PilotBlock observed(const ComplexMatrix& y, double s2) {
  PilotBlock b;
  b.pilot = ComplexMatrix::Identity(y.rows(), y.rows());
  b.received = b.decorrelated = y;
  b.noise_variance = s2;
  return b;
}

TEST(ConditionalMmse, Examples) {
  const auto y = random_channel(2, 3, 4);
  const auto p = profile_with_scales({1.0, 2.0});
  const std::vector<double> a = {1.0, 0.5};

  auto out = conditional_mmse(observed(y, 0.0), p, 1.0, a);
  EXPECT_EQ(out.weights, (std::vector<double>{1.0, 1.0}));
  EXPECT_TRUE((out.estimate.array() == y.array()).all());

  out = conditional_mmse(observed(y, 1.0), p, 1.0, std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(out.weights[0], 0.5);
  EXPECT_EQ(out.kind, EstimatorKind::kConditional);

  out = conditional_mmse(observed(y, 1.0), p, 1.0, std::vector<double>{1e-200, 0.0});
  EXPECT_EQ(out.weights[0], 0.0);
  EXPECT_EQ(out.estimate.norm(), 0.0);
}

TEST(MmseWeight, Examples) {
  EXPECT_EQ(mmse_weight(7, 1.0, 0.0), 1.0);
  EXPECT_LT(relative_error(mmse_weight(1, 1.0, 1.0), kWeightM1OneZOne), 1e-12);
  EXPECT_NEAR(mmse_weight(1, 1.0, 1.0), 0.4036527, 1e-7);
  const double w10 = mmse_weight(10, 1.0, 1.0);
  EXPECT_LT(w10, 10.0 / 11.0);
  EXPECT_GT(w10, 0.85);
  EXPECT_LT(relative_error(w10, kWeightM1TenZOne), 1e-12);
}

TEST(MmseWeight, Errors) {
  EXPECT_THROW(mmse_weight(1, 0.0, 1.0), DomainError);
  EXPECT_THROW(mmse_weight(1, -1.0, 1.0), DomainError);
  EXPECT_THROW(mmse_weight(0, 1.0, 1.0), DomainError);
  EXPECT_THROW(mmse_weight(1, 1.0, -1.0), DomainError);
}

TEST(MmseWeight, MatchesPriorAverageOnGrid) {
  for (int m1 = 1; m1 <= 20; ++m1) {
    for (double z : {1e-3, 0.1, 1.0, 10.0, 1e3, 1e6}) {
      const double want = testing::prior_weight_by_quadrature(m1, z);
      EXPECT_LT(relative_error(mmse_weight(m1, 1.0, z), want), 1e-8)
          << "M1=" << m1 << " z=" << z;
      // Only the ratio sigma^2 / c matters.
      EXPECT_LT(relative_error(mmse_weight(m1, 1e-17, z * 1e-17), want), 1e-8);
    }
  }
}

TEST(MmseWeight, LimitsInNoise) {
  EXPECT_NEAR(mmse_weight(3, 1.0, 1e-12), 1.0, 1e-10);
  for (int m1 : {1, 5, 20}) {
    const double z = 1e14;
    EXPECT_LT(relative_error(mmse_weight(m1, 1.0, z), m1 / z), 1e-10);
    EXPECT_LT(relative_error(mmse_weight(m1, 1.0, 1e18), m1 / 1e18), 1e-12);
  }
}

TEST(MmseWeight, JensenOrdering) {
  for (int m1 : {1, 2, 5, 10, 20})
    for (double z : {1e-3, 0.1, 1.0, 10.0, 1e3})
      EXPECT_LT(mmse_weight(m1, 1.0, z), asymptotic_weight(m1, 1.0, z))
          << "M1=" << m1 << " z=" << z;
}

TEST(MmseWeight, Monotonicity) {
  for (int m1 = 1; m1 < 20; ++m1) {
    const std::vector<double> zs = {1e-3, 0.1, 1.0, 10.0, 1e3, 1e6};
    for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
      EXPECT_GT(mmse_weight(m1, 1.0, zs[k]), mmse_weight(m1, 1.0, zs[k + 1]));
      EXPECT_LT(mmse_weight(m1, 1.0 / zs[k + 1], 1.0),
                mmse_weight(m1, 1.0 / zs[k], 1.0));
      EXPECT_LT(mmse_weight(m1, 1.0, zs[k]), mmse_weight(m1 + 1, 1.0, zs[k]));
    }
  }
}

// The two weights approach each other only slowly; at M1 = 8, z/M1 = 1 the
// shortfall is about 1 / (4 M1).
TEST(MmseWeight, ApproachesAsymptoticWeight) {
  auto ratio = [](int m1, double r) {
    const double z = r * m1;
    return mmse_weight(m1, 1.0, z) / asymptotic_weight(m1, 1.0, z);
  };
  for (double r : {0.1, 1.0, 10.0}) {
    double prev = 0.0;
    for (int m1 : {1, 2, 4, 8, 16, 32, 64, 128}) {
      const double q = ratio(m1, r);
      EXPECT_GT(q, prev);
      EXPECT_LE(q, 1.0);
      prev = q;
    }
    EXPECT_GE(ratio(64, r), 0.99);
  }
  EXPECT_LT(ratio(8, 1.0), 0.98);
}

TEST(AsymptoticWeight, Examples) {
  EXPECT_DOUBLE_EQ(asymptotic_weight(10, 1.0, 1.0), 10.0 / 11.0);
  EXPECT_EQ(asymptotic_weight(10, 1.0, 0.0), 1.0);
  double prev = 0.0;
  for (int m1 = 1; m1 < 200; ++m1) {
    const double w = asymptotic_weight(m1, 0.3, 2.0);
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(MmseEstimate, Examples) {
  const auto y = random_channel(1, 4, 5);
  const auto p = profile_with_scales({1.0});
  auto out = mmse_estimate(observed(y, 0.0), p, 1.0, 3);
  EXPECT_TRUE((out.estimate.array() == y.array()).all());

  out = mmse_estimate(observed(y, 1.0), p, 1.0, 1);
  EXPECT_NEAR(out.weights[0], 0.4036527, 1e-7);
  EXPECT_LT((out.estimate - kWeightM1OneZOne * y).norm(), 1e-12 * y.norm());
  EXPECT_EQ(out.kind, EstimatorKind::kMmse);
}

TEST(Estimators, ZeroAmplitudeGivesZeroEstimate) {
  const auto y = random_channel(3, 2, 6);
  const auto p = profile_with_scales({1.0, 0.5, 2.0});
  const auto b = observed(y, 1.0);
  for (const auto& out :
       {mmse_estimate(b, p, 0.0, 4), asymptotic_estimate(b, p, 0.0, 4),
        posterior_mean_estimate(b, p, 0.0, 4)}) {
    EXPECT_EQ(out.estimate.norm(), 0.0) << to_string(out.kind);
    for (double w : out.weights) EXPECT_EQ(w, 0.0);
  }
}

TEST(Estimators, CommuteWithComplexScaling) {
  const auto y = random_channel(3, 4, 7);
  const auto p = profile_with_scales({1.0, 0.5, 2.0});
  const std::complex<double> s(-0.3, 1.7);
  const auto b = observed(y, 0.8);
  const auto bs = observed(s * y, 0.8);
  const std::vector<double> a = {0.5, 1.0, 2.0};
  const ComplexMatrix scaled_c = s * conditional_mmse(b, p, 1.0, a).estimate;
  EXPECT_LT((conditional_mmse(bs, p, 1.0, a).estimate - scaled_c).norm(),
            1e-13 * scaled_c.norm());
  const ComplexMatrix scaled_m = s * mmse_estimate(b, p, 1.0, 5).estimate;
  EXPECT_LT((mmse_estimate(bs, p, 1.0, 5).estimate - scaled_m).norm(),
            1e-13 * scaled_m.norm());
  const ComplexMatrix scaled_a = s * asymptotic_estimate(b, p, 1.0, 5).estimate;
  EXPECT_LT((asymptotic_estimate(bs, p, 1.0, 5).estimate - scaled_a).norm(),
            1e-13 * scaled_a.norm());
}

TEST(Estimators, RowCountMismatchIsRejected) {
  const auto b = observed(random_channel(2, 2, 8), 1.0);
  const auto p = profile_with_scales({1.0, 1.0, 1.0});
  EXPECT_THROW(mmse_estimate(b, p, 1.0, 2), DomainError);
  EXPECT_THROW(asymptotic_estimate(b, p, 1.0, 2), DomainError);
  EXPECT_THROW(conditional_mmse(b, p, 1.0, std::vector<double>{1, 1, 1}),
               DomainError);
}

TEST(PosteriorWeight, ReducesToPriorWeightWithoutData) {
  // With an empty row the posterior equals the prior, so the two averages of
  // the conditional weight agree.
  for (int m1 : {1, 4, 12})
    for (double z : {0.1, 1.0, 10.0})
      EXPECT_LT(relative_error(posterior_weight(m1, 1.0, z, 0.0, 0),
                               mmse_weight(m1, 1.0, z)),
                1e-8);
}

TEST(PosteriorWeight, GrowsWithObservedEnergy) {
  double prev = 0.0;
  for (double e : {0.0, 0.5, 1.0, 4.0, 16.0, 64.0}) {
    const double w = posterior_weight(2, 1.0, 1.0, e, 1);
    EXPECT_GT(w, prev);
    EXPECT_LT(w, 1.0);
    prev = w;
  }
}

TEST(MseBounds, Examples) {
  auto b = mse_bounds(profile_with_scales({1.0}), 1.0, 1, 1.0);
  EXPECT_NEAR(b.aggregate_lower, 0.4036527, 1e-7);
  EXPECT_DOUBLE_EQ(b.aggregate_upper, 0.5);

  b = mse_bounds(profile_with_scales({1.0, 3.0}), 1.0, 4, 0.0);
  EXPECT_EQ(b.aggregate_lower, 0.0);
  EXPECT_EQ(b.aggregate_upper, 0.0);

  b = mse_bounds(profile_with_scales({1.0}), 1.0, 10, 1.0);
  EXPECT_DOUBLE_EQ(b.aggregate_upper, 10.0 / 11.0);
  EXPECT_GT(b.aggregate_lower, 0.85);
  EXPECT_LT(b.aggregate_lower, 10.0 / 11.0);
}

TEST(MseBounds, AggregatesAreMeansAndOrdered) {
  const auto p = profile_with_scales({0.1, 1.0, 10.0, 0.0});
  const auto b = mse_bounds(p, 1.0, 3, 0.5);
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(b.per_user_lower[i], b.per_user_upper[i]);
    lo += b.per_user_lower[i];
    hi += b.per_user_upper[i];
  }
  EXPECT_EQ(b.per_user_upper[3], 0.0);
  EXPECT_DOUBLE_EQ(b.aggregate_lower, lo / 4);
  EXPECT_DOUBLE_EQ(b.aggregate_upper, hi / 4);
  EXPECT_EQ(b.aggregate_asymptotic, b.aggregate_upper);
  EXPECT_THROW(mse_bounds(p, 1.0, 3, -1.0), DomainError);
}

}  // namespace
}  // namespace irsest
