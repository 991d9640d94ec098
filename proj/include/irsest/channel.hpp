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

#ifndef IRSEST_CHANNEL_HPP
#define IRSEST_CHANNEL_HPP

// Geometry, path loss and synthesis of the BS -> IRS -> user equivalent
// channel G = diag(sqrt(beta1)) H1 V sqrt(beta2) H2, both by explicit product
// and by its Gaussian-scale-mixture representation.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "irsest/config.hpp"
#include "irsest/error.hpp"
#include "irsest/rng.hpp"

namespace irsest {

using ComplexMatrix = Eigen::MatrixXcd;

struct PathLossProfile {
  std::vector<double> beta1;  // IRS -> user i, linear power gain
  double beta2 = 1.0;         // BS -> IRS, linear power gain
  std::vector<double> user_distances;

  int num_users() const { return static_cast<int>(beta1.size()); }

  // beta_1,i * beta_2 * v^2, the variance scale of one cascaded term.
  double channel_scale(int user, double amplitude) const {
    return beta1[static_cast<std::size_t>(user)] * beta2 * amplitude *
           amplitude;
  }
};

struct ChannelRealization {
  ComplexMatrix h1;           // N x M1
  ComplexMatrix h2;           // M1 x M
  std::vector<double> theta;  // M1 phases in [0, 2 pi)
  ComplexMatrix g;            // N x M

  // ||h_1,i||, the latent scale of row i.
  std::vector<double> row_scales() const {
    std::vector<double> a(static_cast<std::size_t>(h1.rows()));
    for (Eigen::Index i = 0; i < h1.rows(); ++i)
      a[static_cast<std::size_t>(i)] = h1.row(i).norm();
    return a;
  }
};

struct GsmRealization {
  std::vector<double> a;  // one scale per user row
  ComplexMatrix x;        // N x M, CN(0, 1) entries
  ComplexMatrix g;        // N x M
};

inline double path_loss_db(double distance, double ref_distance,
                           double ref_loss_db, double exponent) {
  if (!(distance > 0.0) || !(ref_distance > 0.0))
    throw DomainError("path_loss_db: distances must be > 0");
  return ref_loss_db + 10.0 * exponent * std::log10(distance / ref_distance);
}

// Positive dB loss -> linear power gain.
inline double path_loss_linear(double loss_db) {
  return std::pow(10.0, -loss_db / 10.0);
}

// Distances uniform over the annulus area min_user_distance <= d <= R.
inline std::vector<double> sample_user_positions(const SystemConfig& config,
                                                 RngStream& rng) {
  const double r0 = config.min_user_distance;
  const double r1 = config.cell_radius;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> d(static_cast<std::size_t>(config.num_users));
  for (auto& di : d) di = std::sqrt(r0 * r0 + u(rng) * (r1 * r1 - r0 * r0));
  return d;
}

inline PathLossProfile make_path_loss_profile(const SystemConfig& config,
                                              std::span<const double> distances) {
  PathLossProfile p;
  p.user_distances.assign(distances.begin(), distances.end());
  if (config.normalized_units) {
    p.beta1.assign(distances.size(), 1.0);
    p.beta2 = 1.0;
    return p;
  }
  p.beta1.reserve(distances.size());
  for (double d : distances)
    p.beta1.push_back(path_loss_linear(
        path_loss_db(d, config.ref_distance_irs_user, config.ref_loss_irs_user,
                     config.exponent_irs_user)));
  p.beta2 = path_loss_linear(
      path_loss_db(config.bs_irs_distance, config.ref_distance_bs_irs,
                   config.ref_loss_bs_irs, config.exponent_bs_irs));
  return p;
}

// Geometry draw. In normalized units the distances are reported as the
// reference distance and every gain is one.
inline PathLossProfile draw_path_loss_profile(const SystemConfig& config,
                                              RngStream& rng) {
  if (config.normalized_units) {
    const std::vector<double> d(static_cast<std::size_t>(config.num_users),
                                config.ref_distance_irs_user);
    return make_path_loss_profile(config, d);
  }
  const auto d = sample_user_positions(config, rng);
  return make_path_loss_profile(config, d);
}

namespace detail {

inline void check_profile(const SystemConfig& config,
                          const PathLossProfile& profile) {
  if (profile.num_users() != config.num_users)
    throw DomainError("path-loss profile does not match num_users");
}

inline ComplexMatrix complex_normal_matrix(Eigen::Index rows,
                                           Eigen::Index cols, RngStream& rng) {
  ComplexMatrix m(rows, cols);
  // Column-major fill order is part of the replay contract.
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = complex_normal(rng);
  return m;
}

inline Eigen::VectorXd sqrt_gains(const PathLossProfile& profile) {
  Eigen::VectorXd s(profile.num_users());
  for (int i = 0; i < profile.num_users(); ++i)
    s(i) = std::sqrt(profile.beta1[static_cast<std::size_t>(i)]);
  return s;
}

}  // namespace detail

// Product construction: H1, H2 with CN(0, 1) entries, theta uniform.
inline ChannelRealization synthesize_channel(const SystemConfig& config,
                                             const PathLossProfile& profile,
                                             RngStream& rng) {
  detail::check_profile(config, profile);
  const int n = config.num_users;
  const int m1 = config.num_irs_elements;
  const int m = config.num_bs_antennas;
  const double v = config.scattering_amplitude;

  ChannelRealization out;
  out.h1 = detail::complex_normal_matrix(n, m1, rng);
  out.h2 = detail::complex_normal_matrix(m1, m, rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  out.theta.resize(static_cast<std::size_t>(m1));
  Eigen::VectorXcd reflection(m1);
  for (int k = 0; k < m1; ++k) {
    out.theta[static_cast<std::size_t>(k)] = phase(rng);
    reflection(k) = v * std::polar(1.0, out.theta[static_cast<std::size_t>(k)]);
  }
  const ComplexMatrix g1 =
      detail::sqrt_gains(profile).cast<std::complex<double>>().asDiagonal() *
      out.h1;
  const ComplexMatrix g2 = std::sqrt(profile.beta2) * out.h2;
  out.g = g1 * reflection.asDiagonal() * g2;
  return out;
}

// Scale-mixture construction: a_i = sqrt(Gamma(M1, 1)), row i of G is
// a_i v sqrt(beta_1,i beta_2) x_i.
inline GsmRealization synthesize_gsm(const SystemConfig& config,
                                     const PathLossProfile& profile,
                                     RngStream& rng) {
  detail::check_profile(config, profile);
  const int n = config.num_users;
  const int m = config.num_bs_antennas;
  const double v = config.scattering_amplitude;

  GsmRealization out;
  out.a.resize(static_cast<std::size_t>(n));
  std::gamma_distribution<double> shape(config.num_irs_elements, 1.0);
  for (auto& ai : out.a) ai = std::sqrt(shape(rng));
  out.x = detail::complex_normal_matrix(n, m, rng);
  out.g.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const double s = out.a[static_cast<std::size_t>(i)] * v *
                     std::sqrt(profile.beta1[static_cast<std::size_t>(i)] *
                               profile.beta2);
    out.g.row(i) = s * out.x.row(i);
  }
  return out;
}

}  // namespace irsest

#endif  // IRSEST_CHANNEL_HPP
