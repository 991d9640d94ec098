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

#ifndef IRSEST_TESTS_ORACLES_HPP
#define IRSEST_TESTS_ORACLES_HPP

// Test-only reference values computed from defining integrals. Nothing here
// calls the closed-form evaluators it is used to check.

#include <cmath>
#include <numbers>

#include "irsest/quadrature.hpp"

namespace irsest::testing {

inline const QuadratureSpec kOracleSpec{1e-12, 1e-300, 20000};

// Frozen quadrature-oracle values (cross-checked at 30 digits offline).
inline constexpr double kBesselK0At1 = 0.42102443824070833;
inline constexpr double kGammaZeroAt1 = 0.21938393439552027;
inline constexpr double kGammaMinusOneAt1 = 0.14849550677592205;
inline constexpr double kWeightM1OneZOne = 0.40365263767680593;
inline constexpr double kWeightM1TenZOne = 0.90107086735935384;

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
inline double bessel_k_by_quadrature(double nu, double x) {
  return integrate_half_line(
             [&](double t) {
               const double e = -x * std::cosh(t);
               return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
             },
             1.0, kOracleSpec)
      .value;
}

// Gamma(a, z) = int_z^inf t^(a-1) e^-t dt.
inline double upper_gamma_by_quadrature(double a, double z) {
  return integrate_half_line(
             [&](double s) {
               const double t = z + s;
               return std::exp((a - 1.0) * std::log(t) - t);
             },
             std::min(1.0, z), kOracleSpec)
      .value;
}

// p_A(a) written out directly.
inline double scale_prior(int m1, double a) {
  return 2.0 * std::pow(a, 2.0 * m1 - 1.0) * std::exp(-a * a) / std::tgamma(m1);
}

// int_0^inf a^2 / (a^2 + z) p_A(a) da.
inline double prior_weight_by_quadrature(int m1, double z) {
  return integrate_half_line(
             [&](double a) {
               const double a2 = a * a;
               return a2 / (a2 + z) * scale_prior(m1, a);
             },
             std::sqrt(static_cast<double>(m1)), kOracleSpec)
      .value;
}

// Density of an M-dimensional complex row with norm r, written as the
// Gaussian scale mixture int p_A(a) (pi a^2 c)^-M exp(-r^2 / (a^2 c)) da.
inline double row_density_by_mixture(int m1, int m, double c, double r) {
  return integrate_half_line(
             [&](double a) {
               if (a == 0.0) return 0.0;
               const double s = a * a * c;
               return std::exp(std::log(2.0) + (2.0 * m1 - 1.0) * std::log(a) -
                               a * a - std::lgamma(m1) - r * r / s -
                               m * std::log(std::numbers::pi * s));
             },
             std::sqrt(static_cast<double>(m1)), kOracleSpec)
      .value;
}

}  // namespace irsest::testing

#endif  // IRSEST_TESTS_ORACLES_HPP
