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

#ifndef IRSEST_QUADRATURE_HPP
#define IRSEST_QUADRATURE_HPP

// Globally adaptive Gauss-Kronrod (10/21 point) integration on finite
// intervals, and on the half line through the map t = s * u / (1 - u).
//
// The error estimate of an interval is the raw |K21 - G10| difference, which
// is pessimistic for smooth integrands. Intervals are bisected in order of
// decreasing error until the summed estimate meets the tolerance.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "irsest/error.hpp"

namespace irsest {

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-300;
  std::size_t max_subdivisions = 4000;

  void validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
      throw DomainError("quadrature tolerances must be strictly positive");
    if (max_subdivisions < 1)
      throw DomainError("quadrature needs at least one subdivision");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights pair with the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_21(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  Segment s{lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
  if (!std::isfinite(s.value))
    throw DomainError("integrand is not finite on the integration interval");
  return s;
}

}  // namespace detail

// Integrates f over [lo, hi]. The endpoints themselves are never evaluated.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi,
                           const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("integrate: interval bounds must be finite");
  if (lo == hi) return {};
  if (hi < lo) {
    auto r = integrate(f, hi, lo, spec);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::Segment> heap;
  // Segments too narrow to bisect further at double resolution.
  double frozen_value = 0.0;
  double frozen_error = 0.0;

  heap.push(detail::gauss_kronrod_21(f, lo, hi));
  double total = heap.top().value;
  double total_error = heap.top().error;
  std::size_t intervals = 1;

  auto tolerance = [&] {
    return std::max(spec.absolute_tolerance,
                    spec.relative_tolerance * std::abs(total));
  };

  while (total_error > tolerance()) {
    if (heap.empty()) break;
    if (intervals >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge in " << intervals
          << " intervals (estimate " << total << ", error " << total_error
          << ")";
      throw ConvergenceError(msg.str(), total, total_error);
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double resolution =
        64.0 * std::numeric_limits<double>::epsilon() *
        std::max(std::abs(mid), std::numeric_limits<double>::min());
    if (worst.hi - worst.lo <= resolution) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    const auto left = detail::gauss_kronrod_21(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_21(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum from the pieces to avoid drift from the running updates.
  double value = frozen_value;
  double error = frozen_error;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  if (error > std::max(spec.absolute_tolerance,
                       spec.relative_tolerance * std::abs(value))) {
    std::ostringstream msg;
    msg << "adaptive quadrature stalled at double resolution (estimate "
        << value << ", error " << error << ")";
    throw ConvergenceError(msg.str(), value, error);
  }
  return {value, error, intervals};
}

// Integrates f over (0, inf). `scale` sets where the map t = scale*u/(1-u)
// puts the midpoint of the unit interval; choose it near the bulk of f.
template <class F>
QuadratureResult integrate_half_line(F&& f, double scale,
                                     const QuadratureSpec& spec = {}) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("integrate_half_line: scale must be positive");
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    const double t = scale * u / one_minus;
    if (!std::isfinite(t)) return 0.0;
    const double jacobian = scale / (one_minus * one_minus);
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * jacobian;
  };
  return integrate(mapped, 0.0, 1.0, spec);
}

// Integral of f over (0, inf) with unit scale.
template <class F>
double adaptive_quadrature(F&& f, const QuadratureSpec& spec = {}) {
  return integrate_half_line(f, 1.0, spec).value;
}

}  // namespace irsest

#endif  // IRSEST_QUADRATURE_HPP
