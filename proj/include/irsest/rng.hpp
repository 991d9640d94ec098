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

#ifndef IRSEST_RNG_HPP
#define IRSEST_RNG_HPP

// Counter-derived random streams. Every stream is a pure function of
// (master seed, point index, trial index, purpose), so trials can be
// scheduled on any number of workers without changing their draws.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irsest {

using RngStream = std::mt19937_64;

enum class StreamPurpose : std::uint64_t {
  kGeometry = 1,
  kChannel = 2,
  kNoise = 3,
  kAuxiliary = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline RngStream derive_stream(std::uint64_t master_seed,
                               std::uint64_t point_index,
                               std::uint64_t trial_index,
                               StreamPurpose purpose) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ point_index);
  h = splitmix64(h ^ trial_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return RngStream(h);
}

// CN(0, variance): independent real and imaginary parts, each N(0, variance/2).
inline std::complex<double> complex_normal(RngStream& rng,
                                           double variance = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace irsest

#endif  // IRSEST_RNG_HPP
