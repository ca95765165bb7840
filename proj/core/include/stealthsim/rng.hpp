/*
 Copyright 2026 The stealthsim Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef STEALTHSIM_RNG_HPP
#define STEALTHSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

#include "stealthsim/types.hpp"

namespace stealthsim {

/// Counter-based deterministic noise source.
///
/// Draws are a pure function of (seed, stream_id, step, component), so a
/// given stream yields the same value no matter in which order or how often
/// it is queried. Paired attacked/attack-free runs that share a seed
/// therefore consume identical process and sensor noise (common random
/// numbers), and independent streams never interfere with each other.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::string_view stream_id)
      : key_(mix(seed, fnv1a(stream_id))) {}

  /// Uniform in [0,1) for (step, lane).
  double uniform(std::uint64_t step, std::uint64_t lane = 0) const {
    return to_unit(splitmix(key_ ^ mix(step + 1, lane + 1)));
  }

  /// Standard normal vector for a step (Box-Muller, hand-rolled so results
  /// are identical across compilers and platforms).
  Vector gaussian(std::uint64_t step, int dim) const {
    Vector z(dim);
    for (int i = 0; i < dim; ++i) {
      double u1 = uniform(step, 2 * static_cast<std::uint64_t>(i));
      double u2 = uniform(step, 2 * static_cast<std::uint64_t>(i) + 1);
      if (u1 < 1e-300) u1 = 1e-300;
      z(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    return z;
  }

  /// Correlated Gaussian draw: L * z with L a (lower) covariance factor.
  Vector gaussian_cov(std::uint64_t step, const Matrix& chol_lower) const {
    return chol_lower * gaussian(step, static_cast<int>(chol_lower.cols()));
  }

  /// Uniform draw from the closed ball of given radius.
  Vector uniform_ball(std::uint64_t step, int dim, double radius) const {
    Vector z = gaussian(step, dim);
    double n = z.norm();
    if (n < 1e-300) return Vector::Zero(dim);
    double u = uniform(step, 2 * static_cast<std::uint64_t>(dim));
    return (radius * std::pow(u, 1.0 / dim) / n) * z;
  }

  std::uint64_t key() const { return key_; }

  /// Derives a per-run seed from a campaign seed and run index.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix(mix(seed, 0x9e3779b97f4a7c15ull + index));
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix(splitmix(a) ^ (0x9e3779b97f4a7c15ull + b));
  }
  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }
  static double to_unit(std::uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;
  }

  std::uint64_t key_;
};

}  // namespace stealthsim

#endif  // STEALTHSIM_RNG_HPP
