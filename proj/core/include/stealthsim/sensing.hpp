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
#ifndef STEALTHSIM_SENSING_HPP
#define STEALTHSIM_SENSING_HPP

#include <cstdint>
#include <functional>

#include "stealthsim/types.hpp"

namespace stealthsim::sensing {

/// Synthetic perception channel: output = C_p x + error_fn(x).
///
/// error_fn is a deterministic, state-dependent map standing in for the
/// camera + estimator pipeline; its norm is bounded by gamma on the ball of
/// radius safe_radius.
struct PerceptionMap {
  Matrix C_p;
  double gamma = 0.0;
  double safe_radius = 1.0;
  std::function<Vector(const Vector&)> error_fn;  // empty -> zero error
  std::uint64_t seed = 0;

  int output_dim() const { return static_cast<int>(C_p.rows()); }
};

/// Perception output for the true state x.
Vector perceive(const PerceptionMap& pmap, const Vector& x);

/// Perception output evaluated at the fake state e = x_a - s. This models
/// the falsified channel the attacker induces: all the control unit ever
/// sees is a function of e.
Vector perceive_attacked(const PerceptionMap& pmap, const Vector& e);

/// Builds a perception map whose error is gamma-bounded everywhere and
/// close to the bound near the safe-set boundary:
///   v(x)_i = (gamma/sqrt(p)) * tanh(m_i . x),  |m_i| ~ 2/safe_radius,
/// with directions m_i derived deterministically from the seed. Smooth,
/// vanishes at the origin, and depends on nothing but x.
PerceptionMap make_tanh_perception(Matrix C_p, double gamma,
                                   double safe_radius, std::uint64_t seed);

}  // namespace stealthsim::sensing

#endif  // STEALTHSIM_SENSING_HPP
