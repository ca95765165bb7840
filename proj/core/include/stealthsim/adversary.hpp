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
#ifndef STEALTHSIM_ADVERSARY_HPP
#define STEALTHSIM_ADVERSARY_HPP

#include <utility>

#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"
#include "stealthsim/types.hpp"

namespace stealthsim::adversary {

/// How the offset sequence s_t is advanced:
///  - estimate_based: s' = f(xhat) - f(xhat - s) with xhat = x_a + zeta,
///    |zeta| <= b_zeta (the attacker runs a local estimator).
///  - open_loop:      s' = f(s); needs only the plant model.
///  - lti:            s' = A s with A = linearize(model, 0).
enum class Strategy { estimate_based, open_loop, lti };

struct AttackConfig {
  Strategy strategy = Strategy::open_loop;
  Vector s0;
  double b_zeta = 0.0;
  int start_step = 0;

  void validate(int state_dim) const;  // throws std::invalid_argument
};

struct AttackState {
  Vector s;
  Vector zeta;  // estimation error used at the last update (estimate_based)
};

/// Estimate-based update with the caller-supplied estimation error zeta
/// (|zeta| <= b_zeta). For an exactly linear plant the update reduces
/// algebraically to s' = A s and is computed that way, which also avoids
/// the cancellation in f(xhat) - f(xhat - s) for small s.
AttackState advance_strategy1(const dynamics::PlantModel& model,
                              const AttackState& st, const Vector& x_a,
                              const Vector& zeta);

/// Open-loop update s' = f(s); for Strategy::lti uses s' = A s with
/// A = linearize(model, 0).
AttackState advance_strategy2(const dynamics::PlantModel& model,
                              const AttackState& st, bool lti);

/// Falsified channels for fake state e = x_a - s:
/// (perceive(e), C_s e + v_s).
std::pair<Vector, Vector> falsify_measurements(
    const dynamics::PlantModel& model, const sensing::PerceptionMap& pmap,
    const Vector& x_a, const Vector& s, const Vector& v_s);

}  // namespace stealthsim::adversary

#endif  // STEALTHSIM_ADVERSARY_HPP
