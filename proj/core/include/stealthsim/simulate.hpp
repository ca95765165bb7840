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
#ifndef STEALTHSIM_SIMULATE_HPP
#define STEALTHSIM_SIMULATE_HPP

#include <cstdint>
#include <optional>

#include "stealthsim/adversary.hpp"
#include "stealthsim/control.hpp"
#include "stealthsim/detection.hpp"
#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"

namespace stealthsim::dynamics {

struct DetectorBank {
  std::optional<detection::DetectorConfig> chi2;
  std::optional<detection::DetectorConfig> cusum;
};

struct SimOptions {
  double dt = 0.01;
  Vector x0;                        // empty -> origin
  double divergence_limit = 1e6;
  bool detect_attack_free = true;   // also trace detectors on clean channels
};

/// Runs the attack-free and attacked closed loops side by side on common
/// random numbers and returns the paired record. Without an attacker (or
/// with s0 = 0) the attacked branch replays the attack-free branch
/// bit-for-bit. Detector traces are attached when a bank is given; the
/// attacked trace consumes the falsified channels, exactly like the plant's
/// control unit does. Divergence (non-finite or |x| beyond the limit in
/// either branch) truncates the record and sets the flag.
Trajectory simulate_closed_loop(
    const PlantModel& model, const control::Controller& controller,
    const sensing::PerceptionMap& pmap,
    const std::optional<adversary::AttackConfig>& attacker,
    const std::optional<DetectorBank>& detectors, int horizon,
    std::uint64_t seed, const SimOptions& opts = {});

}  // namespace stealthsim::dynamics

#endif  // STEALTHSIM_SIMULATE_HPP
