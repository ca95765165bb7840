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
#ifndef STEALTHSIM_CONFIG_HPP
#define STEALTHSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "stealthsim/adversary.hpp"
#include "stealthsim/types.hpp"

namespace stealthsim::harness {

/// Raised for malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment description. Serializes to a versioned JSON document; parsing
/// is strict (unknown keys are rejected) and the round trip is lossless.
struct ExperimentConfig {
  static constexpr int kSchemaVersion = 1;

  std::string case_name = "pendulum";  // pendulum | vehicle
  double dt = 0.01;
  int horizon = 500;
  int n_runs = 100;
  std::uint64_t seed = 42;
  std::uint64_t perception_seed = 7;

  bool attack_enabled = true;
  std::optional<adversary::Strategy> strategy;  // unset -> case default
  Vector s0;          // empty -> case default
  double b_zeta = 0.0;
  int start_step = 0;

  double target_fa = 0.05;
  int calibration_runs = 100;
  std::optional<double> chi2_threshold;   // set -> skip calibration
  std::optional<double> cusum_threshold;
  std::optional<double> cusum_drift;

  std::optional<double> gamma_override;
  std::optional<Vector> x0;

  std::string out_dir = "out";
  int threads = 0;  // 0 -> hardware concurrency

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

}  // namespace stealthsim::harness

#endif  // STEALTHSIM_CONFIG_HPP
