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
#ifndef STEALTHSIM_PRESETS_HPP
#define STEALTHSIM_PRESETS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stealthsim/adversary.hpp"
#include "stealthsim/control.hpp"
#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"

namespace stealthsim::harness {

/// A fully wired case study: plant + controller + perception channel plus
/// the certificate constants and radii the condition checkers consume.
struct CaseStudy {
  std::string name;
  double dt = 0.01;
  dynamics::PlantModel plant;
  control::Controller controller;
  sensing::PerceptionMap perception;
  control::LyapunovCertificate cert;
  adversary::AttackConfig default_attack;

  double b_x = 0.2;          // attack-free state containment radius
  double b_v = 0.05;         // sensor-noise containment radius
  double alpha_unsafe = 0.5; // unsafe-region radius for effectiveness checks
  double phi = 0.05;         // r_t confinement radius used by the checkers
  double norm_B = 0.0;       // |B| as consumed by the condition checkers
  int deviation_index = 0;   // state coordinate reported as "deviation"
  int default_horizon = 500;
};

/// Fixed-base inverted pendulum (m=0.2, b=0.1, r=0.3, g=9.81), forward
/// Euler at dt, angle from perception and angular velocity from the sensor.
/// The stabilizing controller cancels gravity and applies saturated state
/// feedback; certificate constants ship as named preset values.
CaseStudy pendulum_case(double dt = 0.01, std::uint64_t perception_seed = 7);

/// Lane-keeping vehicle (kinematic model, l_f=1.1, l_r=1.73, v=25 m/s) in
/// deviation coordinates around the constant-speed straight-line operating
/// point; lateral position from perception, heading from the sensor; linear
/// feedback controller.
CaseStudy vehicle_case(double dt = 0.01, std::uint64_t perception_seed = 7);

CaseStudy make_case(const std::string& name, double dt = 0.01,
                    std::uint64_t perception_seed = 7);

std::vector<std::string> case_names();

/// Example map with one expanding and one contracting coordinate:
/// x1' = 2 x1 + x1 x2^2, x2' = 0.5 x2. Used by the instability tests.
Vector expanding_map(const Vector& x);
double expanding_map_V(const Vector& x);       // V = x1^2 - x2^2
Vector expanding_map_grad_V(const Vector& x);

}  // namespace stealthsim::harness

#endif  // STEALTHSIM_PRESETS_HPP
