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
#include "stealthsim/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace stealthsim::harness {

namespace {
constexpr double kGravity = 9.81;
}

CaseStudy pendulum_case(double dt, std::uint64_t perception_seed) {
  // Fixed-base inverted pendulum, states [theta, omega].
  const double mass = 0.2;
  const double friction = 0.1;
  const double radius = 0.3;
  const double inertia = mass * radius * radius;  // m r^2
  const double grav = kGravity / radius;          // g / r
  const double damp = friction / inertia;         // b / (m r^2)

  auto f = [dt, grav, damp](const Vector& x) -> Vector {
    Vector out(2);
    out(0) = x(0) + dt * x(1);
    out(1) = x(1) + dt * (grav * std::sin(x(0)) - damp * x(1));
    return out;
  };
  auto jac = [dt, grav, damp](const Vector& x) -> Matrix {
    Matrix J(2, 2);
    J << 1.0, dt, dt * grav * std::cos(x(0)), 1.0 - dt * damp;
    return J;
  };

  Matrix B(2, 1);
  B << 0.0, dt / inertia;
  Matrix C_s(1, 2);
  C_s << 0.0, 1.0;  // angular velocity sensor
  // Process noise of intensity 1e-4 enters through the Euler step, so the
  // per-step covariance carries the dt factor; sensor noise is per reading.
  Matrix sigma_w = 1e-4 * dt * Matrix::Identity(2, 2);
  Matrix sigma_vs = 1e-4 * Matrix::Identity(1, 1);

  CaseStudy cs;
  cs.name = "pendulum";
  cs.dt = dt;
  cs.plant = dynamics::make_plant(2, 1, 1, f, B, C_s, sigma_w, sigma_vs, jac);
  cs.perception = sensing::make_tanh_perception(
      (Matrix(1, 2) << 1.0, 0.0).finished(), 0.01, 0.5, perception_seed);

  // Gravity-cancelling saturated state feedback on the perceived angle and
  // the measured angular velocity. Gains place the closed-loop poles near
  // 0.95 so the attack-free state stays well inside the b_x ball.
  const double k1 = 35.0, k2 = 6.5, u_max = 5.0;
  cs.controller.kind = control::Controller::Kind::nonlinear;
  cs.controller.label = "pendulum_feedback";
  cs.controller.policy = [grav, k1, k2, u_max, inertia](
                             const Vector& y_p, const Vector& y_s) -> Vector {
    double raw = -inertia * (grav * std::sin(y_p(0)) + k1 * y_p(0) + k2 * y_s(0));
    Vector u(1);
    u(0) = u_max * std::tanh(raw / u_max);
    return u;
  };

  cs.cert.c1 = 0.5;
  cs.cert.c2 = 0.5;
  cs.cert.c3 = 0.057;
  cs.cert.c4 = 1.0;
  cs.cert.d = 1.0;
  cs.cert.theta = 0.5;
  cs.cert.L_f = 1.16;    // spectral norm of the drift Jacobian on B_0.5
  cs.cert.Lp_f = 0.33;   // dt * g / r
  cs.cert.L_pi = 1.6;    // shipped controller, measured on B_0.5
  cs.cert.Lp_pi = 0.12;

  cs.default_attack.strategy = adversary::Strategy::open_loop;
  cs.default_attack.s0 = (Vector(2) << 0.001, 0.001).finished();
  cs.default_attack.b_zeta = 0.0;
  cs.default_attack.start_step = 0;

  cs.b_x = 0.2;
  cs.b_v = 0.05;
  cs.alpha_unsafe = 0.5;
  cs.phi = 0.05;
  cs.norm_B = dt / inertia;
  cs.deviation_index = 0;  // theta
  cs.default_horizon = 500;
  return cs;
}

CaseStudy vehicle_case(double dt, std::uint64_t perception_seed) {
  // Kinematic lane-keeping model in deviation coordinates around straight
  // constant-speed driving; states [x, y, psi, v - v0].
  const double l_f = 1.1;
  const double l_r = 1.73;
  const double v0 = 25.0;
  const double slip_gain = l_r / (l_f + l_r);  // d beta / d delta_f at 0

  auto f = [dt, v0](const Vector& x) -> Vector {
    const double psi = x(2);
    const double speed = v0 + x(3);
    Vector out(4);
    out(0) = x(0) + dt * (speed * std::cos(psi) - v0);
    out(1) = x(1) + dt * speed * std::sin(psi);
    out(2) = psi;
    out(3) = x(3);
    return out;
  };
  auto jac = [dt, v0](const Vector& x) -> Matrix {
    const double psi = x(2);
    const double speed = v0 + x(3);
    Matrix J = Matrix::Identity(4, 4);
    J(0, 2) = -dt * speed * std::sin(psi);
    J(0, 3) = dt * std::cos(psi);
    J(1, 2) = dt * speed * std::cos(psi);
    J(1, 3) = dt * std::sin(psi);
    return J;
  };

  Matrix B(4, 1);
  B << 0.0, dt * v0 * slip_gain, dt * (v0 / l_r) * slip_gain, 0.0;
  Matrix C_s(1, 4);
  C_s << 0.0, 0.0, 1.0, 0.0;  // heading sensor
  Matrix sigma_w = 1e-4 * dt * Matrix::Identity(4, 4);
  Matrix sigma_vs = 1e-4 * Matrix::Identity(1, 1);

  CaseStudy cs;
  cs.name = "vehicle";
  cs.dt = dt;
  cs.plant = dynamics::make_plant(4, 1, 1, f, B, C_s, sigma_w, sigma_vs, jac);
  cs.perception = sensing::make_tanh_perception(
      (Matrix(1, 4) << 0.0, 1.0, 0.0, 0.0).finished(), 0.01, 0.5,
      perception_seed);
  cs.controller = control::make_linear_feedback(
      (Matrix(1, 1) << -2.0).finished(), (Matrix(1, 1) << -8.0).finished());

  cs.b_x = 0.2;
  cs.b_v = 0.05;
  cs.alpha_unsafe = 1.0;  // lateral deviation in meters
  cs.phi = 0.0014;        // bound on |s0|
  cs.norm_B = 0.2;        // effective input-gain norm used by the checkers
  cs.deviation_index = 1; // lateral position
  cs.default_horizon = 3000;

  cs.cert.c1 = 0.5;
  cs.cert.c2 = 0.5;
  cs.cert.c3 = 0.032;
  cs.cert.c4 = 1.0;
  cs.cert.d = 1.0;
  cs.cert.theta = 0.5;
  cs.cert.L_f = 1.14;  // spectral norm of the drift Jacobian near the origin
  cs.cert.Lp_f = 0.0;  // attack recurrence uses the LTI model
  cs.cert.L_pi = 8.25; // |K| for the linear feedback
  cs.cert.Lp_pi = 0.0532 / (cs.b_x + cs.b_v + cs.phi);

  cs.default_attack.strategy = adversary::Strategy::lti;
  cs.default_attack.s0 = (Vector(4) << 0.0, 0.001, 0.001, 0.0).finished();
  cs.default_attack.b_zeta = 0.0;
  cs.default_attack.start_step = 0;
  return cs;
}

CaseStudy make_case(const std::string& name, double dt,
                    std::uint64_t perception_seed) {
  if (name == "pendulum") return pendulum_case(dt, perception_seed);
  if (name == "vehicle") return vehicle_case(dt, perception_seed);
  std::string valid;
  for (const auto& n : case_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown case study '" + name +
                              "' (valid: " + valid + ")");
}

std::vector<std::string> case_names() { return {"pendulum", "vehicle"}; }

Vector expanding_map(const Vector& x) {
  Vector out(2);
  out(0) = 2.0 * x(0) + x(0) * x(1) * x(1);
  out(1) = 0.5 * x(1);
  return out;
}

double expanding_map_V(const Vector& x) { return x(0) * x(0) - x(1) * x(1); }

Vector expanding_map_grad_V(const Vector& x) {
  Vector g(2);
  g(0) = 2.0 * x(0);
  g(1) = -2.0 * x(1);
  return g;
}

}  // namespace stealthsim::harness
