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
#ifndef STEALTHSIM_DYNAMICS_HPP
#define STEALTHSIM_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "stealthsim/types.hpp"

namespace stealthsim::dynamics {

/// Discrete-time plant  x' = f(x) + B u + w,  y_s = C_s x + v_s.
///
/// The drift f must fix the origin. sigma_w / sigma_vs are the process and
/// sensor noise covariances; their (semidefinite) square-root factors are
/// cached at construction. When the drift is exactly linear, `linear_A`
/// holds the matrix so downstream code can use the algebraic form.
struct PlantModel {
  int state_dim = 0;
  int input_dim = 0;
  int sensor_dim = 0;
  std::function<Vector(const Vector&)> f;
  Matrix B;
  Matrix C_s;
  Matrix sigma_w;
  Matrix sigma_vs;
  std::function<Matrix(const Vector&)> f_jacobian;  // empty -> central differences
  std::optional<Matrix> linear_A;

  Matrix chol_w;   // factor L with L L^T = sigma_w
  Matrix chol_vs;  // factor for sigma_vs

  Matrix jacobian(const Vector& x0) const;
};

/// Validates dimensions and invariants (f(0)=0, symmetric PSD covariances),
/// caches noise factors, and installs a finite-difference Jacobian when no
/// analytic one is given. Throws std::invalid_argument on violations.
PlantModel make_plant(int state_dim, int input_dim, int sensor_dim,
                      std::function<Vector(const Vector&)> f, Matrix B,
                      Matrix C_s, Matrix sigma_w, Matrix sigma_vs,
                      std::function<Matrix(const Vector&)> f_jacobian = nullptr,
                      std::optional<Matrix> linear_A = std::nullopt);

/// Convenience builder for an LTI plant x' = A x + B u + w.
PlantModel make_lti_plant(const Matrix& A, const Matrix& B, const Matrix& C_s,
                          const Matrix& sigma_w, const Matrix& sigma_vs);

/// One plant step: f(x) + B u + w. Throws on dimension mismatch.
Vector step_plant(const PlantModel& model, const Vector& x, const Vector& u,
                  const Vector& w);

/// A = df/dx at x0 (analytic when available, else central differences).
Matrix linearize(const PlantModel& model, const Vector& x0);

/// Per-step detector trace attached to a simulated run.
struct DetectionTrace {
  std::vector<double> resid_norm;
  std::vector<double> chi2_stat;    // residual' S^-1 residual
  std::vector<double> cusum_state;
  std::vector<bool> chi2_alarm;
  std::vector<bool> cusum_alarm;
};

/// Paired record of an attack-free and an attacked closed-loop run driven by
/// common random numbers. All sequences have horizon+1 entries unless the
/// run diverged, in which case they are truncated at last_valid.
struct Trajectory {
  double dt = 0.0;
  int horizon = 0;
  std::uint64_t seed = 0;

  std::vector<Vector> x;      // attack-free state
  std::vector<Vector> x_a;    // attacked state
  std::vector<Vector> s;      // attack offset sequence
  std::vector<Vector> e;      // fake state e_t = x_a_t - s_t
  std::vector<Vector> y_s;    // attack-free sensor channel
  std::vector<Vector> y_s_a;  // falsified sensor channel
  std::vector<Vector> y_p;    // attack-free perception output
  std::vector<Vector> y_p_a;  // falsified perception output

  bool diverged = false;
  int last_valid = -1;

  std::optional<DetectionTrace> det;    // detectors on attack-free channels
  std::optional<DetectionTrace> det_a;  // detectors on falsified channels
};

}  // namespace stealthsim::dynamics

#endif  // STEALTHSIM_DYNAMICS_HPP
