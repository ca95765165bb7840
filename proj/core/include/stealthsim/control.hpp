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
#ifndef STEALTHSIM_CONTROL_HPP
#define STEALTHSIM_CONTROL_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"
#include "stealthsim/types.hpp"

namespace stealthsim::control {

/// Feedback policy u = policy(y_p, y_s). policy(0,0) must be 0.
struct Controller {
  enum class Kind { linear_feedback, nonlinear };

  Kind kind = Kind::nonlinear;
  std::function<Vector(const Vector& y_p, const Vector& y_s)> policy;
  Matrix K_p;  // set for linear_feedback
  Matrix K_s;
  std::string label;
};

/// u = K_p y_p + K_s y_s.
Controller make_linear_feedback(Matrix K_p, Matrix K_s);

/// Exponential-stability certificate for the noiseless closed loop plus the
/// Lipschitz constants the attackability conditions consume.
///
///   c1 |x|^2 <= V(x) <= c2 |x|^2,  V(x') - V(x) <= -c3 |x|^2,
///   |dV/dx| <= c4 |x|  on the ball B_d, with margin parameter theta in (0,1).
struct LyapunovCertificate {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double d = 1.0;
  double theta = 0.5;
  double L_f = 0;    // Lipschitz constant of f
  double Lp_f = 0;   // Lipschitz constant of f' (the Jacobian map)
  double L_pi = 0;   // Lipschitz constant of the policy
  double Lp_pi = 0;  // Lipschitz constant of the policy's derivative

  void validate() const;  // throws std::invalid_argument
};

/// Noiseless closed-loop drift h(x, v_s) = f(x) + B policy(perceive(x), C_s x + v_s).
Vector closed_loop_step(const dynamics::PlantModel& model,
                        const Controller& controller,
                        const sensing::PerceptionMap& pmap, const Vector& x,
                        const Vector& v_s);

/// Sampling-based falsification of a certificate (not a proof).
struct CertificateReport {
  bool pass = false;
  double alpha_fit = 0.0;       // fitted per-step decay rate, < 1 when stable
  double worst_violation = 0.0; // max over samples of |x_t| / envelope - 1
  int n_samples = 0;
  int horizon = 0;
};

/// Samples initial states uniformly in B_d, rolls the noiseless loop, fits a
/// geometric decay rate, and checks |x_t| <= sqrt(c2/c1) alpha_fit^t |x_0|
/// against the worst sampled trajectory.
CertificateReport verify_certificate(const dynamics::PlantModel& model,
                                     const Controller& controller,
                                     const sensing::PerceptionMap& pmap,
                                     const LyapunovCertificate& cert,
                                     int n_samples, int horizon = 200,
                                     std::uint64_t seed = 0);

/// Empirical lower bound on a Lipschitz constant: max over sampled pairs of
/// |fn(x)-fn(y)| / |x-y| on the ball of the given radius.
double estimate_lipschitz(const std::function<Vector(const Vector&)>& fn,
                          int input_dim, double domain_radius, int n_samples,
                          std::uint64_t seed = 0);

}  // namespace stealthsim::control

#endif  // STEALTHSIM_CONTROL_HPP
