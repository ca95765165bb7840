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
#include "stealthsim/control.hpp"

#include <cmath>
#include <stdexcept>

#include "stealthsim/rng.hpp"

namespace stealthsim::control {

Controller make_linear_feedback(Matrix K_p, Matrix K_s) {
  Controller c;
  c.kind = Controller::Kind::linear_feedback;
  c.K_p = std::move(K_p);
  c.K_s = std::move(K_s);
  c.label = "linear_feedback";
  Matrix kp = c.K_p, ks = c.K_s;
  c.policy = [kp, ks](const Vector& y_p, const Vector& y_s) -> Vector {
    return kp * y_p + ks * y_s;
  };
  return c;
}

void LyapunovCertificate::validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c3 > 0.0) || !(c4 > 0.0))
    throw std::invalid_argument("certificate constants c1..c4 must be positive");
  if (c1 > c2) throw std::invalid_argument("certificate requires c1 <= c2");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("certificate requires theta in (0,1)");
  if (L_f < 0 || Lp_f < 0 || L_pi < 0 || Lp_pi < 0)
    throw std::invalid_argument("Lipschitz constants must be nonnegative");
}

Vector closed_loop_step(const dynamics::PlantModel& model,
                        const Controller& controller,
                        const sensing::PerceptionMap& pmap, const Vector& x,
                        const Vector& v_s) {
  Vector y_p = sensing::perceive(pmap, x);
  Vector y_s = model.C_s * x + v_s;
  return model.f(x) + model.B * controller.policy(y_p, y_s);
}

CertificateReport verify_certificate(const dynamics::PlantModel& model,
                                     const Controller& controller,
                                     const sensing::PerceptionMap& pmap,
                                     const LyapunovCertificate& cert,
                                     int n_samples, int horizon,
                                     std::uint64_t seed) {
  cert.validate();
  if (cert.d <= 0.0)
    throw std::invalid_argument("verify_certificate: domain radius d must be positive");
  if (n_samples < 1)
    throw std::invalid_argument("verify_certificate: n_samples must be >= 1");

  NoiseStream starts(seed, "certificate_starts");
  const Vector v0 = Vector::Zero(model.sensor_dim);
  const double amplitude = std::sqrt(cert.c2 / cert.c1);

  std::vector<std::vector<double>> norms(n_samples);
  double alpha_fit = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    Vector x = starts.uniform_ball(static_cast<std::uint64_t>(k),
                                   model.state_dim, cert.d);
    if (x.norm() < 1e-9) x = Vector::Constant(model.state_dim, cert.d / 10.0);
    norms[k].reserve(horizon + 1);
    norms[k].push_back(x.norm());
    for (int t = 0; t < horizon; ++t) {
      x = closed_loop_step(model, controller, pmap, x, v0);
      norms[k].push_back(x.norm());
      if (!x.allFinite()) break;
    }
    double ratio = norms[k].back() / norms[k].front();
    alpha_fit = std::max(alpha_fit,
                         std::pow(std::max(ratio, 1e-300),
                                  1.0 / static_cast<double>(norms[k].size() - 1)));
  }

  double worst = -1.0;
  for (const auto& traj : norms) {
    const double n0 = traj.front();
    double envelope = amplitude * n0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      if (envelope > 1e-300) worst = std::max(worst, traj[t] / envelope - 1.0);
      envelope *= alpha_fit;
    }
  }

  CertificateReport report;
  report.alpha_fit = alpha_fit;
  report.worst_violation = worst;
  report.n_samples = n_samples;
  report.horizon = horizon;
  report.pass = alpha_fit < 1.0 && worst <= 1e-9;
  return report;
}

double estimate_lipschitz(const std::function<Vector(const Vector&)>& fn,
                          int input_dim, double domain_radius, int n_samples,
                          std::uint64_t seed) {
  if (n_samples < 2)
    throw std::invalid_argument("estimate_lipschitz: n_samples must be >= 2");
  NoiseStream pts(seed, "lipschitz_pairs");
  double best = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    Vector x = pts.uniform_ball(2 * static_cast<std::uint64_t>(k), input_dim,
                                domain_radius);
    Vector y = pts.uniform_ball(2 * static_cast<std::uint64_t>(k) + 1,
                                input_dim, domain_radius);
    double dist = (x - y).norm();
    if (dist < 1e-12) continue;  // zero-distance pair carries no information
    best = std::max(best, (fn(x) - fn(y)).norm() / dist);
  }
  return best;
}

}  // namespace stealthsim::control
