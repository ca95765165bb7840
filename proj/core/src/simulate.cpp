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
#include "stealthsim/simulate.hpp"

#include <stdexcept>

#include "stealthsim/rng.hpp"

namespace stealthsim::dynamics {

namespace {

struct DetectorRunner {
  const DetectorBank* bank = nullptr;
  detection::EkfState ekf;
  double cusum_state = 0.0;
  DetectionTrace trace;

  void observe(const PlantModel& model, const detection::MeasurementModel& meas,
               const Vector& u_prev, const Vector& y) {
    auto out = detection::ekf_step(ekf, model, meas, u_prev, y);
    ekf = out.state;
    double g = detection::chi2_statistic(out.residual, out.innovation_cov);
    trace.resid_norm.push_back(out.residual.norm());
    trace.chi2_stat.push_back(g);
    bool chi2_alarm = false;
    if (bank->chi2)
      chi2_alarm = detection::chi2_decide(out.residual, out.innovation_cov,
                                          *bank->chi2);
    trace.chi2_alarm.push_back(chi2_alarm);
    bool cusum_alarm = false;
    if (bank->cusum) {
      auto [next, alarm] = detection::cusum_decide(
          cusum_state, out.residual, out.innovation_cov, *bank->cusum);
      cusum_state = next;
      cusum_alarm = alarm;
    }
    trace.cusum_state.push_back(cusum_state);
    trace.cusum_alarm.push_back(cusum_alarm);
  }
};

}  // namespace

Trajectory simulate_closed_loop(
    const PlantModel& model, const control::Controller& controller,
    const sensing::PerceptionMap& pmap,
    const std::optional<adversary::AttackConfig>& attacker,
    const std::optional<DetectorBank>& detectors, int horizon,
    std::uint64_t seed, const SimOptions& opts) {
  if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
  if (attacker) attacker->validate(model.state_dim);

  const int n = model.state_dim;
  Vector x0 = opts.x0.size() ? opts.x0 : Vector::Zero(n);
  if (x0.size() != n) throw std::invalid_argument("simulate: x0 dimension mismatch");

  NoiseStream w_stream(seed, "process");
  NoiseStream v_stream(seed, "sensor");
  NoiseStream zeta_stream(seed, "attacker_zeta");

  Trajectory traj;
  traj.dt = opts.dt;
  traj.horizon = horizon;
  traj.seed = seed;
  auto reserve = [&](auto& v) { v.reserve(horizon + 1); };
  reserve(traj.x); reserve(traj.x_a); reserve(traj.s); reserve(traj.e);
  reserve(traj.y_s); reserve(traj.y_s_a); reserve(traj.y_p); reserve(traj.y_p_a);

  DetectorRunner det_free, det_att;
  detection::MeasurementModel meas;
  const bool detecting = detectors.has_value();
  if (detecting) {
    meas = detection::stacked_measurement(model, pmap);
    det_free.bank = &*detectors;
    det_att.bank = &*detectors;
    det_free.ekf = detection::make_ekf(model);
    det_att.ekf = detection::make_ekf(model);
  }

  const Vector zero_s = Vector::Zero(n);
  Vector x = x0;
  Vector x_a = x0;
  Vector s_cur = zero_s;
  Vector u_free_prev = Vector::Zero(model.input_dim);
  Vector u_att_prev = Vector::Zero(model.input_dim);
  const int start = attacker ? attacker->start_step : 0;
  const bool lti = attacker && attacker->strategy == adversary::Strategy::lti;

  for (int t = 0; t <= horizon; ++t) {
    if (attacker && t == start) s_cur = attacker->s0;

    Vector v_t = v_stream.gaussian_cov(static_cast<std::uint64_t>(t), model.chol_vs);
    Vector w_t = w_stream.gaussian_cov(static_cast<std::uint64_t>(t), model.chol_w);

    Vector e = x_a - s_cur;
    Vector y_p = sensing::perceive(pmap, x);
    Vector y_s = model.C_s * x + v_t;
    Vector y_p_a = sensing::perceive(pmap, e);
    Vector y_s_a = model.C_s * e + v_t;

    traj.x.push_back(x);
    traj.x_a.push_back(x_a);
    traj.s.push_back(s_cur);
    traj.e.push_back(e);
    traj.y_p.push_back(y_p);
    traj.y_s.push_back(y_s);
    traj.y_p_a.push_back(y_p_a);
    traj.y_s_a.push_back(y_s_a);
    traj.last_valid = t;

    if (detecting) {
      if (opts.detect_attack_free)
        det_free.observe(model, meas, u_free_prev,
                         (Vector(meas.C.rows()) << y_p, y_s).finished());
      det_att.observe(model, meas, u_att_prev,
                      (Vector(meas.C.rows()) << y_p_a, y_s_a).finished());
    }

    if (t == horizon) break;

    Vector u_free = controller.policy(y_p, y_s);
    Vector u_att = controller.policy(y_p_a, y_s_a);

    // The offset recurrence consumes the current attacked state; for the
    // estimate-based strategy the attacker's estimation error is a fresh
    // draw on its own stream.
    if (attacker && t >= start) {
      adversary::AttackState st{s_cur, zero_s};
      switch (attacker->strategy) {
        case adversary::Strategy::estimate_based: {
          Vector zeta = attacker->b_zeta > 0.0
                            ? zeta_stream.uniform_ball(
                                  static_cast<std::uint64_t>(t), n,
                                  attacker->b_zeta)
                            : zero_s;
          st = adversary::advance_strategy1(model, st, x_a, zeta);
          break;
        }
        case adversary::Strategy::open_loop:
        case adversary::Strategy::lti:
          st = adversary::advance_strategy2(model, st, lti);
          break;
      }
      s_cur = st.s;
    }

    x = model.f(x) + model.B * u_free + w_t;
    x_a = model.f(x_a) + model.B * u_att + w_t;
    u_free_prev = u_free;
    u_att_prev = u_att;

    if (!x.allFinite() || !x_a.allFinite() ||
        x.norm() > opts.divergence_limit || x_a.norm() > opts.divergence_limit) {
      traj.diverged = true;
      break;
    }
  }

  if (detecting) {
    if (opts.detect_attack_free) traj.det = std::move(det_free.trace);
    traj.det_a = std::move(det_att.trace);
  }
  return traj;
}

}  // namespace stealthsim::dynamics
