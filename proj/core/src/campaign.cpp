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
#include "stealthsim/campaign.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "stealthsim/rng.hpp"

namespace stealthsim::harness {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

adversary::AttackConfig attack_from_config(const ExperimentConfig& config,
                                           const CaseStudy& study) {
  adversary::AttackConfig atk = study.default_attack;
  if (config.strategy) atk.strategy = *config.strategy;
  if (config.s0.size()) atk.s0 = config.s0;
  atk.b_zeta = config.b_zeta;
  atk.start_step = config.start_step;
  return atk;
}

bool any_alarm(const std::vector<bool>& alarms, int from) {
  for (std::size_t t = std::max(from, 0); t < alarms.size(); ++t)
    if (alarms[t]) return true;
  return false;
}

}  // namespace

CampaignResult run_montecarlo(const ExperimentConfig& config, int n_runs) {
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");

  CampaignResult result;
  result.config = config;
  result.config.n_runs = n_runs;
  result.study = make_case(config.case_name, config.dt, config.perception_seed);
  CaseStudy& study = result.study;
  if (config.gamma_override) {
    study.perception = sensing::make_tanh_perception(
        study.perception.C_p, *config.gamma_override,
        study.perception.safe_radius, config.perception_seed);
  }

  // Detector calibration on a disjoint seed block unless pinned.
  if (config.chi2_threshold) {
    result.chi2_cfg = {detection::DetectorKind::chi2, *config.chi2_threshold,
                       0.0, 1};
  } else {
    result.chi2_cfg = detection::calibrate_threshold(
        detection::DetectorKind::chi2, study.plant, study.controller,
        study.perception, config.target_fa, config.calibration_runs,
        config.horizon, config.seed);
  }
  if (config.cusum_threshold) {
    result.cusum_cfg = {detection::DetectorKind::cusum, *config.cusum_threshold,
                        config.cusum_drift.value_or(1.0), 1};
  } else {
    result.cusum_cfg = detection::calibrate_threshold(
        detection::DetectorKind::cusum, study.plant, study.controller,
        study.perception, config.target_fa, config.calibration_runs,
        config.horizon, config.seed);
    if (config.cusum_drift) result.cusum_cfg.cusum_drift = *config.cusum_drift;
  }

  dynamics::DetectorBank bank;
  bank.chi2 = result.chi2_cfg;
  bank.cusum = result.cusum_cfg;

  std::optional<adversary::AttackConfig> attacker;
  if (config.attack_enabled) attacker = attack_from_config(config, study);

  dynamics::SimOptions opts;
  opts.dt = config.dt;
  if (config.x0) opts.x0 = *config.x0;

  const int dev = study.deviation_index;
  std::vector<RunSummary> runs(n_runs);
  std::vector<std::vector<bool>> chi2_att(n_runs), chi2_free(n_runs);
  std::vector<std::vector<bool>> cusum_att(n_runs), cusum_free(n_runs);
  std::vector<dynamics::Trajectory> first_traj(1);

  parallel_for(n_runs, config.threads, [&](int i) {
    std::uint64_t run_seed = NoiseStream::derive_seed(config.seed, i);
    auto traj = dynamics::simulate_closed_loop(study.plant, study.controller,
                                               study.perception, attacker,
                                               bank, config.horizon, run_seed,
                                               opts);
    RunSummary& rs = runs[i];
    rs.run = i;
    rs.seed = run_seed;
    rs.diverged = traj.diverged;
    for (int t = 0; t <= traj.last_valid; ++t) {
      rs.max_abs_deviation_attacked =
          std::max(rs.max_abs_deviation_attacked, std::abs(traj.x_a[t](dev)));
      rs.max_abs_deviation_free =
          std::max(rs.max_abs_deviation_free, std::abs(traj.x[t](dev)));
    }
    if (traj.last_valid >= 0)
      rs.final_deviation_attacked = traj.x_a[traj.last_valid](dev);
    const int from = config.attack_enabled ? config.start_step : 0;
    rs.attacked_chi2_alarm = any_alarm(traj.det_a->chi2_alarm, from);
    rs.attacked_cusum_alarm = any_alarm(traj.det_a->cusum_alarm, from);
    rs.free_chi2_alarm = any_alarm(traj.det->chi2_alarm, from);
    rs.free_cusum_alarm = any_alarm(traj.det->cusum_alarm, from);
    chi2_att[i] = traj.det_a->chi2_alarm;
    chi2_free[i] = traj.det->chi2_alarm;
    cusum_att[i] = traj.det_a->cusum_alarm;
    cusum_free[i] = traj.det->cusum_alarm;
    if (i == 0) first_traj[0] = std::move(traj);
  });

  result.runs = std::move(runs);
  result.chi2_stats = detection::alarm_statistics(chi2_att, chi2_free);
  result.cusum_stats = detection::alarm_statistics(cusum_att, cusum_free);
  result.sample_trajectory = std::move(first_traj[0]);
  return result;
}

CampaignResult run_casestudy(const std::string& name,
                             const ExperimentConfig& overrides,
                             std::uint64_t seed) {
  ExperimentConfig config = overrides;
  config.case_name = name;
  config.seed = seed;

  CaseStudy study = make_case(name, config.dt, config.perception_seed);
  if (config.horizon <= 0) config.horizon = study.default_horizon;
  if (!config.s0.size()) config.s0 = study.default_attack.s0;
  if (!config.strategy) config.strategy = study.default_attack.strategy;

  CampaignResult result = run_montecarlo(config, config.n_runs);

  // Condition checkers with the case-study preset constants.
  const CaseStudy& st = result.study;
  auto nb = analysis::noise_spectral_bounds(st.plant);
  const Vector s0 = config.s0;
  const double s0_norm = s0.norm();
  const double target = st.alpha_unsafe + st.b_x + s0_norm;

  std::function<Vector(const Vector&)> advance;
  if (config.strategy == adversary::Strategy::lti) {
    Matrix A = linearize(st.plant, Vector::Zero(st.plant.state_dim));
    advance = [A](const Vector& s) -> Vector { return A * s; };
  } else {
    const auto* plant = &st.plant;
    advance = [plant](const Vector& s) -> Vector { return plant->f(s); };
  }
  auto T = analysis::divergence_time(advance, s0, target, 1000000);
  const int T_alpha = T.reached ? T.steps : config.horizon;

  if (name == "vehicle") {
    result.stealthiness = analysis::check_lti_endtoend(
        st.cert, nb, st.b_x, st.b_v, s0_norm, st.alpha_unsafe, T_alpha,
        st.norm_B);
  } else {
    auto rep = analysis::check_strategy1(st.cert, st.b_x, st.b_v,
                                         config.b_zeta, st.alpha_unsafe,
                                         st.phi, st.norm_B);
    rep.T_alpha = T_alpha;
    auto delta = analysis::estimate_delta(st.plant, st.controller,
                                          st.perception, config.horizon,
                                          st.b_x, st.b_v, 100, seed + 1);
    rep.delta = delta.p;
    result.attackability = rep;
    result.stealthiness = analysis::check_strategy1_exact(
        st.cert, nb, st.b_x, st.b_v, s0_norm, st.alpha_unsafe, T_alpha,
        st.norm_B);
  }
  return result;
}

}  // namespace stealthsim::harness
