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
#include "stealthsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stealthsim/rng.hpp"
#include "stealthsim/simulate.hpp"

namespace stealthsim::detection {

MeasurementModel stacked_measurement(const dynamics::PlantModel& model,
                                     const sensing::PerceptionMap& pmap) {
  const int p = pmap.output_dim();
  const int s = model.sensor_dim;
  const int n = model.state_dim;
  MeasurementModel m;
  m.C = Matrix::Zero(p + s, n);
  m.C.topRows(p) = pmap.C_p;
  m.C.bottomRows(s) = model.C_s;
  m.R = Matrix::Zero(p + s, p + s);
  // Bounded perception error fused as measurement noise with effective
  // covariance (gamma^2 / p) I; floored so R stays invertible when gamma=0.
  const double pr = std::max(pmap.gamma * pmap.gamma / std::max(p, 1), 1e-12);
  m.R.topLeftCorner(p, p) = pr * Matrix::Identity(p, p);
  m.R.bottomRightCorner(s, s) =
      model.sigma_vs + 1e-12 * Matrix::Identity(s, s);
  return m;
}

EkfState make_ekf(const dynamics::PlantModel& model, double p0) {
  return {Vector::Zero(model.state_dim),
          p0 * Matrix::Identity(model.state_dim, model.state_dim)};
}

EkfOutput ekf_step(const EkfState& ekf, const dynamics::PlantModel& model,
                   const MeasurementModel& meas, const Vector& u,
                   const Vector& y) {
  // Predict.
  Matrix F = model.jacobian(ekf.x_hat);
  Vector x_pred = model.f(ekf.x_hat) + model.B * u;
  Matrix P_pred = F * ekf.P * F.transpose() + model.sigma_w;

  // Update.
  Vector residual = y - meas.C * x_pred;
  Matrix S = meas.C * P_pred * meas.C.transpose() + meas.R;
  Eigen::LDLT<Matrix> ldlt(S);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    S += 1e-9 * Matrix::Identity(S.rows(), S.cols());
    ldlt.compute(S);
  }
  Matrix K = P_pred * meas.C.transpose() * ldlt.solve(
                 Matrix::Identity(S.rows(), S.cols()));
  Vector x_new = x_pred + K * residual;
  Matrix P_new = (Matrix::Identity(P_pred.rows(), P_pred.cols()) - K * meas.C) *
                 P_pred;
  // Keep the covariance symmetric positive definite.
  P_new = 0.5 * (P_new + P_new.transpose()).eval();
  P_new += 1e-12 * Matrix::Identity(P_new.rows(), P_new.cols());

  return {{std::move(x_new), std::move(P_new)}, std::move(residual),
          std::move(S)};
}

void DetectorConfig::validate() const {
  if (!(threshold > 0.0))
    throw std::invalid_argument("detector threshold must be positive");
}

double chi2_statistic(const Vector& residual, const Matrix& innovation_cov) {
  Eigen::LDLT<Matrix> ldlt(innovation_cov);
  return residual.dot(ldlt.solve(residual));
}

bool chi2_decide(const Vector& residual, const Matrix& innovation_cov,
                 const DetectorConfig& cfg) {
  if (cfg.kind != DetectorKind::chi2)
    throw std::invalid_argument("chi2_decide: wrong detector kind");
  return chi2_statistic(residual, innovation_cov) > cfg.threshold;
}

std::pair<double, bool> cusum_decide(double state, const Vector& residual,
                                     const Matrix& innovation_cov,
                                     const DetectorConfig& cfg) {
  if (cfg.kind != DetectorKind::cusum)
    throw std::invalid_argument("cusum_decide: wrong detector kind");
  double g = chi2_statistic(residual, innovation_cov);
  double next = std::max(0.0, state + g - cfg.cusum_drift);
  bool alarm = next > cfg.threshold;
  if (alarm) next = 0.0;  // restart after an alarm
  return {next, alarm};
}

namespace {

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  double idx = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(idx);
  auto hi = std::min(lo + 1, values.size() - 1);
  double w = idx - static_cast<double>(lo);
  return (1.0 - w) * values[lo] + w * values[hi];
}

double cusum_alarm_rate(const std::vector<std::vector<double>>& stats,
                        double nu, double h) {
  long alarms = 0, steps = 0;
  for (const auto& run : stats) {
    double state = 0.0;
    for (double g : run) {
      state = std::max(0.0, state + g - nu);
      ++steps;
      if (state > h) {
        ++alarms;
        state = 0.0;
      }
    }
  }
  return steps ? static_cast<double>(alarms) / static_cast<double>(steps) : 0.0;
}

}  // namespace

DetectorConfig calibrate_threshold(DetectorKind kind,
                                   const dynamics::PlantModel& model,
                                   const control::Controller& controller,
                                   const sensing::PerceptionMap& pmap,
                                   double target_fa, int n_runs, int horizon,
                                   std::uint64_t seed) {
  if (!(target_fa > 0.0 && target_fa < 1.0))
    throw std::invalid_argument("calibrate: target_fa must be in (0,1)");
  if (static_cast<double>(n_runs) * horizon * target_fa < 20.0)
    throw std::invalid_argument(
        "calibrate: n_runs*horizon*target_fa < 20, quantile unresolved");

  // Attack-free ensemble; an unreachable threshold keeps alarms quiet while
  // the per-step statistic is traced.
  dynamics::DetectorBank probe;
  probe.chi2 = DetectorConfig{DetectorKind::chi2,
                              std::numeric_limits<double>::infinity(), 0.0, 1};
  std::vector<std::vector<double>> stats;
  stats.reserve(n_runs);
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(n_runs) * (horizon + 1));
  for (int i = 0; i < n_runs; ++i) {
    auto traj = dynamics::simulate_closed_loop(
        model, controller, pmap, std::nullopt, probe, horizon,
        NoiseStream::derive_seed(seed, 0xCA11B000ull + i), {});
    stats.push_back(traj.det_a->chi2_stat);
    pooled.insert(pooled.end(), traj.det_a->chi2_stat.begin(),
                  traj.det_a->chi2_stat.end());
  }

  DetectorConfig cfg;
  cfg.kind = kind;
  if (kind == DetectorKind::chi2) {
    cfg.threshold = quantile(pooled, 1.0 - target_fa);
    return cfg;
  }

  // CUSUM: drift a bit above the in-control mean so the state keeps
  // returning to zero, then bisect the threshold on replayed statistics.
  double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) /
                static_cast<double>(pooled.size());
  cfg.cusum_drift = 1.25 * mean;
  double lo = 0.0, hi = quantile(pooled, 1.0) * 50.0 + 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cusum_alarm_rate(stats, cfg.cusum_drift, mid) > target_fa)
      lo = mid;
    else
      hi = mid;
  }
  cfg.threshold = 0.5 * (lo + hi);
  return cfg;
}

AlarmStats alarm_statistics(
    const std::vector<std::vector<bool>>& attacked_alarms,
    const std::vector<std::vector<bool>>& attack_free_alarms) {
  if (attacked_alarms.empty() || attack_free_alarms.empty())
    throw std::invalid_argument("alarm_statistics: empty run collection");

  auto any = [](const std::vector<bool>& run) {
    return std::any_of(run.begin(), run.end(), [](bool b) { return b; });
  };
  auto per_step = [](const std::vector<std::vector<bool>>& runs) {
    std::size_t len = 0;
    for (const auto& r : runs) len = std::max(len, r.size());
    std::vector<double> rate(len, 0.0);
    std::vector<int> denom(len, 0);
    for (const auto& r : runs)
      for (std::size_t t = 0; t < r.size(); ++t) {
        rate[t] += r[t] ? 1.0 : 0.0;
        ++denom[t];
      }
    for (std::size_t t = 0; t < len; ++t)
      if (denom[t] > 0) rate[t] /= denom[t];
    return rate;
  };

  AlarmStats st;
  long td = std::count_if(attacked_alarms.begin(), attacked_alarms.end(), any);
  long fa = std::count_if(attack_free_alarms.begin(), attack_free_alarms.end(), any);
  st.p_td = static_cast<double>(td) / attacked_alarms.size();
  st.p_fa = static_cast<double>(fa) / attack_free_alarms.size();
  st.p_e = 1.0 - st.p_td + st.p_fa;
  st.per_step_td = per_step(attacked_alarms);
  st.per_step_fa = per_step(attack_free_alarms);
  return st;
}

}  // namespace stealthsim::detection
