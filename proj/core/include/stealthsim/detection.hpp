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
#ifndef STEALTHSIM_DETECTION_HPP
#define STEALTHSIM_DETECTION_HPP

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "stealthsim/control.hpp"
#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"
#include "stealthsim/types.hpp"

namespace stealthsim::detection {

/// Stacked linear measurement model used by the EKF: y = [y_p; y_s],
/// C = [C_p; C_s]. The bounded perception error is fused as an extra
/// measurement with effective covariance (gamma^2 / p) I.
struct MeasurementModel {
  Matrix C;
  Matrix R;
};

MeasurementModel stacked_measurement(const dynamics::PlantModel& model,
                                     const sensing::PerceptionMap& pmap);

struct EkfState {
  Vector x_hat;
  Matrix P;
};

EkfState make_ekf(const dynamics::PlantModel& model, double p0 = 1e-2);

struct EkfOutput {
  EkfState state;
  Vector residual;        // y - C x_hat_predicted
  Matrix innovation_cov;  // S = C P_pred C' + R
};

/// Standard EKF predict (f, f_jacobian, sigma_w) + update. A singular
/// innovation covariance is regularized with 1e-9 jitter; the covariance is
/// re-symmetrized after every update.
EkfOutput ekf_step(const EkfState& ekf, const dynamics::PlantModel& model,
                   const MeasurementModel& meas, const Vector& u,
                   const Vector& y);

enum class DetectorKind { chi2, cusum };

struct DetectorConfig {
  DetectorKind kind = DetectorKind::chi2;
  double threshold = 0.0;
  double cusum_drift = 0.0;  // nu, cusum only
  int window = 1;            // per-step decisions

  void validate() const;
};

/// Alarm iff residual' S^-1 residual > threshold.
bool chi2_decide(const Vector& residual, const Matrix& innovation_cov,
                 const DetectorConfig& cfg);

/// g = residual' S^-1 residual; state' = max(0, state + g - nu); alarm iff
/// state' > threshold, after which the state resets to zero.
std::pair<double, bool> cusum_decide(double state, const Vector& residual,
                                     const Matrix& innovation_cov,
                                     const DetectorConfig& cfg);

/// Per-step normalized residual energy.
double chi2_statistic(const Vector& residual, const Matrix& innovation_cov);

/// Empirically calibrates a detector threshold so the attack-free per-step
/// alarm rate matches target_fa. chi2 uses the (1-target_fa) quantile of the
/// per-step statistic; cusum first fixes the drift nu slightly above the
/// mean statistic and then bisects the threshold on replayed state
/// sequences. Throws when n_runs*horizon*target_fa < 20 (quantile would be
/// unresolved).
DetectorConfig calibrate_threshold(DetectorKind kind,
                                   const dynamics::PlantModel& model,
                                   const control::Controller& controller,
                                   const sensing::PerceptionMap& pmap,
                                   double target_fa, int n_runs, int horizon,
                                   std::uint64_t seed);

/// Error statistics of a detector over paired run ensembles.
/// p_fa / p_td are fractions of runs with at least one alarm in the window;
/// p_e = 1 - p_td + p_fa equals one exactly for a random-guess detector.
struct AlarmStats {
  double p_fa = 0.0;
  double p_td = 0.0;
  double p_e = 1.0;
  std::vector<double> per_step_fa;
  std::vector<double> per_step_td;
};

AlarmStats alarm_statistics(const std::vector<std::vector<bool>>& attacked_alarms,
                            const std::vector<std::vector<bool>>& attack_free_alarms);

}  // namespace stealthsim::detection

#endif  // STEALTHSIM_DETECTION_HPP
