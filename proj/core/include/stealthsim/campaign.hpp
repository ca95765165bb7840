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
#ifndef STEALTHSIM_CAMPAIGN_HPP
#define STEALTHSIM_CAMPAIGN_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stealthsim/analysis.hpp"
#include "stealthsim/config.hpp"
#include "stealthsim/detection.hpp"
#include "stealthsim/presets.hpp"
#include "stealthsim/simulate.hpp"

namespace stealthsim::harness {

struct RunSummary {
  int run = 0;
  std::uint64_t seed = 0;
  double max_abs_deviation_attacked = 0.0;
  double max_abs_deviation_free = 0.0;
  double final_deviation_attacked = 0.0;
  bool attacked_chi2_alarm = false;
  bool attacked_cusum_alarm = false;
  bool free_chi2_alarm = false;
  bool free_cusum_alarm = false;
  bool diverged = false;
};

struct CampaignResult {
  ExperimentConfig config;
  CaseStudy study;
  detection::DetectorConfig chi2_cfg;
  detection::DetectorConfig cusum_cfg;
  std::vector<RunSummary> runs;
  detection::AlarmStats chi2_stats;
  detection::AlarmStats cusum_stats;
  std::optional<analysis::AttackabilityReport> attackability;
  std::optional<analysis::StealthinessReport> stealthiness;
  dynamics::Trajectory sample_trajectory;  // run 0, exported for plots
  std::vector<std::string> manifest;
};

/// Runs a paired attacked/attack-free Monte Carlo campaign: calibrates the
/// detectors (unless thresholds are pinned in the config), distributes runs
/// over a worker pool with per-run seeds, and aggregates alarm statistics.
CampaignResult run_montecarlo(const ExperimentConfig& config, int n_runs);

/// Loads a case-study preset, applies config overrides, runs the campaign
/// and the matching condition checkers. Throws ConfigError for unknown
/// names (the message lists the valid ones).
CampaignResult run_casestudy(const std::string& name,
                             const ExperimentConfig& overrides,
                             std::uint64_t seed);

/// Order-preserving parallel map over [0, n): results land by index.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace stealthsim::harness

#endif  // STEALTHSIM_CAMPAIGN_HPP
