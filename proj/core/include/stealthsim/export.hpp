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
#ifndef STEALTHSIM_EXPORT_HPP
#define STEALTHSIM_EXPORT_HPP

#include <string>
#include <vector>

#include "stealthsim/campaign.hpp"
#include "stealthsim/dynamics.hpp"

namespace stealthsim::harness {

enum class ExportFormat { csv, svg };

/// Trajectory CSV. Header:
///   t,x[0..n),x_a[0..n),s[0..n),resid_norm,chi2_alarm,cusum_alarm
/// with the residual/alarm columns taken from the attacked-channel trace
/// (empty when no detector ran). Output is byte-deterministic.
void write_trajectory_csv(const std::string& path,
                          const dynamics::Trajectory& traj);

/// Alarm-curve CSV with header `t,fa_rate,td_rate`.
void write_alarm_csv(const std::string& path,
                     const std::vector<double>& fa_rate,
                     const std::vector<double>& td_rate);

/// Minimal static SVG line chart (hand-rolled polylines, no dependencies).
void write_svg_lines(const std::string& path,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels,
                     const std::string& title);

/// Writes the campaign artifacts (trajectory CSV, alarm curves per
/// detector, |deviation| and residual-norm SVG charts) into out_dir and
/// returns the file manifest. Re-exporting the same result produces
/// byte-identical files.
std::vector<std::string> export_campaign(const CampaignResult& result,
                                         const std::string& out_dir,
                                         ExportFormat format);

}  // namespace stealthsim::harness

#endif  // STEALTHSIM_EXPORT_HPP
