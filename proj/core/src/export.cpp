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
#include "stealthsim/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stealthsim::harness {

namespace {

// Shortest round-trip formatting keeps exports byte-deterministic.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[32];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      if (std::strtod(probe, nullptr) == v) return probe;
    }
  }
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path,
                          const dynamics::Trajectory& traj) {
  auto out = open_out(path);
  const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
  out << "t";
  for (int i = 0; i < n; ++i) out << ",x[" << i << "]";
  for (int i = 0; i < n; ++i) out << ",x_a[" << i << "]";
  for (int i = 0; i < n; ++i) out << ",s[" << i << "]";
  out << ",resid_norm,chi2_alarm,cusum_alarm\n";

  const dynamics::DetectionTrace* det =
      traj.det_a ? &*traj.det_a : (traj.det ? &*traj.det : nullptr);
  for (std::size_t t = 0; t < traj.x.size(); ++t) {
    out << t;
    for (int i = 0; i < n; ++i) out << "," << fmt(traj.x[t](i));
    for (int i = 0; i < n; ++i) out << "," << fmt(traj.x_a[t](i));
    for (int i = 0; i < n; ++i) out << "," << fmt(traj.s[t](i));
    if (det && t < det->resid_norm.size()) {
      out << "," << fmt(det->resid_norm[t]) << ","
          << (det->chi2_alarm[t] ? 1 : 0) << ","
          << (det->cusum_alarm[t] ? 1 : 0);
    } else {
      out << ",,,";
    }
    out << "\n";
  }
}

void write_alarm_csv(const std::string& path,
                     const std::vector<double>& fa_rate,
                     const std::vector<double>& td_rate) {
  auto out = open_out(path);
  out << "t,fa_rate,td_rate\n";
  const std::size_t len = std::max(fa_rate.size(), td_rate.size());
  for (std::size_t t = 0; t < len; ++t) {
    out << t << ",";
    if (t < fa_rate.size()) out << fmt(fa_rate[t]);
    out << ",";
    if (t < td_rate.size()) out << fmt(td_rate[t]);
    out << "\n";
  }
}

void write_svg_lines(const std::string& path,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels,
                     const std::string& title) {
  const int width = 800, height = 420, margin = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};

  double lo = 0.0, hi = 1e-12;
  std::size_t len = 1;
  for (const auto& s : series)
    for (double v : s) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  for (const auto& s : series) len = std::max(len, s.size());
  if (hi <= lo) hi = lo + 1.0;

  auto sx = [&](std::size_t t) {
    return margin + (width - 2.0 * margin) * static_cast<double>(t) /
                        static_cast<double>(std::max<std::size_t>(len - 1, 1));
  };
  auto sy = [&](double v) {
    return height - margin - (height - 2.0 * margin) * (v - lo) / (hi - lo);
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin
      << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
      << margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << margin - 6 << "\" y=\"" << sy(hi) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(hi) << "</text>\n";
  out << "<text x=\"" << margin - 6 << "\" y=\"" << sy(lo) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt(lo) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    if (s.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\""
        << palette[k % (sizeof(palette) / sizeof(palette[0]))]
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (t) out << " ";
      out << fmt(sx(t)) << "," << fmt(sy(s[t]));
    }
    out << "\"/>\n";
    if (k < labels.size()) {
      out << "<text x=\"" << width - margin - 150 << "\" y=\""
          << margin + 16 * (k + 1) << "\" font-family=\"sans-serif\" "
          << "font-size=\"12\" fill=\""
          << palette[k % (sizeof(palette) / sizeof(palette[0]))] << "\">"
          << labels[k] << "</text>\n";
    }
  }
  out << "</svg>\n";
}

std::vector<std::string> export_campaign(const CampaignResult& result,
                                         const std::string& out_dir,
                                         ExportFormat format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> manifest;
  auto add = [&](const std::string& name) {
    manifest.push_back((fs::path(out_dir) / name).string());
    return manifest.back();
  };

  if (format == ExportFormat::csv) {
    write_trajectory_csv(add("trajectory.csv"), result.sample_trajectory);
    write_alarm_csv(add("alarms_chi2.csv"), result.chi2_stats.per_step_fa,
                    result.chi2_stats.per_step_td);
    write_alarm_csv(add("alarms_cusum.csv"), result.cusum_stats.per_step_fa,
                    result.cusum_stats.per_step_td);
    return manifest;
  }

  const auto& traj = result.sample_trajectory;
  const int dev = result.study.deviation_index;
  std::vector<double> dev_free, dev_att, resid_free, resid_att;
  for (std::size_t t = 0; t < traj.x.size(); ++t) {
    dev_free.push_back(std::abs(traj.x[t](dev)));
    dev_att.push_back(std::abs(traj.x_a[t](dev)));
  }
  if (traj.det) resid_free = traj.det->resid_norm;
  if (traj.det_a) resid_att = traj.det_a->resid_norm;

  write_svg_lines(add("deviation.svg"), {dev_free, dev_att},
                  {"attack-free", "attacked"}, "|deviation| over time");
  write_svg_lines(add("residual.svg"), {resid_free, resid_att},
                  {"attack-free", "attacked"}, "residual norm over time");
  write_svg_lines(add("alarm_rates_chi2.svg"),
                  {result.chi2_stats.per_step_fa, result.chi2_stats.per_step_td},
                  {"attack-free", "attacked"}, "chi2 per-step alarm rate");
  write_svg_lines(add("alarm_rates_cusum.svg"),
                  {result.cusum_stats.per_step_fa,
                   result.cusum_stats.per_step_td},
                  {"attack-free", "attacked"}, "cusum per-step alarm rate");
  return manifest;
}

}  // namespace stealthsim::harness
