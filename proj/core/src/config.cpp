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
#include "stealthsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stealthsim::harness {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + " must be an array");
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ConfigError(where + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

std::string strategy_name(adversary::Strategy s) {
  switch (s) {
    case adversary::Strategy::estimate_based: return "estimate_based";
    case adversary::Strategy::open_loop: return "open_loop";
    case adversary::Strategy::lti: return "lti";
  }
  return "open_loop";
}

adversary::Strategy strategy_from_name(const std::string& s) {
  if (s == "estimate_based") return adversary::Strategy::estimate_based;
  if (s == "open_loop") return adversary::Strategy::open_loop;
  if (s == "lti") return adversary::Strategy::lti;
  throw ConfigError("unknown attack strategy '" + s + "'");
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["case"] = case_name;
  j["dt"] = dt;
  j["horizon"] = horizon;
  j["n_runs"] = n_runs;
  j["seed"] = seed;
  j["perception_seed"] = perception_seed;

  json attack;
  attack["enabled"] = attack_enabled;
  if (strategy) attack["strategy"] = strategy_name(*strategy);
  if (s0.size()) attack["s0"] = vector_to_json(s0);
  attack["b_zeta"] = b_zeta;
  attack["start_step"] = start_step;
  j["attack"] = attack;

  json det;
  det["target_fa"] = target_fa;
  det["calibration_runs"] = calibration_runs;
  if (chi2_threshold) det["chi2_threshold"] = *chi2_threshold;
  if (cusum_threshold) det["cusum_threshold"] = *cusum_threshold;
  if (cusum_drift) det["cusum_drift"] = *cusum_drift;
  j["detectors"] = det;

  if (gamma_override) j["gamma"] = *gamma_override;
  if (x0) j["x0"] = vector_to_json(*x0);
  j["out_dir"] = out_dir;
  j["threads"] = threads;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j,
             {"schema_version", "case", "dt", "horizon", "n_runs", "seed",
              "perception_seed", "attack", "detectors", "gamma", "x0",
              "out_dir", "threads"},
             "config root");
  if (!j.contains("schema_version"))
    throw ConfigError("config is missing schema_version");
  if (j["schema_version"].get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version");

  ExperimentConfig c;
  if (j.contains("case")) c.case_name = j["case"].get<std::string>();
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("horizon")) c.horizon = j["horizon"].get<int>();
  if (j.contains("n_runs")) c.n_runs = j["n_runs"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("perception_seed"))
    c.perception_seed = j["perception_seed"].get<std::uint64_t>();

  if (j.contains("attack")) {
    const json& a = j["attack"];
    check_keys(a, {"enabled", "strategy", "s0", "b_zeta", "start_step"},
               "attack");
    if (a.contains("enabled")) c.attack_enabled = a["enabled"].get<bool>();
    if (a.contains("strategy"))
      c.strategy = strategy_from_name(a["strategy"].get<std::string>());
    if (a.contains("s0")) c.s0 = vector_from_json(a["s0"], "attack.s0");
    if (a.contains("b_zeta")) c.b_zeta = a["b_zeta"].get<double>();
    if (a.contains("start_step")) c.start_step = a["start_step"].get<int>();
  }

  if (j.contains("detectors")) {
    const json& d = j["detectors"];
    check_keys(d,
               {"target_fa", "calibration_runs", "chi2_threshold",
                "cusum_threshold", "cusum_drift"},
               "detectors");
    if (d.contains("target_fa")) c.target_fa = d["target_fa"].get<double>();
    if (d.contains("calibration_runs"))
      c.calibration_runs = d["calibration_runs"].get<int>();
    if (d.contains("chi2_threshold"))
      c.chi2_threshold = d["chi2_threshold"].get<double>();
    if (d.contains("cusum_threshold"))
      c.cusum_threshold = d["cusum_threshold"].get<double>();
    if (d.contains("cusum_drift"))
      c.cusum_drift = d["cusum_drift"].get<double>();
  }

  if (j.contains("gamma")) c.gamma_override = j["gamma"].get<double>();
  if (j.contains("x0")) c.x0 = vector_from_json(j["x0"], "x0");
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();

  if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (c.n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (c.dt <= 0.0) throw ConfigError("dt must be positive");
  if (c.b_zeta < 0.0) throw ConfigError("b_zeta must be nonnegative");
  if (!(c.target_fa > 0.0 && c.target_fa < 1.0))
    throw ConfigError("target_fa must be in (0,1)");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace stealthsim::harness
