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

// Command-line front end: simulate / attack / detect / check / stealth /
// montecarlo / casestudy. Exit codes: 0 on success, 2 for configuration
// errors, 3 when an attack-free run diverges.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stealthsim/analysis.hpp"
#include "stealthsim/campaign.hpp"
#include "stealthsim/config.hpp"
#include "stealthsim/export.hpp"
#include "stealthsim/presets.hpp"
#include "stealthsim/rng.hpp"
#include "stealthsim/simulate.hpp"

namespace ss = stealthsim;
using ss::harness::CampaignResult;
using ss::harness::ExperimentConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct GlobalArgs {
  std::uint64_t seed = 42;
  bool seed_set = false;
  std::string out = "out";
  int runs = 0;
  int horizon = 0;
  std::string config_path;
  std::string case_name = "pendulum";
  std::string strategy;
  double b_zeta = -1.0;
  std::vector<double> s0;
  double alpha = 0.0;
};

std::uint64_t resolve_seed(const GlobalArgs& g) {
  if (g.seed_set) return g.seed;
  if (const char* env = std::getenv("STEALTHSIM_SEED"))
    return std::strtoull(env, nullptr, 10);
  return g.seed;
}

ExperimentConfig build_config(const GlobalArgs& g) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) cfg = ExperimentConfig::load(g.config_path);
  if (g.config_path.empty()) cfg.case_name = g.case_name;
  cfg.seed = resolve_seed(g);
  cfg.out_dir = g.out;
  if (g.runs > 0) cfg.n_runs = g.runs;
  cfg.horizon = g.horizon;  // 0 -> case default
  if (!g.strategy.empty()) {
    if (g.strategy == "estimate_based")
      cfg.strategy = ss::adversary::Strategy::estimate_based;
    else if (g.strategy == "open_loop")
      cfg.strategy = ss::adversary::Strategy::open_loop;
    else if (g.strategy == "lti")
      cfg.strategy = ss::adversary::Strategy::lti;
    else
      throw ss::harness::ConfigError("unknown strategy: " + g.strategy);
  }
  if (g.b_zeta >= 0.0) cfg.b_zeta = g.b_zeta;
  if (!g.s0.empty()) {
    cfg.s0 = ss::Vector(g.s0.size());
    for (std::size_t i = 0; i < g.s0.size(); ++i) cfg.s0(i) = g.s0[i];
  }
  return cfg;
}

void print_conditions(const std::vector<ss::analysis::Condition>& conds) {
  for (const auto& c : conds)
    std::cout << "  " << (c.pass ? "[ok]  " : "[FAIL]") << " " << c.name
              << ": " << c.lhs << " vs " << c.rhs << "\n";
}

void print_stealth(const ss::analysis::StealthinessReport& rep) {
  std::cout << "stealthiness report\n";
  print_conditions(rep.conditions);
  std::cout << "  b_eps (KL bound) = " << rep.kl_bound << "\n"
            << "  epsilon          = " << rep.epsilon << "\n"
            << "  strict           = " << (rep.strict ? "yes" : "no") << "\n"
            << "  T_alpha          = " << rep.T_alpha << "\n"
            << "  verdict          = " << (rep.verdict ? "pass" : "fail")
            << "\n";
}

void print_attackability(const ss::analysis::AttackabilityReport& rep) {
  std::cout << "attackability report\n";
  print_conditions(rep.conditions);
  std::cout << "  L1=" << rep.L1 << " L2=" << rep.L2 << " L3=" << rep.L3
            << " b=" << rep.b << " beta=" << rep.beta << " rho=" << rep.rho
            << "\n";
  if (rep.delta) std::cout << "  delta ~= " << *rep.delta << "\n";
  std::cout << "  verdict = " << (rep.verdict ? "pass" : "fail") << "\n";
}

int export_and_report(CampaignResult& result, const std::string& out_dir) {
  auto files = ss::harness::export_campaign(result, out_dir,
                                            ss::harness::ExportFormat::csv);
  auto svgs = ss::harness::export_campaign(result, out_dir,
                                           ss::harness::ExportFormat::svg);
  files.insert(files.end(), svgs.begin(), svgs.end());
  result.manifest = files;

  std::cout << "chi2:  p_fa=" << result.chi2_stats.p_fa
            << " p_td=" << result.chi2_stats.p_td
            << " p_e=" << result.chi2_stats.p_e << "\n";
  std::cout << "cusum: p_fa=" << result.cusum_stats.p_fa
            << " p_td=" << result.cusum_stats.p_td
            << " p_e=" << result.cusum_stats.p_e << "\n";
  if (result.attackability) print_attackability(*result.attackability);
  if (result.stealthiness) print_stealth(*result.stealthiness);
  for (const auto& f : files) std::cout << "wrote " << f << "\n";

  bool attack_free_divergence = false;
  for (const auto& r : result.runs)
    if (r.diverged && !result.config.attack_enabled)
      attack_free_divergence = true;
  return attack_free_divergence ? kExitDivergence : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stealthy false-data attack simulator and condition checker"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--seed", g.seed, "campaign seed (env STEALTHSIM_SEED fallback)")
      ->each([&g](const std::string&) { g.seed_set = true; });
  app.add_option("--out", g.out, "output directory");
  app.add_option("--runs", g.runs, "number of Monte Carlo runs");
  app.add_option("--horizon", g.horizon, "steps per run (0 = case default)");

  auto add_common = [&](CLI::App* sub, bool with_case = true) {
    sub->fallthrough();  // let --seed/--out/--runs/--horizon follow the verb
    sub->add_option("--config", g.config_path, "JSON experiment config");
    if (with_case)
      sub->add_option("--case", g.case_name, "case study (pendulum|vehicle)");
    sub->add_option("--strategy", g.strategy,
                    "attack strategy (estimate_based|open_loop|lti)");
    sub->add_option("--b-zeta", g.b_zeta, "attacker estimation error radius");
    sub->add_option("--s0", g.s0, "attack offset initial condition");
  };

  auto* sim = app.add_subcommand("simulate", "attack-free closed-loop run");
  add_common(sim);
  auto* atk = app.add_subcommand("attack", "paired attacked/attack-free run");
  add_common(atk);
  auto* det = app.add_subcommand("detect",
                                 "calibrated detectors on a paired run");
  add_common(det);
  auto* chk = app.add_subcommand("check", "attackability condition checkers");
  add_common(chk);
  chk->add_option("--alpha", g.alpha, "unsafe-region radius override");
  auto* stl = app.add_subcommand("stealth", "stealthiness bound report");
  add_common(stl);
  stl->add_option("--alpha", g.alpha, "unsafe-region radius override");
  auto* mc = app.add_subcommand("montecarlo", "full Monte Carlo campaign");
  add_common(mc);
  auto* cstudy = app.add_subcommand("casestudy", "preset end-to-end campaign");
  cstudy->add_option("name", g.case_name, "pendulum | vehicle")->required();
  add_common(cstudy, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed() || atk->parsed() || det->parsed() || mc->parsed() ||
        cstudy->parsed()) {
      ExperimentConfig cfg = build_config(g);
      if (sim->parsed()) cfg.attack_enabled = false;
      CampaignResult result = ss::harness::run_casestudy(
          cfg.case_name, cfg, cfg.seed);
      return export_and_report(result, cfg.out_dir);
    }

    // check / stealth: condition checkers only, no campaign.
    ExperimentConfig cfg = build_config(g);
    auto study = ss::harness::make_case(cfg.case_name, cfg.dt,
                                        cfg.perception_seed);
    if (g.alpha > 0.0) study.alpha_unsafe = g.alpha;
    if (!cfg.s0.size()) cfg.s0 = study.default_attack.s0;
    auto nb = ss::analysis::noise_spectral_bounds(study.plant);
    const double s0_norm = cfg.s0.norm();
    const double target = study.alpha_unsafe + study.b_x + s0_norm;

    ss::Matrix A = ss::dynamics::linearize(
        study.plant, ss::Vector::Zero(study.plant.state_dim));
    auto advance_lti = [&A](const ss::Vector& s) -> ss::Vector { return A * s; };
    const auto* plant = &study.plant;
    auto advance_f = [plant](const ss::Vector& s) -> ss::Vector {
      return plant->f(s);
    };
    bool use_lti = cfg.strategy.value_or(study.default_attack.strategy) ==
                   ss::adversary::Strategy::lti;
    auto T = ss::analysis::divergence_time(
        use_lti ? std::function<ss::Vector(const ss::Vector&)>(advance_lti)
                : std::function<ss::Vector(const ss::Vector&)>(advance_f),
        cfg.s0, target, 1000000);
    int T_alpha = T.reached ? T.steps : cfg.horizon;
    std::cout << "T(alpha + b_x + |s0|) = "
              << (T.reached ? std::to_string(T.steps) : "not-reached") << "\n";

    if (chk->parsed()) {
      if (study.name == "vehicle") {
        print_stealth(ss::analysis::check_lti_endtoend(
            study.cert, nb, study.b_x, study.b_v, s0_norm, study.alpha_unsafe,
            T_alpha, study.norm_B));
      } else {
        print_attackability(ss::analysis::check_strategy1(
            study.cert, study.b_x, study.b_v, std::max(cfg.b_zeta, 0.0),
            study.alpha_unsafe, study.phi, study.norm_B));
        print_attackability(ss::analysis::check_strategy2(
            study.cert, study.b_x, study.b_v, study.alpha_unsafe, study.phi,
            study.norm_B, true));
      }
      return kExitOk;
    }

    // stealth
    if (study.name == "vehicle") {
      print_stealth(ss::analysis::check_lti_endtoend(
          study.cert, nb, study.b_x, study.b_v, s0_norm, study.alpha_unsafe,
          T_alpha, study.norm_B));
    } else {
      print_stealth(ss::analysis::check_strategy1_exact(
          study.cert, nb, study.b_x, study.b_v, s0_norm, study.alpha_unsafe,
          T_alpha, study.norm_B));
      print_stealth(ss::analysis::check_strategy1_expstable(
          study.cert, nb, study.b_x, study.b_v, std::max(cfg.b_zeta, 0.0),
          study.alpha_unsafe, T_alpha));
    }
    return kExitOk;
  } catch (const ss::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
