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
#include "stealthsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stealthsim/rng.hpp"
#include "stealthsim/simulate.hpp"

namespace stealthsim::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Condition make_condition(std::string name, double lhs, double rhs) {
  bool pass = lhs < rhs;
  return {std::move(name), lhs, rhs, pass};
}

// Geometric tail factor sqrt(c2/c1) e^-beta / (1 - e^-beta); infinite when
// the decay rate is not positive.
double tail_factor(double c1, double c2, double beta) {
  if (beta <= 0.0) return kInf;
  double eb = std::exp(-beta);
  return std::sqrt(c2 / c1) * eb / (1.0 - eb);
}

}  // namespace

// ---------------------------------------------------------------------------
// Stealthiness arithmetic
// ---------------------------------------------------------------------------

double gaussian_kl_same_cov(const Vector& mu_q, const Vector& mu_p,
                            const Matrix& sigma) {
  if (mu_q.size() != mu_p.size() || sigma.rows() != mu_q.size() ||
      sigma.rows() != sigma.cols())
    throw std::invalid_argument("gaussian_kl_same_cov: dimension mismatch");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_kl_same_cov: sigma must be positive definite");
  Vector d = mu_q - mu_p;
  return 0.5 * d.dot(llt.solve(d));
}

double epsilon_from_kl(double kl_bound) {
  if (kl_bound < 0.0)
    throw std::invalid_argument("epsilon_from_kl: KL bound must be nonnegative");
  return std::sqrt(1.0 - std::exp(-kl_bound));
}

double kl_budget_from_epsilon(double epsilon) {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("kl_budget_from_epsilon: epsilon must be in [0,1)");
  return std::log(1.0 / (1.0 - epsilon * epsilon));
}

NoiseSpectralBounds noise_spectral_bounds(const dynamics::PlantModel& model) {
  Eigen::LLT<Matrix> lw(model.sigma_w);
  if (lw.info() != Eigen::Success)
    throw std::invalid_argument("noise_spectral_bounds: sigma_w must be positive definite");
  Eigen::LLT<Matrix> lv(model.sigma_vs);
  if (lv.info() != Eigen::Success)
    throw std::invalid_argument("noise_spectral_bounds: sigma_vs must be positive definite");
  const int n = model.state_dim;
  Matrix w_inv = lw.solve(Matrix::Identity(n, n));
  Matrix v_inv = lv.solve(Matrix::Identity(model.sensor_dim, model.sensor_dim));
  Matrix info = model.C_s.transpose() * v_inv * model.C_s + w_inv;

  NoiseSpectralBounds nb;
  nb.lam_w = Eigen::SelfAdjointEigenSolver<Matrix>(w_inv).eigenvalues().maxCoeff();
  nb.lam_wv = Eigen::SelfAdjointEigenSolver<Matrix>(info).eigenvalues().maxCoeff();
  return nb;
}

// ---------------------------------------------------------------------------
// Divergence-time and success probability
// ---------------------------------------------------------------------------

DivergenceTime divergence_time(
    const std::function<Vector(const Vector&)>& advance, const Vector& s0,
    double alpha, int max_steps) {
  if (s0.norm() == 0.0)
    throw std::invalid_argument("divergence_time: s0 must be nonzero");
  if (alpha <= s0.norm())
    throw std::invalid_argument("divergence_time: alpha must exceed |s0|");
  Vector s = s0;
  for (int t = 0; t <= max_steps; ++t) {
    if (s.norm() >= alpha) return {true, t};
    if (!s.allFinite()) return {false, -1};
    s = advance(s);
  }
  return {false, -1};
}

DeltaEstimate estimate_delta(const dynamics::PlantModel& model,
                             const control::Controller& controller,
                             const sensing::PerceptionMap& pmap, int T,
                             double b_x, double b_v, int n_runs,
                             std::uint64_t seed, const Vector& x0) {
  if (n_runs < 1) throw std::invalid_argument("estimate_delta: n_runs >= 1");
  dynamics::SimOptions opts;
  if (x0.size()) opts.x0 = x0;

  int ok = 0;
  for (int i = 0; i < n_runs; ++i) {
    std::uint64_t run_seed = NoiseStream::derive_seed(seed, i);
    auto traj = dynamics::simulate_closed_loop(model, controller, pmap,
                                               std::nullopt, std::nullopt, T,
                                               run_seed, opts);
    NoiseStream v_stream(run_seed, "sensor");
    bool contained = !traj.diverged;
    for (int t = 0; contained && t <= traj.last_valid; ++t) {
      if (traj.x[t].norm() > b_x) contained = false;
      if (v_stream.gaussian_cov(static_cast<std::uint64_t>(t), model.chol_vs)
              .norm() > b_v)
        contained = false;
    }
    if (contained) ++ok;
  }

  // Wilson 95% interval.
  const double z = 1.959963984540054;
  const double nr = n_runs;
  const double phat = ok / nr;
  const double denom = 1.0 + z * z / nr;
  const double center = (phat + z * z / (2.0 * nr)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nr + z * z / (4.0 * nr * nr)) / denom;
  return {phat, std::max(0.0, center - half), std::min(1.0, center + half),
          ok, n_runs};
}

// ---------------------------------------------------------------------------
// Condition checkers
// ---------------------------------------------------------------------------

AttackabilityReport check_strategy1(const control::LyapunovCertificate& cert,
                                    double b_x, double b_v, double b_zeta,
                                    double alpha, double phi, double norm_B) {
  cert.validate();
  AttackabilityReport rep;
  rep.alpha = alpha;
  rep.L1 = cert.Lp_f * (b_x + 2.0 * b_zeta + phi);
  rep.L2 = std::min(2.0 * cert.L_f, cert.Lp_f * (alpha + b_x + b_zeta));
  rep.L3 = cert.Lp_pi * (b_x + phi + b_v);

  const double gain = rep.L1 + rep.L3 * norm_B;
  rep.conditions.push_back(make_condition("L1 + L3|B| < c3/c4", gain,
                                          cert.c3 / cert.c4));

  const double denom = cert.c3 - gain * cert.c4;
  const double rhs_b = denom > 0.0
                           ? (denom / cert.c4) * std::sqrt(cert.c1 / cert.c2) *
                                 cert.theta * cert.d
                           : 0.0;
  rep.conditions.push_back(
      make_condition("L2 b_zeta < perturbation margin", rep.L2 * b_zeta, rhs_b));

  if (denom > 0.0) {
    rep.b = (cert.c4 / denom) * std::sqrt(cert.c2 / cert.c1) *
            (rep.L2 * b_zeta / cert.theta);
    rep.beta = (1.0 - cert.theta) * denom / (2.0 * cert.c2);
  } else {
    rep.b = kInf;
    rep.beta = 0.0;
  }
  rep.conditions.push_back(make_condition("b < phi", rep.b, phi));

  rep.rho = 2.0 * cert.L_f * (b_x + rep.b + b_zeta);
  rep.verdict = true;
  for (const auto& c : rep.conditions) rep.verdict = rep.verdict && c.pass;
  return rep;
}

StealthinessReport check_strategy1_exact(
    const control::LyapunovCertificate& cert, const NoiseSpectralBounds& nb,
    double b_x, double b_v, double s0_norm, double alpha, int T_alpha,
    double norm_B) {
  cert.validate();
  StealthinessReport rep;
  rep.T_alpha = T_alpha;

  const double L1 = cert.Lp_f * b_x;
  const double L3 = cert.Lp_pi * (b_x + b_v);
  const double gain = L1 + L3 * norm_B;
  rep.conditions.push_back(
      make_condition("L1 + L3|B| < c3/c4", gain, cert.c3 / cert.c4));

  const double denom = cert.c3 - cert.c4 * gain;
  const double s0_den = cert.c4 * (cert.Lp_f + norm_B * cert.Lp_pi);
  const double s0_limit = (denom > 0.0 && s0_den > 0.0) ? denom / s0_den
                          : denom > 0.0                 ? kInf
                                                        : 0.0;
  rep.conditions.push_back(
      {"|s0| <= s0 limit", s0_norm, s0_limit, s0_norm <= s0_limit});

  rep.beta = denom > 0.0 ? (1.0 - cert.theta) * denom / (2.0 * cert.c2) : 0.0;
  const double tail = tail_factor(cert.c1, cert.c2, rep.beta);
  const double window = std::min(static_cast<double>(T_alpha), tail);
  rep.kl_bound = (nb.lam_w + nb.lam_wv * window) * s0_norm * s0_norm;
  rep.epsilon = epsilon_from_kl(rep.kl_bound);
  rep.strict = rep.kl_bound == 0.0;
  rep.rho = 2.0 * cert.L_f * (b_x + s0_norm);
  (void)alpha;

  rep.verdict = true;
  for (const auto& c : rep.conditions) rep.verdict = rep.verdict && c.pass;
  return rep;
}

StealthinessReport check_strategy1_expstable(
    const control::LyapunovCertificate& cert, const NoiseSpectralBounds& nb,
    double b_x, double b_v, double b_zeta, double alpha, int T_alpha) {
  cert.validate();
  StealthinessReport rep;
  rep.T_alpha = T_alpha;
  rep.b = (cert.c4 / cert.c3) * std::sqrt(cert.c2 / cert.c1) *
          (cert.L_f * (2.0 * b_x + b_zeta) +
           2.0 * cert.L_pi * (b_x + b_v)) /
          cert.theta;
  rep.kl_bound = nb.lam_wv * rep.b * (static_cast<double>(T_alpha) + 1.0);
  rep.epsilon = epsilon_from_kl(rep.kl_bound);
  rep.strict = rep.kl_bound == 0.0;
  rep.rho = 2.0 * cert.L_f * (b_x + rep.b + b_zeta);
  rep.beta = 0.0;
  (void)alpha;
  rep.verdict = true;
  return rep;
}

AttackabilityReport check_strategy2(const control::LyapunovCertificate& cert,
                                    double b_x, double b_v, double alpha,
                                    double phi, double norm_B, bool f_in_U0) {
  cert.validate();
  AttackabilityReport rep;
  rep.alpha = alpha;
  rep.L2 = cert.Lp_f * (alpha + b_x);
  rep.L1 = cert.Lp_f * (alpha + phi);
  rep.L3 = cert.Lp_pi * (b_x + phi + b_v);

  const double gain = rep.L1 + rep.L3 * norm_B;
  rep.conditions.push_back(
      make_condition("L1 + L3|B| < c3/c4", gain, cert.c3 / cert.c4));

  const double denom = cert.c3 - gain * cert.c4;
  const double rhs_b = denom > 0.0
                           ? (denom / cert.c4) * std::sqrt(cert.c1 / cert.c2) *
                                 cert.theta * cert.d
                           : 0.0;
  rep.conditions.push_back(
      make_condition("L2 b_x < perturbation margin", rep.L2 * b_x, rhs_b));

  if (denom > 0.0) {
    rep.b = (cert.c4 / denom) * std::sqrt(cert.c2 / cert.c1) *
            (rep.L2 * b_x / cert.theta);
    rep.beta = (1.0 - cert.theta) * denom / (2.0 * cert.c2);
  } else {
    rep.b = kInf;
    rep.beta = 0.0;
  }
  rep.conditions.push_back(make_condition("b < phi", rep.b, phi));
  rep.conditions.push_back(
      {"f in U_0 (instability test)", f_in_U0 ? 1.0 : 0.0, 1.0, f_in_U0});

  rep.rho = 0.0;  // open-loop recurrence is undisturbed
  rep.verdict = true;
  for (const auto& c : rep.conditions) rep.verdict = rep.verdict && c.pass;
  return rep;
}

StealthinessReport check_lti_endtoend(const control::LyapunovCertificate& cert,
                                      const NoiseSpectralBounds& nb,
                                      double b_x, double b_v, double s0_norm,
                                      double alpha, int T_alpha,
                                      double norm_B) {
  cert.validate();
  StealthinessReport rep;
  rep.T_alpha = T_alpha;

  // The s0 bound plays the role of the r_t confinement radius here.
  const double L3 = cert.Lp_pi * (b_x + b_v + s0_norm);
  const double gain = L3 * norm_B;
  rep.conditions.push_back(
      make_condition("L3|B| < c3/c4", gain, cert.c3 / cert.c4));

  const double denom = cert.c3 - cert.c4 * gain;
  const double s0_den = cert.c4 * norm_B * cert.Lp_pi;
  const double s0_limit = (denom > 0.0 && s0_den > 0.0) ? denom / s0_den
                          : denom > 0.0                 ? kInf
                                                        : 0.0;
  rep.conditions.push_back(
      {"|s0| <= s0 limit", s0_norm, s0_limit, s0_norm <= s0_limit});

  rep.beta = denom > 0.0 ? (1.0 - cert.theta) * denom / (2.0 * cert.c2) : 0.0;
  const double tail = tail_factor(cert.c1, cert.c2, rep.beta);
  const double window = std::min(static_cast<double>(T_alpha), tail);
  rep.kl_bound = (nb.lam_w + nb.lam_wv * window) * s0_norm * s0_norm;
  rep.epsilon = epsilon_from_kl(rep.kl_bound);
  rep.strict = rep.kl_bound == 0.0;
  (void)alpha;

  rep.verdict = true;
  for (const auto& c : rep.conditions) rep.verdict = rep.verdict && c.pass;
  return rep;
}

StealthinessReport check_lti_linear_feedback(
    const Matrix& A, const Matrix& B, const Matrix& K, const Matrix& C,
    const NoiseSpectralBounds& nb, double gamma, const Vector& s0,
    double alpha, double safe_radius, bool allow_marginal) {
  Matrix closed = A + B * K * C;
  const double rho_cl = spectral_radius(closed);
  if (rho_cl >= 1.0)
    throw std::invalid_argument(
        "check_lti_linear_feedback: closed loop A+BKC must be Schur stable");

  StealthinessReport rep;
  Eigen::VectorXcd eigs = A.eigenvalues();
  const double max_mod = eigs.cwiseAbs().maxCoeff();
  bool unstable = max_mod > 1.0 + 1e-12;
  bool marginal = !unstable && max_mod > 1.0 - 1e-12;
  rep.conditions.push_back({allow_marginal ? "A unstable (or marginal Jordan growth)"
                                           : "A strictly unstable",
                            max_mod, 1.0,
                            unstable || (allow_marginal && marginal)});

  Matrix A_copy = A;
  auto advance = [&A_copy](const Vector& s) -> Vector { return A_copy * s; };
  auto T = divergence_time(advance, s0, alpha + safe_radius, 10000000);
  rep.conditions.push_back({"offset recurrence reaches alpha + R_S",
                            T.reached ? 1.0 : 0.0, 1.0, T.reached});
  rep.T_alpha = T.steps;

  if (T.reached) {
    rep.kl_bound = nb.lam_wv *
                   (2.0 * gamma * static_cast<double>(T.steps) + s0.norm()) /
                   (1.0 - rho_cl);
    rep.epsilon = epsilon_from_kl(rep.kl_bound);
    rep.strict = rep.kl_bound == 0.0;
  }
  rep.verdict = true;
  for (const auto& c : rep.conditions) rep.verdict = rep.verdict && c.pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Instability-set membership
// ---------------------------------------------------------------------------

InstabilityReport instability_test(
    const std::function<Vector(const Vector&)>& f,
    const std::function<double(const Vector&)>& V,
    const std::function<Vector(const Vector&)>& grad_V,
    const std::function<double(double)>& alpha_fn,
    const std::function<double(double)>& beta_fn, int dim,
    const InstabilityOptions& opts) {
  if (!(opts.r1 > opts.r2 && opts.r2 > 0.0))
    throw std::invalid_argument("instability_test: requires r1 > r2 > 0");

  NoiseStream sampler(opts.seed, "instability_samples");
  InstabilityReport rep;

  // Analytic path on {x in B_r1 : V(x) > 0, |x| >= r2}.
  rep.inf_ratio = kInf;
  std::uint64_t draw = 0;
  int kept = 0;
  const std::uint64_t budget = 200ull * opts.n_samples;
  while (kept < opts.n_samples && draw < budget) {
    Vector x = sampler.uniform_ball(draw++, dim, opts.r1);
    if (x.norm() < opts.r2 || V(x) <= 0.0) continue;
    ++kept;
    const double nx = x.norm();
    if (V(f(x)) - V(x) < alpha_fn(nx)) ++rep.decrement_violations;
    if (grad_V(x).norm() > beta_fn(nx) * (1.0 + 1e-9)) ++rep.gradient_violations;
    double beta = beta_fn(nx);
    if (beta > 0.0) rep.inf_ratio = std::min(rep.inf_ratio, alpha_fn(nx) / beta);
  }
  if (kept == 0)
    throw std::invalid_argument("instability_test: sample region is empty");
  rep.n_samples = kept;
  rep.member = rep.decrement_violations == 0 && rep.gradient_violations == 0 &&
               rep.inf_ratio > opts.rho;

  // Empirical path: escape-opposing disturbance from starts just outside r2.
  int exits = 0;
  int starts = 0;
  std::uint64_t sdraw = 1ull << 32;
  while (starts < opts.n_starts && sdraw < (1ull << 32) + budget) {
    Vector x = sampler.uniform_ball(sdraw++, dim, 2.0 * opts.r2);
    if (x.norm() < opts.r2 || V(x) <= 0.0) continue;
    ++starts;
    for (int t = 0; t < opts.max_steps; ++t) {
      if (x.norm() > opts.r1) {
        ++exits;
        break;
      }
      Vector next = f(x);
      Vector g = grad_V(next);
      double gn = g.norm();
      if (opts.rho > 0.0 && gn > 1e-12) next -= (opts.rho / gn) * g;
      x = next;
      if (!x.allFinite()) break;
    }
  }
  rep.exits = exits;
  rep.n_starts = starts;
  rep.empirical_all_exit = starts > 0 && exits == starts;
  return rep;
}

}  // namespace stealthsim::analysis
