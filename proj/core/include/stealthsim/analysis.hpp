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
#ifndef STEALTHSIM_ANALYSIS_HPP
#define STEALTHSIM_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stealthsim/control.hpp"
#include "stealthsim/dynamics.hpp"
#include "stealthsim/sensing.hpp"
#include "stealthsim/types.hpp"

namespace stealthsim::analysis {

// ---------------------------------------------------------------------------
// Stealthiness arithmetic
// ---------------------------------------------------------------------------

/// KL(Q||P) for Gaussians with common covariance and different means:
/// 1/2 (mu_q - mu_p)' Sigma^-1 (mu_q - mu_p). Throws if sigma is not
/// positive definite.
double gaussian_kl_same_cov(const Vector& mu_q, const Vector& mu_p,
                            const Matrix& sigma);

/// epsilon = sqrt(1 - exp(-kl_bound)); the detection-advantage bound implied
/// by a KL budget.
double epsilon_from_kl(double kl_bound);

/// Inverse map: log(1 / (1 - epsilon^2)). Throws for epsilon >= 1.
double kl_budget_from_epsilon(double epsilon);

/// Largest eigenvalues of the noise information matrices used by the
/// stealthiness bounds: lam_w = lambda_max(Sigma_w^-1) and
/// lam_wv = lambda_max(C_s' Sigma_v^-1 C_s + Sigma_w^-1).
struct NoiseSpectralBounds {
  double lam_w = 0.0;
  double lam_wv = 0.0;
};
NoiseSpectralBounds noise_spectral_bounds(const dynamics::PlantModel& model);

// ---------------------------------------------------------------------------
// Divergence-time and success-probability estimators
// ---------------------------------------------------------------------------

struct DivergenceTime {
  bool reached = false;
  int steps = -1;
};

/// Iterates the deterministic map from s0 and returns the first t with
/// |s_t| >= alpha, or not-reached once max_steps is exhausted.
/// Requires s0 != 0 and alpha > |s0|.
DivergenceTime divergence_time(
    const std::function<Vector(const Vector&)>& advance, const Vector& s0,
    double alpha, int max_steps = 1000000);

struct DeltaEstimate {
  double p = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 0.0;
  int successes = 0;
  int n_runs = 0;
};

/// Monte Carlo estimate of delta(T, b_x, b_v): the fraction of attack-free
/// runs whose state and sensor noise stay inside the b_x / b_v balls through
/// step T.
DeltaEstimate estimate_delta(const dynamics::PlantModel& model,
                             const control::Controller& controller,
                             const sensing::PerceptionMap& pmap, int T,
                             double b_x, double b_v, int n_runs,
                             std::uint64_t seed, const Vector& x0 = Vector());

// ---------------------------------------------------------------------------
// Attackability condition checkers
// ---------------------------------------------------------------------------

struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Result of an attackability condition check. Every intermediate quantity
/// is reported so a failed verdict can be audited.
struct AttackabilityReport {
  std::vector<Condition> conditions;
  bool verdict = false;
  double L1 = 0, L2 = 0, L3 = 0;
  double b = 0;            // disturbance ultimate bound on |r_t|
  double beta = 0;         // decay rate from the perturbation lemma
  double rho = 0;          // required instability margin for f
  double alpha = 0;
  int T_alpha = -1;                  // filled by callers that know the recurrence
  std::optional<double> delta;       // success-probability estimate, if attached
  std::optional<double> epsilon;
};

struct StealthinessReport {
  double kl_bound = 0.0;  // b_eps
  double epsilon = 0.0;
  bool strict = false;    // kl_bound == 0
  bool verdict = false;   // preconditions satisfied
  std::optional<double> kl_empirical;
  std::vector<Condition> conditions;
  double b = 0, beta = 0, rho = 0;
  int T_alpha = -1;
};

/// Estimate-based attack conditions (attacker has a state estimate with
/// error radius b_zeta):
///   L1 = L'_f (b_x + 2 b_zeta + phi)
///   L2 = min(2 L_f, L'_f (alpha + b_x + b_zeta))
///   L3 = L'_Pi (b_x + phi + b_v)
///   (a) L1 + L3 |B| < c3/c4
///   (b) L2 b_zeta < ((c3 - (L1 + L3|B|) c4)/c4) sqrt(c1/c2) theta d
///   (c) phi > b,  b = (c4/(c3 - (L1 + L3|B|) c4)) sqrt(c2/c1) L2 b_zeta / theta
/// with rho = 2 L_f (b_x + b + b_zeta) recorded for the instability test.
AttackabilityReport check_strategy1(const control::LyapunovCertificate& cert,
                                    double b_x, double b_v, double b_zeta,
                                    double alpha, double phi, double norm_B);

/// Exact-estimate specialization (b_zeta = 0): stealthiness bound
///   b_eps = (lam_w + lam_wv * min(T_alpha, sqrt(c2/c1) e^-beta/(1-e^-beta)))
///           * s0_norm^2
/// with beta = (1-theta)(c3 - (L1 + L3|B|) c4) / (2 c2).
StealthinessReport check_strategy1_exact(
    const control::LyapunovCertificate& cert, const NoiseSpectralBounds& nb,
    double b_x, double b_v, double s0_norm, double alpha, int T_alpha,
    double norm_B);

/// Variant assuming only exponential stability of the closed loop:
///   b = (c4/c3) sqrt(c2/c1) (L_f (2 b_x + b_zeta) + 2 L_pi (b_x + b_v)) / theta
///   b_eps = lam_wv * b * (T_alpha + 1).
StealthinessReport check_strategy1_expstable(
    const control::LyapunovCertificate& cert, const NoiseSpectralBounds& nb,
    double b_x, double b_v, double b_zeta, double alpha, int T_alpha);

/// Open-loop attack conditions (attacker knows only the plant dynamics):
///   L2 = L'_f (alpha + b_x), L1 = L'_f (alpha + phi),
///   L3 = L'_Pi (b_x + phi + b_v), same inequality structure, and
///   b = (c4/(c3 - (L1 + L3|B|) c4)) sqrt(c2/c1) L2 b_x / theta, phi/b > 1.
/// f_in_U0 is the instability-test verdict for the undisturbed plant.
AttackabilityReport check_strategy2(const control::LyapunovCertificate& cert,
                                    double b_x, double b_v, double alpha,
                                    double phi, double norm_B, bool f_in_U0);

/// LTI plant with a (possibly nonlinear) end-to-end controller:
///   L3 = L'_Pi (b_x + b_v + s0_norm), requires L3 |B| < c3/c4 and
///   s0_norm <= (c3 - c4 L3 |B|) / (c4 |B| L'_Pi); b_eps as in the exact
///   estimate case.
StealthinessReport check_lti_endtoend(const control::LyapunovCertificate& cert,
                                      const NoiseSpectralBounds& nb,
                                      double b_x, double b_v, double s0_norm,
                                      double alpha, int T_alpha,
                                      double norm_B);

/// LTI plant with linear feedback u = K [y_p; y_s]: requires a Schur-stable
/// closed loop and an unstable A (strictly, or marginal Jordan growth when
/// allow_marginal is set).
///   T = divergence_time(s -> A s, s0, alpha + R_S)
///   b_eps = lam_wv (2 gamma T + |s0|) / (1 - rho(A+BKC)).
/// The attack succeeds with probability one.
StealthinessReport check_lti_linear_feedback(
    const Matrix& A, const Matrix& B, const Matrix& K, const Matrix& C,
    const NoiseSpectralBounds& nb, double gamma, const Vector& s0,
    double alpha, double safe_radius, bool allow_marginal = true);

// ---------------------------------------------------------------------------
// Instability-set membership (f in U_rho)
// ---------------------------------------------------------------------------

struct InstabilityOptions {
  double rho = 0.0;
  double r1 = 100.0;
  double r2 = 1.0;
  int n_samples = 1000;
  int n_starts = 50;
  int max_steps = 100000;
  std::uint64_t seed = 0;
};

struct InstabilityReport {
  bool member = false;          // analytic verdict: inf alpha/beta > rho
  double inf_ratio = 0.0;       // inf over samples of alpha(|x|)/beta(|x|)
  int decrement_violations = 0; // samples with V(f(x)) - V(x) < alpha(|x|)
  int gradient_violations = 0;  // samples with |grad V| > beta(|x|)
  int n_samples = 0;
  bool empirical_all_exit = false;
  int exits = 0;
  int n_starts = 0;
};

/// Checks the sufficient condition for f in U_rho on
/// {x in B_r1 : V(x) > 0, |x| >= r2}: V(f(x)) - V(x) >= alpha(|x|) and
/// |grad V(x)| <= beta(|x|), with inf alpha/beta compared against rho.
/// The empirical path iterates x' = f(x) + d with the escape-opposing
/// disturbance d = -rho grad V(f(x)) / |grad V(f(x))| from starts near the
/// inner boundary and reports whether every trajectory exits B_r1.
InstabilityReport instability_test(
    const std::function<Vector(const Vector&)>& f,
    const std::function<double(const Vector&)>& V,
    const std::function<Vector(const Vector&)>& grad_V,
    const std::function<double(double)>& alpha_fn,
    const std::function<double(double)>& beta_fn, int dim,
    const InstabilityOptions& opts);

}  // namespace stealthsim::analysis

#endif  // STEALTHSIM_ANALYSIS_HPP
