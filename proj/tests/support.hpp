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
#ifndef STEALTHSIM_TESTS_SUPPORT_HPP
#define STEALTHSIM_TESTS_SUPPORT_HPP

// Test-side oracles, independent of the library implementation paths they
// cross-check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "stealthsim/analysis.hpp"
#include "stealthsim/control.hpp"
#include "stealthsim/dynamics.hpp"
#include "stealthsim/types.hpp"

namespace testsupport {

using stealthsim::Matrix;
using stealthsim::Vector;

// 1-D KL(q||p) between N(mu_q, sigma^2) and N(mu_p, sigma^2) by Simpson
// quadrature of q log(q/p); deliberately avoids the closed form.
inline double kl_1d_quadrature(double mu_q, double mu_p, double sigma) {
  auto logpdf = [](double x, double mu, double s) {
    double z = (x - mu) / s;
    return -0.5 * z * z - std::log(s) - 0.918938533204672742;  // log sqrt(2pi)
  };
  const double lo = std::min(mu_q, mu_p) - 14.0 * sigma;
  const double hi = std::max(mu_q, mu_p) + 14.0 * sigma;
  const int n = 40000;  // even
  const double h = (hi - lo) / n;
  auto f = [&](double x) {
    double lq = logpdf(x, mu_q, sigma);
    return std::exp(lq) * (lq - logpdf(x, mu_p, sigma));
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Hand-rolled Euler step of the pendulum dynamics, scalar arithmetic only.
inline void pendulum_hand_step(double dt, double theta, double omega,
                               double torque, double& theta_next,
                               double& omega_next) {
  const double m = 0.2, b = 0.1, r = 0.3, g = 9.81;
  theta_next = theta + dt * omega;
  omega_next =
      omega + dt * (g / r * std::sin(theta) - b / (m * r * r) * omega +
                    torque / (m * r * r));
}

// Rebuilds a plant with zeroed noise covariances (for noiseless runs).
inline stealthsim::dynamics::PlantModel zero_noise(
    stealthsim::dynamics::PlantModel plant) {
  plant.sigma_w = Matrix::Zero(plant.state_dim, plant.state_dim);
  plant.sigma_vs = Matrix::Zero(plant.sensor_dim, plant.sensor_dim);
  plant.chol_w = plant.sigma_w;
  plant.chol_vs = plant.sigma_vs;
  return plant;
}

// Largest admissible b_zeta for the estimate-based attack conditions, by
// bisection on the checker verdict.
inline double max_admissible_b_zeta(const stealthsim::control::LyapunovCertificate& cert,
                                    double b_x, double b_v, double alpha,
                                    double phi, double norm_B,
                                    double hi_start = 0.5) {
  namespace an = stealthsim::analysis;
  auto ok = [&](double b_zeta) {
    return an::check_strategy1(cert, b_x, b_v, b_zeta, alpha, phi, norm_B)
        .verdict;
  };
  if (!ok(0.0)) return 0.0;
  double lo = 0.0, hi = hi_start;
  while (ok(hi) && hi < 1e6) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value.
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

// Power iteration estimate of the spectral norm (oracle for Lipschitz
// estimates of linear maps).
inline double power_iteration_norm(const Matrix& A, int iters = 500) {
  Matrix G = A.transpose() * A;
  Vector v = Vector::Ones(G.rows()).normalized();
  for (int i = 0; i < iters; ++i) v = (G * v).normalized();
  return std::sqrt(v.dot(G * v));
}

// Deterministic mt19937-based helpers for test fixtures.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& gen, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(gen);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& gen, int rows, int cols,
                            double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  return m;
}

}  // namespace testsupport

#endif  // STEALTHSIM_TESTS_SUPPORT_HPP
