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
#include "stealthsim/sensing.hpp"

#include <cmath>

#include "stealthsim/rng.hpp"

namespace stealthsim::sensing {

Vector perceive(const PerceptionMap& pmap, const Vector& x) {
  Vector out = pmap.C_p * x;
  if (pmap.error_fn) out += pmap.error_fn(x);
  return out;
}

Vector perceive_attacked(const PerceptionMap& pmap, const Vector& e) {
  return perceive(pmap, e);
}

PerceptionMap make_tanh_perception(Matrix C_p, double gamma,
                                   double safe_radius, std::uint64_t seed) {
  const int p = static_cast<int>(C_p.rows());
  const int n = static_cast<int>(C_p.cols());

  // Fixed random directions, scaled so |m_i . x| ~ 2 at |x| = safe_radius;
  // tanh(2) ~ 0.96 keeps the error near its bound at the boundary.
  NoiseStream dirs(seed, "perception_error");
  Matrix M(p, n);
  for (int i = 0; i < p; ++i) {
    Vector row = dirs.gaussian(static_cast<std::uint64_t>(i), n);
    double norm = row.norm();
    if (norm < 1e-12) row = Vector::Unit(n, i % n), norm = 1.0;
    M.row(i) = (2.0 / (safe_radius * norm)) * row.transpose();
  }

  PerceptionMap pmap;
  pmap.C_p = std::move(C_p);
  pmap.gamma = gamma;
  pmap.safe_radius = safe_radius;
  pmap.seed = seed;
  if (gamma > 0.0) {
    const double amp = gamma / std::sqrt(static_cast<double>(p));
    pmap.error_fn = [M, amp](const Vector& x) -> Vector {
      return amp * (M * x).array().tanh().matrix();
    };
  }
  return pmap;
}

}  // namespace stealthsim::sensing
