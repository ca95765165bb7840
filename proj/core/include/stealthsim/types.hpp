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
#ifndef STEALTHSIM_TYPES_HPP
#define STEALTHSIM_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace stealthsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Spectral norm (largest singular value).
inline double spectral_norm(const Matrix& m) {
  return m.jacobiSvd().singularValues()(0);
}

/// Spectral radius (largest eigenvalue modulus).
inline double spectral_radius(const Matrix& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace stealthsim

#endif  // STEALTHSIM_TYPES_HPP
