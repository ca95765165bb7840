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
#include "stealthsim/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace stealthsim::dynamics {

namespace {

// Semidefinite square root: V sqrt(max(D,0)) V'. LLT would reject the
// rank-deficient covariances some presets use.
Matrix psd_factor(const Matrix& sigma, const std::string& what) {
  if (sigma.rows() != sigma.cols())
    throw std::invalid_argument(what + " covariance must be square");
  if (!sigma.isApprox(sigma.transpose(), 1e-10))
    throw std::invalid_argument(what + " covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument(what + " covariance must be positive semidefinite");
  Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal();
}

Matrix central_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                   const Vector& x0, double step = 1e-6) {
  const int n = static_cast<int>(x0.size());
  Matrix J(f(x0).size(), n);
  Vector xp = x0, xm = x0;
  for (int j = 0; j < n; ++j) {
    xp(j) = x0(j) + step;
    xm(j) = x0(j) - step;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * step);
    xp(j) = x0(j);
    xm(j) = x0(j);
  }
  return J;
}

}  // namespace

Matrix PlantModel::jacobian(const Vector& x0) const {
  if (f_jacobian) return f_jacobian(x0);
  return central_difference_jacobian(f, x0);
}

PlantModel make_plant(int state_dim, int input_dim, int sensor_dim,
                      std::function<Vector(const Vector&)> f, Matrix B,
                      Matrix C_s, Matrix sigma_w, Matrix sigma_vs,
                      std::function<Matrix(const Vector&)> f_jacobian,
                      std::optional<Matrix> linear_A) {
  if (state_dim <= 0 || input_dim <= 0 || sensor_dim <= 0)
    throw std::invalid_argument("plant dimensions must be positive");
  if (!f) throw std::invalid_argument("plant drift f is required");
  if (B.rows() != state_dim || B.cols() != input_dim)
    throw std::invalid_argument("B must be state_dim x input_dim");
  if (C_s.rows() != sensor_dim || C_s.cols() != state_dim)
    throw std::invalid_argument("C_s must be sensor_dim x state_dim");
  if (sigma_w.rows() != state_dim || sigma_vs.rows() != sensor_dim)
    throw std::invalid_argument("noise covariance dimensions mismatch");

  if (f(Vector::Zero(state_dim)).norm() > 1e-12)
    throw std::invalid_argument("plant drift must fix the origin, f(0)=0");

  PlantModel m;
  m.state_dim = state_dim;
  m.input_dim = input_dim;
  m.sensor_dim = sensor_dim;
  m.f = std::move(f);
  m.B = std::move(B);
  m.C_s = std::move(C_s);
  m.sigma_w = std::move(sigma_w);
  m.sigma_vs = std::move(sigma_vs);
  m.f_jacobian = std::move(f_jacobian);
  m.linear_A = std::move(linear_A);
  m.chol_w = psd_factor(m.sigma_w, "process");
  m.chol_vs = psd_factor(m.sigma_vs, "sensor");
  return m;
}

PlantModel make_lti_plant(const Matrix& A, const Matrix& B, const Matrix& C_s,
                          const Matrix& sigma_w, const Matrix& sigma_vs) {
  Matrix A_copy = A;
  auto f = [A_copy](const Vector& x) -> Vector { return A_copy * x; };
  auto jac = [A_copy](const Vector&) -> Matrix { return A_copy; };
  return make_plant(static_cast<int>(A.rows()), static_cast<int>(B.cols()),
                    static_cast<int>(C_s.rows()), f, B, C_s, sigma_w, sigma_vs,
                    jac, A);
}

Vector step_plant(const PlantModel& model, const Vector& x, const Vector& u,
                  const Vector& w) {
  if (x.size() != model.state_dim || u.size() != model.input_dim ||
      w.size() != model.state_dim)
    throw std::invalid_argument("step_plant: dimension mismatch");
  return model.f(x) + model.B * u + w;
}

Matrix linearize(const PlantModel& model, const Vector& x0) {
  if (x0.size() != model.state_dim)
    throw std::invalid_argument("linearize: dimension mismatch");
  return model.jacobian(x0);
}

}  // namespace stealthsim::dynamics
