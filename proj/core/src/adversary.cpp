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
#include "stealthsim/adversary.hpp"

#include <stdexcept>

#include "stealthsim/sensing.hpp"

namespace stealthsim::adversary {

void AttackConfig::validate(int state_dim) const {
  if (s0.size() != state_dim)
    throw std::invalid_argument("attack s0 dimension mismatch");
  if (!s0.allFinite()) throw std::invalid_argument("attack s0 must be finite");
  if (b_zeta < 0.0) throw std::invalid_argument("b_zeta must be nonnegative");
  if (start_step < 0) throw std::invalid_argument("start_step must be >= 0");
}

AttackState advance_strategy1(const dynamics::PlantModel& model,
                              const AttackState& st, const Vector& x_a,
                              const Vector& zeta) {
  AttackState next;
  next.zeta = zeta;
  if (model.linear_A) {
    // f(xhat) - f(xhat - s) = A s exactly for a linear drift; computing it
    // this way keeps the two strategies bit-identical and sidesteps the
    // cancellation when |s| << |xhat|.
    next.s = *model.linear_A * st.s;
    return next;
  }
  Vector xhat = x_a + zeta;
  next.s = model.f(xhat) - model.f(xhat - st.s);
  return next;
}

AttackState advance_strategy2(const dynamics::PlantModel& model,
                              const AttackState& st, bool lti) {
  AttackState next;
  next.zeta = Vector::Zero(st.s.size());
  if (lti) {
    if (model.linear_A) {
      next.s = *model.linear_A * st.s;
    } else {
      next.s = linearize(model, Vector::Zero(model.state_dim)) * st.s;
    }
    return next;
  }
  if (model.linear_A) {
    next.s = *model.linear_A * st.s;
    return next;
  }
  next.s = model.f(st.s);
  return next;
}

std::pair<Vector, Vector> falsify_measurements(
    const dynamics::PlantModel& model, const sensing::PerceptionMap& pmap,
    const Vector& x_a, const Vector& s, const Vector& v_s) {
  Vector e = x_a - s;
  Vector y_p_a = sensing::perceive_attacked(pmap, e);
  Vector y_s_a = model.C_s * e + v_s;
  return {std::move(y_p_a), std::move(y_s_a)};
}

}  // namespace stealthsim::adversary
