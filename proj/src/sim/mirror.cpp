// Copyright 2026 The steprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "steprl/sim/mirror.hpp"

#include "steprl/common.hpp"
#include "steprl/task.hpp"

namespace steprl::sim {

Eigen::VectorXd SignedPermutation::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != source.size()) {
    throw InvalidArgument("mirror map dimension mismatch");
  }
  Eigen::VectorXd out(x.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = sign[i] * x(source[i]);
  }
  return out;
}

Eigen::MatrixXd SignedPermutation::apply_columns(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.rows()) != source.size()) {
    throw InvalidArgument("mirror map dimension mismatch");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t i = 0; i < source.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = sign[i] * x.row(source[i]);
  }
  return out;
}

Eigen::MatrixXd SignedPermutation::matrix() const {
  const auto n = static_cast<Eigen::Index>(source.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, source[static_cast<std::size_t>(i)]) = sign[static_cast<std::size_t>(i)];
  return m;
}

bool SignedPermutation::is_involution() const {
  for (std::size_t i = 0; i < source.size(); ++i) {
    const auto j = static_cast<std::size_t>(source[i]);
    if (static_cast<std::size_t>(source[j]) != i || sign[i] * sign[j] != 1.0) return false;
  }
  return true;
}

MirrorMaps MirrorMaps::for_biped(std::size_t per_leg,
                                 const std::vector<double>& joint_sign) {
  if (joint_sign.size() != per_leg) {
    throw InvalidArgument("one mirror sign per leg joint is required");
  }
  const std::size_t n = 2 * per_leg;
  MirrorMaps m;
  auto add_joint_block = [&](SignedPermutation& p, int offset) {
    for (std::size_t leg = 0; leg < 2; ++leg) {
      for (std::size_t k = 0; k < per_leg; ++k) {
        const std::size_t other = (1 - leg) * per_leg + k;
        p.source.push_back(offset + static_cast<int>(other));
        p.sign.push_back(joint_sign[k]);
      }
    }
  };
  add_joint_block(m.action, 0);

  const task::ObservationLayout lay{n};
  auto& s = m.state;
  add_joint_block(s, static_cast<int>(lay.joint_pos()));
  add_joint_block(s, static_cast<int>(lay.joint_vel()));
  auto keep = [&](std::size_t i, double sign) {
    s.source.push_back(static_cast<int>(i));
    s.sign.push_back(sign);
  };
  keep(lay.roll(), -1.0);
  keep(lay.pitch(), 1.0);
  keep(lay.angvel() + 0, -1.0);  // roll rate
  keep(lay.angvel() + 1, 1.0);   // pitch rate
  keep(lay.angvel() + 2, -1.0);  // yaw rate
  for (std::size_t t = 0; t < 2; ++t) {
    const std::size_t base = lay.external() + 4 * t;
    keep(base + 0, 1.0);   // x
    keep(base + 1, -1.0);  // y
    keep(base + 2, 1.0);   // z
    keep(base + 3, -1.0);  // heading
  }
  // Half-cycle phase shift: (sin, cos)(2 pi (phi + 1/2)) = -(sin, cos).
  keep(lay.clock() + 0, -1.0);
  keep(lay.clock() + 1, -1.0);
  return m;
}

MirrorMaps MirrorMaps::planar() { return for_biped(3, {1.0, 1.0, 1.0}); }

}  // namespace steprl::sim
