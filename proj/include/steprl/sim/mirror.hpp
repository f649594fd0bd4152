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

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace steprl::sim {

/// Signed permutation: out[i] = sign[i] * in[source[i]].
struct SignedPermutation {
  std::vector<int> source;
  std::vector<double> sign;

  std::size_t size() const { return source.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Applies the map to every column of a (dim x batch) matrix.
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd matrix() const;
  bool is_involution() const;
};

/// Left/right mirror maps over the canonical observation and action layouts.
struct MirrorMaps {
  SignedPermutation state;
  SignedPermutation action;

  /// Joint mirroring for n_joints = 2 * per_leg joints ordered left block then
  /// right block. `joint_sign[k]` is the sign applied to joint k of a leg
  /// (-1 for roll/yaw joints, +1 for pitch joints).
  static MirrorMaps for_biped(std::size_t per_leg, const std::vector<double>& joint_sign);
  /// Planar biped: hip, knee, ankle pitch per leg, no sign flips.
  static MirrorMaps planar();
};

}  // namespace steprl::sim
