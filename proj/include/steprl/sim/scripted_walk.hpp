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

#include <array>
#include <vector>

#include <Eigen/Core>

#include "steprl/gait.hpp"
#include "steprl/plan.hpp"

namespace steprl::sim {

struct Pose3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
};

struct ScriptedFrame {
  double t = 0.0;
  double phase = 0.0;
  Pose3 root;
  std::array<Pose3, 2> feet;             // left, right
  std::array<bool, 2> contact = {true, true};
  std::array<Eigen::Vector3d, 2> foot_velocity = {Eigen::Vector3d::Zero(),
                                                  Eigen::Vector3d::Zero()};
};

struct ScriptedWalkConfig {
  double swing_height = 0.08;
  double root_height = 0.80;
  double head_height = 0.75;  // head above root, for the posture term
  double max_stride = 1.0;    // largest horizontal swing of one foot
  double max_rise = 0.30;     // largest vertical swing of one foot
  double default_spread = 0.15;
  /// Idle time appended after the last swing so the final step can score.
  double tail = 2.0;
};

/// Kinematic 3D walker: the feet follow cycloidal swings that land exactly on
/// successive plan steps in sync with the gait schedule, and the root yaw
/// follows the step headings. Frames are emitted every schedule.control_dt.
/// Throws InfeasiblePlan when a swing exceeds the stride/rise bounds.
std::vector<ScriptedFrame> scripted_walk_3d(const plan::FootstepPlan& plan,
                                            const gait::GaitSchedule& schedule,
                                            const ScriptedWalkConfig& config = {});

}  // namespace steprl::sim
