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
#include <iosfwd>
#include <span>
#include <utility>

#include <Eigen/Geometry>

#include "steprl/gait.hpp"

namespace steprl::reward {

/// Weights in term order grf, spd, step, orient, height, upper, action, torque.
struct RewardWeights {
  std::array<double, 8> w = {0.15, 0.15, 0.45, 0.05, 0.05, 0.05, 0.05, 0.05};
};

struct RewardBreakdown {
  double grf = 0.0;
  double spd = 0.0;
  double step = 0.0;
  double orient = 0.0;
  double height = 0.0;
  double upper = 0.0;
  double action = 0.0;
  double torque = 0.0;
  double total = 0.0;

  std::array<double, 8> terms() const {
    return {grf, spd, step, orient, height, upper, action, torque};
  }
};

struct StepRewardConfig {
  double k_hit = 0.8;
  /// When set, the hit term only pays out with a foot inside target_radius.
  bool gated = false;
  double target_radius = 0.20;
};

/// Snapshot consumed by compute(). Forces and speeds are already normalized.
struct RewardInputs {
  double grf_left = 0.0;
  double grf_right = 0.0;
  double speed_left = 0.0;
  double speed_right = 0.0;
  double d_foot = 0.0;
  double d_root = 0.0;
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Quaterniond desired_orientation = Eigen::Quaterniond::Identity();
  double root_height = 0.0;
  double desired_root_height = 0.0;
  Eigen::Vector2d head_xy = Eigen::Vector2d::Zero();
  Eigen::Vector2d root_xy = Eigen::Vector2d::Zero();
  std::span<const double> action;
  std::span<const double> prev_action;
  std::span<const double> torque;
  std::span<const double> prev_torque;
  gait::Indicators indicators;
};

/// clamp(grf_z / (m g), 0, 1).
double normalize_grf(double grf_z, double total_mass, double gravity);
/// clamp(|v| / speed_scale, 0, 1); speed_scale defaults to 1 m/s.
double normalize_speed(double speed, double speed_scale = 1.0);

/// Half-scaled periodic terms (r_grf, r_spd), each in [-1, 1].
std::pair<double, double> periodic_rewards(const gait::Indicators& ind,
                                           double grf_left, double grf_right,
                                           double speed_left,
                                           double speed_right);

double step_reward(double d_foot, double d_root, double k_hit = 0.8);
double step_reward(double d_foot, double d_root, const StepRewardConfig& cfg);

double orientation_reward(const Eigen::Quaterniond& q,
                          const Eigen::Quaterniond& q_desired);

/// (r_height, r_upper).
std::pair<double, double> shape_rewards(double root_height,
                                        double desired_root_height,
                                        const Eigen::Vector2d& head_xy,
                                        const Eigen::Vector2d& root_xy);

/// (r_action, r_torque); the mean is taken over the vector length.
std::pair<double, double> smoothness_rewards(std::span<const double> action,
                                             std::span<const double> prev_action,
                                             std::span<const double> torque,
                                             std::span<const double> prev_torque);

double total_reward(const RewardBreakdown& b, const RewardWeights& w);

RewardBreakdown compute(const RewardInputs& in, const RewardWeights& weights,
                        const StepRewardConfig& step_cfg = {});

/// Quaternion for zero roll and pitch with the given yaw.
Eigen::Quaterniond yaw_quaternion(double yaw);

/// CSV header / row for the per-step reward log.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, double t, const RewardBreakdown& b);

}  // namespace steprl::reward
