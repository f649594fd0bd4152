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

#include "steprl/reward.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "steprl/common.hpp"

namespace steprl::reward {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

void check_unit_quaternion(const Eigen::Quaterniond& q) {
  if (std::abs(q.norm() - 1.0) > 1e-6) {
    throw InvalidArgument("orientation quaternion is not unit-norm");
  }
}

}  // namespace

double normalize_grf(double grf_z, double total_mass, double gravity) {
  return std::clamp(grf_z / (total_mass * gravity), 0.0, 1.0);
}

double normalize_speed(double speed, double speed_scale) {
  return std::clamp(std::abs(speed) / speed_scale, 0.0, 1.0);
}

std::pair<double, double> periodic_rewards(const gait::Indicators& ind,
                                           double grf_left, double grf_right,
                                           double speed_left,
                                           double speed_right) {
  check_unit(grf_left, "normalized left GRF");
  check_unit(grf_right, "normalized right GRF");
  check_unit(speed_left, "normalized left foot speed");
  check_unit(speed_right, "normalized right foot speed");
  const double r_grf = 0.5 * (ind.left_grf * grf_left + ind.right_grf * grf_right);
  const double r_spd =
      0.5 * (ind.left_spd * speed_left + ind.right_spd * speed_right);
  return {r_grf, r_spd};
}

double step_reward(double d_foot, double d_root, double k_hit) {
  if (!(d_foot >= 0.0) || !(d_root >= 0.0)) {
    throw InvalidArgument("step distances must be non-negative");
  }
  if (!(k_hit >= 0.0 && k_hit <= 1.0)) {
    throw InvalidArgument("k_hit must lie in [0, 1]");
  }
  return k_hit * std::exp(-d_foot / 0.25) + (1.0 - k_hit) * std::exp(-d_root / 2.0);
}

double step_reward(double d_foot, double d_root, const StepRewardConfig& cfg) {
  if (!cfg.gated) return step_reward(d_foot, d_root, cfg.k_hit);
  const double full = step_reward(d_foot, d_root, cfg.k_hit);
  if (d_foot <= cfg.target_radius) return full;
  return (1.0 - cfg.k_hit) * std::exp(-d_root / 2.0);
}

double orientation_reward(const Eigen::Quaterniond& q,
                          const Eigen::Quaterniond& q_desired) {
  check_unit_quaternion(q);
  check_unit_quaternion(q_desired);
  const double dot = q.coeffs().dot(q_desired.coeffs());
  return std::exp(-10.0 * (1.0 - dot * dot));
}

std::pair<double, double> shape_rewards(double root_height,
                                        double desired_root_height,
                                        const Eigen::Vector2d& head_xy,
                                        const Eigen::Vector2d& root_xy) {
  const double dh = root_height - desired_root_height;
  const double r_height = std::exp(-40.0 * dh * dh);
  const double r_upper = std::exp(-10.0 * (head_xy - root_xy).squaredNorm());
  return {r_height, r_upper};
}

std::pair<double, double> smoothness_rewards(std::span<const double> action,
                                             std::span<const double> prev_action,
                                             std::span<const double> torque,
                                             std::span<const double> prev_torque) {
  if (action.size() != prev_action.size() || torque.size() != prev_torque.size() ||
      action.size() != torque.size()) {
    throw InvalidArgument("action/torque vectors must share one length");
  }
  if (action.empty()) return {1.0, 1.0};
  const double n = static_cast<double>(action.size());
  double sa = 0.0;
  double st = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    sa += std::abs(action[i] - prev_action[i]);
    st += std::abs(torque[i] - prev_torque[i]);
  }
  return {std::exp(-5.0 * sa / n), std::exp(-0.25 * st / n)};
}

double total_reward(const RewardBreakdown& b, const RewardWeights& w) {
  const auto t = b.terms();
  double r = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) r += w.w[i] * t[i];
  return r;
}

RewardBreakdown compute(const RewardInputs& in, const RewardWeights& weights,
                        const StepRewardConfig& step_cfg) {
  RewardBreakdown b;
  std::tie(b.grf, b.spd) = periodic_rewards(in.indicators, in.grf_left,
                                            in.grf_right, in.speed_left,
                                            in.speed_right);
  b.step = step_reward(in.d_foot, in.d_root, step_cfg);
  b.orient = orientation_reward(in.orientation, in.desired_orientation);
  std::tie(b.height, b.upper) = shape_rewards(in.root_height, in.desired_root_height,
                                              in.head_xy, in.root_xy);
  std::tie(b.action, b.torque) =
      smoothness_rewards(in.action, in.prev_action, in.torque, in.prev_torque);
  b.total = total_reward(b, weights);
  return b;
}

Eigen::Quaterniond yaw_quaternion(double yaw) {
  return Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));
}

void write_csv_header(std::ostream& out) {
  out << "t,r_grf,r_spd,r_step,r_orient,r_height,r_upper,r_action,r_torque,total\n";
}

void write_csv_row(std::ostream& out, double t, const RewardBreakdown& b) {
  out << format_double(t);
  for (double v : b.terms()) out << ',' << format_double(v);
  out << ',' << format_double(b.total) << '\n';
}

}  // namespace steprl::reward
