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

#include "steprl/sim/scripted_walk.hpp"

#include <cmath>

#include "steprl/common.hpp"

namespace steprl::sim {

namespace {

struct Swing {
  int foot = 0;
  double t0 = 0.0;
  double duration = 0.0;
  Pose3 from;
  Pose3 to;
  double yaw_from = 0.0;  // root yaw before the swing (unwrapped)
  double yaw_to = 0.0;
};

double cycloid(double tau) { return tau - std::sin(2.0 * kPi * tau) / (2.0 * kPi); }

}  // namespace

std::vector<ScriptedFrame> scripted_walk_3d(const plan::FootstepPlan& plan,
                                            const gait::GaitSchedule& schedule,
                                            const ScriptedWalkConfig& config) {
  if (plan.steps.empty()) throw InvalidArgument("footstep plan is empty");
  schedule.validate();
  const double L = schedule.cycle();
  const double half = 0.5 * L;
  const double ds_time = schedule.double_support;
  const double ss_time = schedule.single_support;
  const double spread = plan.foot_spread > 0.0 ? plan.foot_spread : config.default_spread;

  std::array<Pose3, 2> feet = {Pose3{0.0, spread, 0.0, 0.0},
                               Pose3{0.0, -spread, 0.0, 0.0}};
  std::vector<Swing> swings;
  double phase0 = 0.0;
  double yaw = 0.0;

  if (!plan.is_stand()) {
    const int first = plan.steps.front().side == plan::Side::kRight ? 1 : 0;
    phase0 = first == 0 ? 0.0 : 0.5;
    std::size_t i = 0;
    for (int k = 0; i < plan.steps.size(); ++k) {
      const int foot = (first + k) % 2;
      const auto& step = plan.steps[i];
      const int wanted = step.side == plan::Side::kLeft    ? 0
                         : step.side == plan::Side::kRight ? 1
                                                           : foot;
      if (wanted != foot) continue;  // idle half-cycle for the other foot
      Swing s;
      s.foot = foot;
      s.t0 = k * half + ds_time;
      s.duration = ss_time;
      s.from = feet[foot];
      s.to = {step.x, step.y, step.z, step.heading};
      const double stride = std::hypot(s.to.x - s.from.x, s.to.y - s.from.y);
      if (stride > config.max_stride || std::abs(s.to.z - s.from.z) > config.max_rise) {
        throw InfeasiblePlan("step " + std::to_string(i) +
                             " is out of reach of the swinging foot");
      }
      s.yaw_from = yaw;
      s.yaw_to = yaw + wrap_angle(step.heading - yaw);
      yaw = s.yaw_to;
      feet[foot] = s.to;
      swings.push_back(s);
      ++i;
    }
  }

  double end_time = config.tail;
  if (!swings.empty()) end_time += swings.back().t0 + swings.back().duration + ds_time;
  const double dt = schedule.control_dt;
  const auto n_frames = static_cast<std::size_t>(std::floor(end_time / dt)) + 1;

  std::vector<ScriptedFrame> frames;
  frames.reserve(n_frames);
  const std::array<Pose3, 2> start = {Pose3{0.0, spread, 0.0, 0.0},
                                      Pose3{0.0, -spread, 0.0, 0.0}};
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double t = static_cast<double>(f) * dt;
    ScriptedFrame fr;
    fr.t = t;
    fr.phase = gait::advance(phase0, t, L);
    fr.feet = start;
    double root_yaw = 0.0;
    for (const Swing& s : swings) {
      if (t <= s.t0) break;
      const double tau = std::min(1.0, (t - s.t0) / s.duration);
      const double p = cycloid(tau);
      Pose3& foot = fr.feet[s.foot];
      foot.x = s.from.x + p * (s.to.x - s.from.x);
      foot.y = s.from.y + p * (s.to.y - s.from.y);
      foot.z = s.from.z + p * (s.to.z - s.from.z) +
               config.swing_height * 0.5 * (1.0 - std::cos(2.0 * kPi * tau));
      foot.yaw = wrap_angle(s.from.yaw + p * wrap_angle(s.to.yaw - s.from.yaw));
      root_yaw = s.yaw_from + p * (s.yaw_to - s.yaw_from);
      if (tau < 1.0) fr.contact[s.foot] = false;
    }
    fr.root.x = 0.5 * (fr.feet[0].x + fr.feet[1].x);
    fr.root.y = 0.5 * (fr.feet[0].y + fr.feet[1].y);
    fr.root.z = config.root_height + 0.5 * (fr.feet[0].z + fr.feet[1].z);
    fr.root.yaw = wrap_angle(root_yaw);
    if (!frames.empty()) {
      const ScriptedFrame& prev = frames.back();
      for (int k = 0; k < 2; ++k) {
        fr.foot_velocity[k] =
            Eigen::Vector3d(fr.feet[k].x - prev.feet[k].x, fr.feet[k].y - prev.feet[k].y,
                            fr.feet[k].z - prev.feet[k].z) / dt;
      }
    }
    frames.push_back(fr);
  }
  return frames;
}

}  // namespace steprl::sim
