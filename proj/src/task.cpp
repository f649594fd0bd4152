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

#include "steprl/task.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "steprl/common.hpp"

namespace steprl::task {

Target to_root_frame(const plan::Footstep& step, const RootPose& root) {
  const double c = std::cos(root.yaw);
  const double s = std::sin(root.yaw);
  const double dx = step.x - root.x;
  const double dy = step.y - root.y;
  return {c * dx + s * dy, -s * dx + c * dy, step.z - root.z,
          wrap_angle(step.heading - root.yaw)};
}

plan::Footstep from_root_frame(const Target& rel, const RootPose& root) {
  const double c = std::cos(root.yaw);
  const double s = std::sin(root.yaw);
  plan::Footstep f;
  f.x = root.x + c * rel[0] - s * rel[1];
  f.y = root.y + s * rel[0] + c * rel[1];
  f.z = root.z + rel[2];
  f.heading = wrap_angle(rel[3] + root.yaw);
  return f;
}

void Observation::flatten_into(std::span<double> out) const {
  if (out.size() != size() || joint_vel.size() != joint_pos.size()) {
    throw InternalError("observation dimension mismatch");
  }
  auto it = out.begin();
  it = std::copy(joint_pos.begin(), joint_pos.end(), it);
  it = std::copy(joint_vel.begin(), joint_vel.end(), it);
  it = std::copy(root_rp.begin(), root_rp.end(), it);
  it = std::copy(root_angvel.begin(), root_angvel.end(), it);
  it = std::copy(external.begin(), external.end(), it);
  std::copy(clock.begin(), clock.end(), it);
}

Eigen::VectorXd Observation::flatten() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
  flatten_into({v.data(), static_cast<std::size_t>(v.size())});
  return v;
}

Observation build_observation(const RobotObservation& robot, const Window& window,
                              double phase, bool stand_mode) {
  if (robot.joint_pos.size() != robot.joint_vel.size()) {
    throw InternalError("joint position/velocity dimension mismatch");
  }
  Observation o;
  o.joint_pos = robot.joint_pos;
  o.joint_vel = robot.joint_vel;
  o.root_rp = {robot.roll, robot.pitch};
  o.root_angvel = robot.angvel;
  if (!stand_mode) {
    std::copy(window[0].begin(), window[0].end(), o.external.begin());
    std::copy(window[1].begin(), window[1].end(), o.external.begin() + 4);
  }
  o.clock = gait::clock_encode(phase);
  return o;
}

// Scoring ---------------------------------------------------------------------

std::array<plan::Footstep, 2> target_window(const ScoreTracker& tracker,
                                            const plan::FootstepPlan& plan) {
  if (plan.steps.empty()) throw InvalidArgument("footstep plan is empty");
  const std::size_t last = plan.steps.size() - 1;
  const std::size_t k = std::min(tracker.current_index, last);
  const std::size_t k2 = std::min(tracker.current_index + 1, last);
  return {plan.steps[k], plan.steps[k2]};
}

ScoreResult score_update(const ScoreTracker& tracker,
                         std::span<const FootSample> feet, double dt,
                         const plan::FootstepPlan& plan) {
  if (plan.steps.empty()) throw InvalidArgument("footstep plan is empty");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");

  ScoreResult r;
  r.tracker = tracker;
  ScoreTracker& t = r.tracker;
  if (t.current_index < plan.steps.size()) {
    const auto& target = plan.steps[t.current_index];
    const Eigen::Vector3d p(target.x, target.y, target.z);
    bool inside = false;
    for (const auto& f : feet) {
      if (t.config.require_contact && !f.contact) continue;
      if ((f.position - p).norm() <= t.config.target_radius) inside = true;
    }
    if (inside) {
      t.in_radius_timer += dt;
    } else {
      t.in_radius_timer = 0.0;
    }
    if (t.in_radius_timer > t.config.target_delay) {
      ++t.current_index;
      t.in_radius_timer = 0.0;
      r.scored = true;
    }
  }
  r.window = target_window(t, plan);
  return r;
}

// Curriculum ------------------------------------------------------------------

double curriculum_magnitude(const CurriculumState& s) {
  if (s.itr < s.start_itr) return 0.0;
  const double frac = static_cast<double>(s.itr - s.start_itr) /
                      static_cast<double>(s.ramp_itrs);
  return s.max_height * std::min(1.0, frac);
}

double curriculum_height(const CurriculumState& s, int direction) {
  return (direction < 0 ? -1.0 : 1.0) * curriculum_magnitude(s);
}

double curriculum_height(const CurriculumState& s, std::mt19937_64& rng) {
  std::bernoulli_distribution up(0.5);
  return curriculum_height(s, up(rng) ? 1 : -1);
}

// Initialization and termination ----------------------------------------------

ResetSample reset_state(std::mt19937_64& rng, std::span<const double> nominal,
                        double joint_noise) {
  if (!(joint_noise >= 0.0)) throw InvalidArgument("joint noise must be >= 0");
  ResetSample r;
  r.joints.assign(nominal.begin(), nominal.end());
  if (joint_noise > 0.0) {
    std::uniform_real_distribution<double> u(-joint_noise, joint_noise);
    for (double& q : r.joints) q += u(rng);
  }
  std::bernoulli_distribution half(0.5);
  r.phase = half(rng) ? 0.5 : 0.0;
  return r;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kContinue: return "continue";
    case Termination::kFall: return "fall";
    case Termination::kSelfCollision: return "self_collision";
    case Termination::kTimeout: return "timeout";
  }
  return "continue";
}

Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::kContinue, Termination::kFall,
                 Termination::kSelfCollision, Termination::kTimeout}) {
    if (to_string(t) == s) return t;
  }
  throw InvalidArgument("unknown termination cause '" + std::string(s) + "'");
}

Termination check_termination(const TerminationInputs& in,
                              const TerminationConfig& config, int control_step) {
  if (in.root_z - in.lowest_contact_z < config.min_root_height) {
    return Termination::kFall;
  }
  if (in.self_collision) return Termination::kSelfCollision;
  if (control_step >= config.max_control_steps) return Termination::kTimeout;
  return Termination::kContinue;
}

void write_summary_header(std::ostream& out) {
  out << "termination,steps_scored,length,return\n";
}

void write_summary_row(std::ostream& out, const EpisodeSummary& s) {
  out << to_string(s.cause) << ',' << s.steps_scored << ',' << s.length << ','
      << format_double(s.episode_return) << '\n';
}

}  // namespace steprl::task
