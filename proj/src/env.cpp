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

#include "steprl/env.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "steprl/common.hpp"

namespace steprl::env {

namespace {

constexpr double kStairClearance = 0.02;  // m between toe and first edge

}  // namespace

void EnvConfig::finalize() {
  model.leg_offset_y = foot_spread;
  if (delay_from_schedule) score.target_delay = schedule.single_support;
  step_reward.target_radius = score.target_radius;
  schedule.control_dt = control.substeps * control.physics_dt;
  schedule.validate();
  model.validate();
}

plan::FootstepPlan sample_training_plan(const EnvConfig& config, long iteration,
                                        std::mt19937_64& rng) {
  const double total = config.mix.forward + config.mix.backward + config.mix.stand +
                       config.mix.stairs;
  if (!(total > 0.0)) throw InvalidArgument("plan mix must have positive weight");
  std::uniform_real_distribution<double> u(0.0, total);
  double r = u(rng);
  if ((r -= config.mix.stand) < 0.0) return plan::gen_stand();
  if ((r -= config.mix.backward) < 0.0) {
    return plan::gen_line_plan(plan::Direction::kBackward, config.step_length,
                               config.foot_spread, config.plan_steps);
  }
  auto fwd = plan::gen_line_plan(plan::Direction::kForward, config.step_length,
                                 config.foot_spread, config.plan_steps);
  if ((r -= config.mix.stairs) < 0.0) {
    task::CurriculumState c = config.curriculum;
    c.itr = iteration;
    return plan::apply_stairs(fwd, task::curriculum_height(c, rng));
  }
  return fwd;
}

WalkEnv::WalkEnv(const EnvConfig& config, plan::FootstepPlan plan, std::uint64_t seed)
    : config_(config),
      plan_(std::move(plan)),
      rng_(derive_seed(seed, 1)),
      obs_noise_rng_(derive_seed(seed, 2)) {
  config_.finalize();
  if (plan_.steps.empty()) throw InvalidArgument("footstep plan is empty");
  observed_plan_ = plan_;
  plan::FootstepPlan physical = plan_;
  if (config_.step_height_noise > 0.0 && !plan_.is_stand()) {
    std::mt19937_64 noise_rng(derive_seed(seed, 4));
    std::uniform_real_distribution<double> u(-config_.step_height_noise,
                                             config_.step_height_noise);
    plan::FootstepPlan& noisy =
        config_.height_noise_site == NoiseSite::kObserved ? observed_plan_ : physical;
    for (auto& s : noisy.steps) s.z += u(noise_rng);
  }
  const bool flat = std::all_of(physical.steps.begin(), physical.steps.end(),
                                [](const plan::Footstep& s) { return s.z == 0.0; });
  terrain_ = flat || plan_.is_stand() ? sim::Terrain::flat()
                                      : sim::Terrain::from_plan(physical);
  active_schedule_ = config_.schedule;
  active_schedule_.standing = plan_.is_stand();
  nominal_height_ = sim::nominal_state(config_.model).q(1);
}

double WalkEnv::control_period() const {
  return config_.control.substeps * config_.control.physics_dt;
}

double WalkEnv::forward_displacement() const { return state_.q(0) - start_x_; }

double WalkEnv::lowest_contact_z() const {
  const auto k = sim::kinematics(config_.model, state_);
  double z = k.heel[0].y();
  for (int f = 0; f < 2; ++f) z = std::min({z, k.heel[f].y(), k.toe[f].y()});
  return z;
}

double WalkEnv::floor_height() const {
  const auto k = sim::kinematics(config_.model, state_);
  return std::min(terrain_.height(k.foot_center[0].x()),
                  terrain_.height(k.foot_center[1].x()));
}

Eigen::VectorXd WalkEnv::reset() {
  const auto nominal = config_.model.nominal_joints();
  const auto sample = task::reset_state(
      rng_, std::span<const double>(nominal.data(), nominal.size()), config_.joint_noise);
  sim::JointVector joints;
  for (int i = 0; i < sim::kNumJoints; ++i) joints(i) = sample.joints[i];
  // Start far enough back that both soles rest on the ground before the
  // first stair edge.
  double x0 = 0.0;
  if (!terrain_.edges().empty()) {
    const auto k = sim::kinematics(config_.model, sim::standing_state(config_.model, joints));
    const double toe = std::max(k.toe[0].x(), k.toe[1].x());
    x0 = std::min(0.0, terrain_.edges().front() - kStairClearance - toe);
  }
  state_ = sim::standing_state(config_.model, joints, 0.0, terrain_, x0);
  start_x_ = state_.q(0);
  phase_ = sample.phase;
  steps_ = 0;
  tracker_ = task::ScoreTracker{};
  tracker_.config = config_.score;
  prev_action_.setZero();
  prev_torque_.setZero();
  return observe();
}

Eigen::VectorXd WalkEnv::observe() {
  task::RobotObservation robot;
  robot.joint_pos.resize(sim::kNumJoints);
  robot.joint_vel.resize(sim::kNumJoints);
  const double noise = config_.joint_obs_noise_deg * kPi / 180.0;
  std::uniform_real_distribution<double> u(-noise, noise);
  for (int i = 0; i < sim::kNumJoints; ++i) {
    robot.joint_pos[i] = state_.q(3 + i);
    robot.joint_vel[i] = state_.v(3 + i);
    if (noise > 0.0) {
      robot.joint_pos[i] += u(obs_noise_rng_);
      robot.joint_vel[i] += u(obs_noise_rng_);
    }
  }
  // The planar pitch is counter-clockwise in x-z, i.e. about -y.
  robot.pitch = -state_.q(2);
  robot.angvel = {0.0, -state_.v(2), 0.0};
  const task::RootPose root{state_.q(0), 0.0, floor_height(), 0.0};
  const auto win = task::target_window(tracker_, observed_plan_);
  const task::Window window = {task::to_root_frame(win[0], root),
                               task::to_root_frame(win[1], root)};
  return task::build_observation(robot, window, phase_, plan_.is_stand()).flatten();
}

StepResult WalkEnv::step(const Eigen::VectorXd& action) {
  if (action.size() != kActDim) throw InvalidArgument("action has the wrong size");
  const auto& m = config_.model;
  sim::JointVector a = action.cwiseMax(-1.0).cwiseMin(1.0);
  const auto win = task::target_window(tracker_, plan_);

  StepResult out;
  out.control = sim::control_step(m, terrain_, state_, a, config_.control);
  const double dt = control_period();
  phase_ = gait::advance(phase_, dt, active_schedule_.cycle());
  ++steps_;

  const auto k = sim::kinematics(m, state_);
  std::array<task::FootSample, 2> feet;
  for (int f = 0; f < 2; ++f) {
    const double y = f == sim::kLeft ? m.leg_offset_y : -m.leg_offset_y;
    feet[f].position = {k.foot_center[f].x(), y, k.foot_center[f].y()};
    feet[f].contact = state_.feet[f].in_contact();
  }
  const auto score = task::score_update(tracker_, feet, dt, plan_);
  tracker_ = score.tracker;
  out.scored = score.scored;

  const Eigen::Vector3d target(win[0].x, win[0].y, win[0].z);
  const double floor = floor_height();
  const double g = m.gravity;
  const double mass = m.total_mass();
  reward::RewardInputs in;
  in.grf_left = reward::normalize_grf(out.control.grf_z[0], mass, g);
  in.grf_right = reward::normalize_grf(out.control.grf_z[1], mass, g);
  in.speed_left = reward::normalize_speed(k.foot_velocity[0].norm(), config_.speed_scale);
  in.speed_right = reward::normalize_speed(k.foot_velocity[1].norm(), config_.speed_scale);
  in.d_foot = std::min((feet[0].position - target).norm(),
                       (feet[1].position - target).norm());
  in.d_root = std::hypot(state_.q(0) - win[0].x, win[0].y);
  in.orientation =
      Eigen::Quaterniond(Eigen::AngleAxisd(-state_.q(2), Eigen::Vector3d::UnitY()));
  in.desired_orientation = reward::yaw_quaternion(win[0].heading);
  in.root_height = k.hip.y() - floor;
  in.desired_root_height = nominal_height_;
  in.head_xy = {k.head.x(), 0.0};
  in.root_xy = {k.hip.x(), 0.0};
  in.action = std::span<const double>(a.data(), a.size());
  in.prev_action = std::span<const double>(prev_action_.data(), prev_action_.size());
  in.torque = std::span<const double>(out.control.mean_torque.data(), sim::kNumJoints);
  in.prev_torque = std::span<const double>(prev_torque_.data(), prev_torque_.size());
  in.indicators = gait::indicators(phase_, active_schedule_);
  out.breakdown = reward::compute(in, config_.weights, config_.step_reward);
  out.reward = out.breakdown.total;
  prev_action_ = a;
  prev_torque_ = out.control.mean_torque;

  task::TerminationInputs term;
  term.root_z = k.hip.y();
  term.lowest_contact_z = lowest_contact_z();
  term.self_collision = state_.self_collision;
  out.termination = task::check_termination(term, config_.termination, steps_);
  out.observation = observe();
  return out;
}

}  // namespace steprl::env
