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

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "steprl/gait.hpp"
#include "steprl/plan.hpp"
#include "steprl/reward.hpp"
#include "steprl/sim/planar_biped.hpp"
#include "steprl/task.hpp"

namespace steprl::env {

/// Relative frequencies of the plan modes drawn for training episodes.
struct PlanMix {
  double forward = 1.0;
  double backward = 0.0;
  double stand = 0.0;
  double stairs = 0.0;
};

enum class NoiseSite { kObserved, kPhysical };

struct EnvConfig {
  sim::PlanarBipedModel model;
  sim::ControlConfig control;
  gait::GaitSchedule schedule = gait::GaitSchedule::jvrc1();
  task::ScoreConfig score;
  task::TerminationConfig termination;
  task::CurriculumState curriculum;
  reward::RewardWeights weights;
  reward::StepRewardConfig step_reward;

  double step_length = 0.25;
  double foot_spread = 0.12;
  int plan_steps = 20;
  PlanMix mix;

  double joint_noise = 0.02;   // rad, uniform at reset
  double speed_scale = 1.0;    // m/s for foot-speed normalization

  // Robustness perturbations (evaluation only).
  double step_height_noise = 0.0;  // m, uniform per step
  NoiseSite height_noise_site = NoiseSite::kObserved;
  double joint_obs_noise_deg = 0.0;  // uniform noise on joint pos/vel obs

  /// Score delay follows the single-support duration unless set explicitly.
  bool delay_from_schedule = true;

  void finalize();  // applies derived defaults; call after editing fields
};

/// Draws a plan per the mode mix; stairs follow the curriculum height.
plan::FootstepPlan sample_training_plan(const EnvConfig& config, long iteration,
                                        std::mt19937_64& rng);

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  reward::RewardBreakdown breakdown;
  task::Termination termination = task::Termination::kContinue;
  bool scored = false;
  sim::ControlResult control;
};

/// Planar walking episode: simulator + footstep plan + scoring + reward.
class WalkEnv {
 public:
  WalkEnv(const EnvConfig& config, plan::FootstepPlan plan, std::uint64_t seed);

  Eigen::VectorXd reset();
  /// Throws SimulationDiverged if the physics blows up.
  StepResult step(const Eigen::VectorXd& action);

  static constexpr int kObsDim = 2 * sim::kNumJoints + 15;
  static constexpr int kActDim = sim::kNumJoints;

  const sim::PlanarBipedState& state() const { return state_; }
  const plan::FootstepPlan& plan() const { return plan_; }
  const plan::FootstepPlan& observed_plan() const { return observed_plan_; }
  const task::ScoreTracker& tracker() const { return tracker_; }
  const sim::Terrain& terrain() const { return terrain_; }
  const EnvConfig& config() const { return config_; }
  double phase() const { return phase_; }
  int control_step_count() const { return steps_; }
  double time() const { return steps_ * control_period(); }
  double control_period() const;
  double forward_displacement() const;
  double nominal_root_height() const { return nominal_height_; }

  /// Lowest sole point across both feet.
  double lowest_contact_z() const;

 private:
  Eigen::VectorXd observe();
  double floor_height() const;

  EnvConfig config_;
  plan::FootstepPlan plan_;
  plan::FootstepPlan observed_plan_;
  sim::Terrain terrain_;
  gait::GaitSchedule active_schedule_;
  std::mt19937_64 rng_;
  std::mt19937_64 obs_noise_rng_;
  sim::PlanarBipedState state_;
  task::ScoreTracker tracker_;
  double phase_ = 0.0;
  int steps_ = 0;
  double start_x_ = 0.0;
  double nominal_height_ = 0.0;
  sim::JointVector prev_action_ = sim::JointVector::Zero();
  sim::JointVector prev_torque_ = sim::JointVector::Zero();
};

}  // namespace steprl::env
