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
#include <cstddef>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "steprl/gait.hpp"
#include "steprl/plan.hpp"

namespace steprl::task {

using Target = std::array<double, 4>;  // x, y, z, theta
using Window = std::array<Target, 2>;

/// Root pose used to express targets. `z` is the height of the floor the
/// robot stands on, so flat-ground targets read z = 0.
struct RootPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
};

Target to_root_frame(const plan::Footstep& step, const RootPose& root);
plan::Footstep from_root_frame(const Target& rel, const RootPose& root);

/// Proprioceptive part of the observation.
struct RobotObservation {
  std::vector<double> joint_pos;
  std::vector<double> joint_vel;
  double roll = 0.0;
  double pitch = 0.0;
  std::array<double, 3> angvel = {0.0, 0.0, 0.0};
};

/// Flattened order: joint_pos, joint_vel, (roll, pitch), angvel(3),
/// T1(x,y,z,theta), T2(x,y,z,theta), clock(sin, cos).
struct Observation {
  std::vector<double> joint_pos;
  std::vector<double> joint_vel;
  std::array<double, 2> root_rp = {0.0, 0.0};
  std::array<double, 3> root_angvel = {0.0, 0.0, 0.0};
  std::array<double, 8> external = {};
  std::array<double, 2> clock = {0.0, 1.0};

  std::size_t size() const { return 2 * joint_pos.size() + 2 + 3 + 8 + 2; }
  void flatten_into(std::span<double> out) const;
  Eigen::VectorXd flatten() const;
};

/// Index layout of the flattened observation for `n_joints` actuated joints.
struct ObservationLayout {
  std::size_t n_joints = 0;
  std::size_t joint_pos() const { return 0; }
  std::size_t joint_vel() const { return n_joints; }
  std::size_t roll() const { return 2 * n_joints; }
  std::size_t pitch() const { return 2 * n_joints + 1; }
  std::size_t angvel() const { return 2 * n_joints + 2; }
  std::size_t external() const { return 2 * n_joints + 5; }
  std::size_t clock() const { return 2 * n_joints + 13; }
  std::size_t size() const { return 2 * n_joints + 15; }
};

/// Assembles the observation. In stand mode the external slice is zeroed.
Observation build_observation(const RobotObservation& robot, const Window& window,
                              double phase, bool stand_mode);

// Scoring ---------------------------------------------------------------------

struct ScoreConfig {
  double target_radius = 0.20;
  double target_delay = 0.75;
  /// Count time only while the foot inside the radius is in contact.
  bool require_contact = false;
};

struct ScoreTracker {
  std::size_t current_index = 0;
  double in_radius_timer = 0.0;
  ScoreConfig config;
};

struct FootSample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  bool contact = true;
};

struct ScoreResult {
  ScoreTracker tracker;
  bool scored = false;
  std::array<plan::Footstep, 2> window;
};

/// Steps (k, k+1) of the plan, clamped so the last step repeats past the end.
std::array<plan::Footstep, 2> target_window(const ScoreTracker& tracker,
                                            const plan::FootstepPlan& plan);

ScoreResult score_update(const ScoreTracker& tracker,
                         std::span<const FootSample> feet, double dt,
                         const plan::FootstepPlan& plan);

// Curriculum ------------------------------------------------------------------

struct CurriculumState {
  long itr = 0;
  long start_itr = 3000;
  long ramp_itrs = 8000;
  double max_height = 0.10;
};

/// |p_z| at the state's iteration: 0 before start, then a linear ramp that
/// saturates at max_height after ramp_itrs iterations.
double curriculum_magnitude(const CurriculumState& state);
/// Signed step height for a given direction k_c in {-1, +1}.
double curriculum_height(const CurriculumState& state, int direction);
/// Draws k_c uniformly from {-1, +1}.
double curriculum_height(const CurriculumState& state, std::mt19937_64& rng);

// Initialization and termination ----------------------------------------------

struct ResetSample {
  std::vector<double> joints;
  double phase = 0.0;
};

ResetSample reset_state(std::mt19937_64& rng, std::span<const double> nominal,
                        double joint_noise);

enum class Termination { kContinue, kFall, kSelfCollision, kTimeout };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct TerminationConfig {
  double min_root_height = 0.60;
  int max_control_steps = 400;
};

struct TerminationInputs {
  double root_z = 0.0;
  double lowest_contact_z = 0.0;
  bool self_collision = false;
};

/// Priority when several hold: fall, then self-collision, then timeout.
Termination check_termination(const TerminationInputs& in,
                              const TerminationConfig& config, int control_step);

struct EpisodeSummary {
  Termination cause = Termination::kContinue;
  std::size_t steps_scored = 0;
  int length = 0;
  double episode_return = 0.0;
};

void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const EpisodeSummary& s);

}  // namespace steprl::task
