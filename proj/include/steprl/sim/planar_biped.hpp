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

#include "steprl/plan.hpp"

namespace steprl::sim {

inline constexpr int kNumJoints = 6;  // hip, knee, ankle (left), then right
inline constexpr int kNumDof = 3 + kNumJoints;

using JointVector = Eigen::Matrix<double, kNumJoints, 1>;
using DofVector = Eigen::Matrix<double, kNumDof, 1>;

enum Leg { kLeft = 0, kRight = 1 };

/// Sagittal seven-link biped. Generalized coordinates are
///   (x, z, pitch) of the hip/root, then hip, knee, ankle per leg.
/// All angles are counter-clockwise in the x-z plane, so a positive hip angle
/// swings the foot forward and a negative knee angle bends the knee.
struct PlanarBipedModel {
  // Torso (pelvis + trunk + head), measured upward from the hip joint.
  double torso_mass = 37.0;
  double torso_inertia = 1.6;
  double torso_com = 0.30;
  double torso_length = 0.75;

  double thigh_mass = 7.0;
  double thigh_inertia = 0.10;
  double thigh_length = 0.40;
  double thigh_com = 0.18;

  double shank_mass = 3.5;
  double shank_inertia = 0.05;
  double shank_length = 0.40;
  double shank_com = 0.18;

  double foot_mass = 1.0;
  double foot_inertia = 0.005;
  double foot_heel = 0.06;     // heel behind the ankle
  double foot_toe = 0.16;      // toe ahead of the ankle
  double ankle_height = 0.05;  // sole below the ankle
  double foot_com_x = 0.05;
  double foot_com_z = 0.03;

  /// Lateral position of each leg (+left / -right); only used for reporting
  /// 3D foot positions to the task layer.
  double leg_offset_y = 0.15;

  double armature = 0.10;  // reflected rotor inertia per joint
  double gravity = 9.81;

  // Per joint type: hip, knee, ankle.
  std::array<double, 3> kp = {400.0, 1200.0, 800.0};
  std::array<double, 3> kd = {20.0, 20.0, 20.0};
  std::array<double, 3> torque_limit = {200.0, 300.0, 150.0};
  std::array<double, 3> velocity_limit = {8.0, 8.0, 8.0};
  std::array<double, 3> joint_lower = {-0.6, -2.4, -0.8};
  std::array<double, 3> joint_upper = {1.6, 0.0, 0.8};
  std::array<double, 3> nominal = {0.3, -0.6, 0.3};
  double joint_limit_stiffness = 500.0;
  double joint_limit_damping = 5.0;

  // Contact.
  double contact_stiffness = 1e5;
  double contact_damping = 1e3;
  double friction = 0.8;
  double tangent_stiffness = 5e4;
  double tangent_damping = 5e2;

  double action_scale = 0.5;
  double max_speed = 200.0;  // divergence bound on any generalized velocity

  double total_mass() const;
  JointVector nominal_joints() const;
  JointVector joint_array(const std::array<double, 3>& per_type) const;
  void validate() const;
};

/// Piecewise-constant ground height along x. Flat ground has no edges.
class Terrain {
 public:
  Terrain() = default;
  /// heights.size() == edges.size() + 1; height k holds on [edges[k-1], edges[k]).
  Terrain(std::vector<double> edges, std::vector<double> heights);

  static Terrain flat() { return {}; }
  /// Stairs whose treads are centred on the plan's step x positions; the run
  /// equals the plan step length.
  static Terrain from_plan(const plan::FootstepPlan& plan);

  double height(double x) const;
  /// Contact query for a point; returns penetration depth (0 when free) and
  /// the outward unit normal.
  double penetration(double x, double z, Eigen::Vector2d* normal) const;

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& heights() const { return heights_; }

 private:
  std::size_t segment(double x) const;
  std::vector<double> edges_;
  std::vector<double> heights_ = {0.0};
};

struct ContactPoint {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  Eigen::Vector2d force = Eigen::Vector2d::Zero();  // world frame (x, z)
  Eigen::Vector2d anchor = Eigen::Vector2d::Zero();
  double penetration = 0.0;
  double normal_force = 0.0;
  double tangent_force = 0.0;
  bool active = false;
};

struct FootContact {
  ContactPoint heel;
  ContactPoint toe;
  double grf_z() const { return heel.force.y() + toe.force.y(); }
  bool in_contact() const { return heel.active || toe.active; }
};

struct PlanarBipedState {
  DofVector q = DofVector::Zero();
  DofVector v = DofVector::Zero();
  std::array<FootContact, 2> feet;
  JointVector torque = JointVector::Zero();  // last applied joint torque
  bool self_collision = false;
  double time = 0.0;
};

/// Cartesian readouts derived from a state.
struct Kinematics {
  Eigen::Vector2d hip;
  Eigen::Vector2d head;
  Eigen::Vector2d torso_com;
  std::array<Eigen::Vector2d, 2> knee;
  std::array<Eigen::Vector2d, 2> ankle;
  std::array<Eigen::Vector2d, 2> heel;
  std::array<Eigen::Vector2d, 2> toe;
  std::array<Eigen::Vector2d, 2> foot_center;     // sole midpoint
  std::array<Eigen::Vector2d, 2> foot_velocity;   // sole midpoint velocity
  Eigen::Vector2d com;
};

Kinematics kinematics(const PlanarBipedModel& model, const PlanarBipedState& s);

/// Nominal posture with both soles flat on the ground at x = 0.
PlanarBipedState nominal_state(const PlanarBipedModel& model,
                               const Terrain& terrain = Terrain::flat());
/// Places the robot with its hip at `x` and its lowest sole point on the
/// ground.
PlanarBipedState standing_state(const PlanarBipedModel& model,
                                const JointVector& joints, double pitch = 0.0,
                                const Terrain& terrain = Terrain::flat(),
                                double x = 0.0);

/// clamp(kp (q_des - q) - kd qd, +-limit), element-wise.
JointVector pd_torque(const JointVector& q_des, const JointVector& q,
                      const JointVector& qd, const JointVector& kp,
                      const JointVector& kd, const JointVector& limits);

/// Semi-implicit Euler step of the articulated dynamics with penalty contact.
/// Throws SimulationDiverged on non-finite or runaway velocities.
void physics_step(const PlanarBipedModel& model, const Terrain& terrain,
                  PlanarBipedState& state, const JointVector& torque,
                  double dt = 1e-3);

/// Joint-space mass matrix (including armature) and the generalized force
/// without actuation or contact. Exposed for testing.
Eigen::Matrix<double, kNumDof, kNumDof> mass_matrix(const PlanarBipedModel& model,
                                                    const PlanarBipedState& s);

double kinetic_energy(const PlanarBipedModel& model, const PlanarBipedState& s);
double potential_energy(const PlanarBipedModel& model, const PlanarBipedState& s);

struct ControlConfig {
  int substeps = 25;
  double physics_dt = 1e-3;
};

struct ControlResult {
  std::array<double, 2> grf_z = {0.0, 0.0};  // mean over the substeps
  JointVector mean_torque = JointVector::Zero();
  JointVector q_des = JointVector::Zero();
};

/// One policy step: q_des = nominal + clip(action, -1, 1) * action_scale,
/// followed by `substeps` PD + physics updates.
ControlResult control_step(const PlanarBipedModel& model, const Terrain& terrain,
                           PlanarBipedState& state, const JointVector& action,
                           const ControlConfig& config = {});

/// Swaps the two legs (joints, velocities, contact state).
PlanarBipedState mirror(const PlanarBipedState& s);

}  // namespace steprl::sim
