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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "steprl/common.hpp"
#include "steprl/eval.hpp"
#include "steprl/gait.hpp"
#include "steprl/plan.hpp"
#include "steprl/sim/mirror.hpp"
#include "steprl/sim/planar_biped.hpp"
#include "steprl/sim/scripted_walk.hpp"
#include "steprl/task.hpp"

using namespace steprl;
using namespace steprl::sim;

namespace {

JointVector uniform_joints(double v) { return JointVector::Constant(v); }

double total_grf(const PlanarBipedState& s) { return s.feet[0].grf_z() + s.feet[1].grf_z(); }

JointVector mirror_action(const JointVector& a) {
  JointVector m;
  m << a.tail<3>(), a.head<3>();
  return m;
}

}  // namespace

TEST_CASE("pd torque") {
  const JointVector q = JointVector::LinSpaced(-0.3, 0.3);
  const JointVector zero = JointVector::Zero();
  CHECK(pd_torque(q, q, zero, uniform_joints(50), uniform_joints(2), uniform_joints(100)) == zero);
  const JointVector t = pd_torque(q + uniform_joints(0.1), q, zero, uniform_joints(50), zero,
                                  uniform_joints(100));
  for (int i = 0; i < kNumJoints; ++i) CHECK(t(i) == doctest::Approx(5.0));
  const JointVector sat = pd_torque(q + uniform_joints(100), q, uniform_joints(-3),
                                    uniform_joints(50), uniform_joints(2), uniform_joints(100));
  CHECK(sat == uniform_joints(100));
  const JointVector neg = pd_torque(q - uniform_joints(100), q, zero, uniform_joints(50), zero,
                                    uniform_joints(100));
  CHECK(neg == uniform_joints(-100));
}

TEST_CASE("model preset") {
  PlanarBipedModel m;
  CHECK_NOTHROW(m.validate());
  const double mass = m.torso_mass + 2 * (m.thigh_mass + m.shank_mass + m.foot_mass);
  CHECK(m.total_mass() == doctest::Approx(mass));
  CHECK(mass > 55.0);
  CHECK(mass < 65.0);
  m.thigh_mass = 0.0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("hip gains are low enough to sag at least five degrees") {
  // Gravity torque at the hip while holding a straight leg horizontal, summed
  // link by link; the PD loop settles where kp * error balances it.
  const PlanarBipedModel m;
  const double lever = m.thigh_mass * m.thigh_com +
                       m.shank_mass * (m.thigh_length + m.shank_com) +
                       m.foot_mass * (m.thigh_length + m.shank_length + m.foot_com_z);
  const double torque = m.gravity * lever;
  const double error_deg = torque / m.kp[0] * 180.0 / kPi;
  CHECK(error_deg >= 5.0);
  CHECK(torque < m.torque_limit[0]);
}

TEST_CASE("free fall matches the ballistic oracle") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  s.q(1) += 20.0;
  const double z0 = s.q(1);
  for (int k = 0; k < 1000; ++k) physics_step(m, Terrain::flat(), s, JointVector::Zero(), 1e-3);
  const double drop = z0 - s.q(1);
  CHECK(std::abs(drop - 0.5 * m.gravity) <= 0.01 * 0.5 * m.gravity);
  CHECK(std::abs(s.v(1) + m.gravity) <= 0.01 * m.gravity);
}

TEST_CASE("passive energy drift stays within half a percent per second") {
  PlanarBipedModel m;
  auto s = nominal_state(m);
  s.q(1) += 20.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < kNumDof; ++i) s.v(i) = u(rng);
  const double e0 = kinetic_energy(m, s) + potential_energy(m, s);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    physics_step(m, Terrain::flat(), s, JointVector::Zero(), 1e-3);
    const double e = kinetic_energy(m, s) + potential_energy(m, s);
    worst = std::max(worst, std::abs(e - e0));
  }
  CHECK(worst <= 0.005 * std::abs(e0));
}

TEST_CASE("mass matrix is symmetric positive definite") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    for (int i = 2; i < kNumDof; ++i) s.q(i) = u(rng);
    const auto M = mass_matrix(m, s);
    CHECK((M - M.transpose()).norm() < 1e-12 * M.norm());
    Eigen::LLT<Eigen::Matrix<double, kNumDof, kNumDof>> llt(M);
    CHECK(llt.info() == Eigen::Success);
    // Kinetic energy from the mass matrix agrees with the body-by-body sum.
    for (int i = 0; i < kNumDof; ++i) s.v(i) = u(rng);
    CHECK(kinetic_energy(m, s) == doctest::Approx(0.5 * s.v.dot(M * s.v)).epsilon(1e-9));
  }
}

TEST_CASE("static stand carries the body weight") {
  const PlanarBipedModel m;
  const ControlConfig cc;
  auto s = nominal_state(m);
  for (int k = 0; k < 120; ++k) control_step(m, Terrain::flat(), s, JointVector::Zero(), cc);
  double sum = 0.0;
  for (int k = 0; k < 40; ++k) {
    const auto r = control_step(m, Terrain::flat(), s, JointVector::Zero(), cc);
    sum += r.grf_z[0] + r.grf_z[1];
  }
  const double mg = m.total_mass() * m.gravity;
  CHECK(std::abs(sum / 40 - mg) <= 0.02 * mg);
  CHECK(std::abs(total_grf(s) - mg) <= 0.02 * mg);
  CHECK(std::abs(s.feet[0].grf_z() - 0.5 * mg) <= 0.1 * mg);
}

TEST_CASE("zero action stands for ten seconds") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  const double h0 = kinematics(m, s).hip.y();
  for (int k = 0; k < 400; ++k) {
    const auto r = control_step(m, Terrain::flat(), s, JointVector::Zero());
    if (k == 0) CHECK(r.q_des == m.nominal_joints());
  }
  const auto kin = kinematics(m, s);
  CHECK(std::abs(kin.hip.y() - h0) < 0.05);
  CHECK(std::abs(s.q(2)) < 0.15);
  CHECK(!s.self_collision);
  CHECK(s.time == doctest::Approx(10.0));
}

TEST_CASE("alternating hip action stays bounded") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  for (int k = 0; k < 400; ++k) {
    JointVector a = JointVector::Zero();
    a(0) = (k % 2 ? 0.1 : -0.1);
    a(3) = -a(0);
    REQUIRE_NOTHROW(control_step(m, Terrain::flat(), s, a));
    CHECK(s.v.cwiseAbs().maxCoeff() < 20.0);
  }
  CHECK(kinematics(m, s).hip.y() > 0.6);
}

TEST_CASE("actions are clipped and scaled about the nominal posture") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  JointVector a = JointVector::Zero();
  a(0) = 3.0;
  a(1) = -0.4;
  const auto r = control_step(m, Terrain::flat(), s, a);
  CHECK(r.q_des(0) == doctest::Approx(m.nominal[0] + m.action_scale));
  CHECK(r.q_des(1) == doctest::Approx(m.nominal[1] - 0.4 * m.action_scale));
  CHECK(r.q_des(2) == m.nominal[2]);
}

TEST_CASE("contact forces respect the friction cone") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const JointVector kp = m.joint_array(m.kp), kd = m.joint_array(m.kd),
                    lim = m.joint_array(m.torque_limit);
  JointVector q_des = m.nominal_joints();
  int active = 0;
  for (int k = 0; k < 10000; ++k) {
    if (k % 25 == 0) {
      for (int i = 0; i < kNumJoints; ++i) q_des(i) = m.nominal_joints()(i) + m.action_scale * u(rng);
    }
    const JointVector tau = pd_torque(q_des, s.q.tail<kNumJoints>(), s.v.tail<kNumJoints>(), kp, kd, lim);
    physics_step(m, Terrain::flat(), s, tau, 1e-3);
    for (const auto& foot : s.feet) {
      for (const auto* c : {&foot.heel, &foot.toe}) {
        CHECK(c->normal_force >= 0.0);
        if (std::abs(c->tangent_force) > m.friction * c->normal_force + 1e-9) {
          FAIL("friction cone violated at step " << k);
        }
        active += c->active;
      }
    }
  }
  CHECK(active > 1000);
}

TEST_CASE("stairs terrain follows the plan") {
  const auto p = plan::apply_stairs(plan::gen_line_plan(plan::Direction::kForward, 0.3, 0.1, 3), 0.1);
  const auto t = Terrain::from_plan(p);
  CHECK(t.height(0.0) == 0.0);
  CHECK(t.height(0.3) == doctest::Approx(0.1));
  CHECK(t.height(0.6) == doctest::Approx(0.2));
  CHECK(t.height(0.9) == doctest::Approx(0.3));
  CHECK(t.height(5.0) == doctest::Approx(0.3));
  Eigen::Vector2d n;
  CHECK(t.penetration(0.3, 0.05, &n) == doctest::Approx(0.05));
  CHECK(n.y() == doctest::Approx(1.0));
  CHECK(Terrain::flat().penetration(1.0, 0.2, &n) == 0.0);
  CHECK_THROWS_AS(Terrain({0.0}, {0.0}), InvalidArgument);
}

TEST_CASE("divergence is reported") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  s.v(3) = 1e6;
  CHECK_THROWS_AS(physics_step(m, Terrain::flat(), s, JointVector::Zero()), SimulationDiverged);
  auto n = nominal_state(m);
  n.q(0) = std::nan("");
  CHECK_THROWS_AS(physics_step(m, Terrain::flat(), n, JointVector::Zero()), SimulationDiverged);
}

TEST_CASE("simulation is deterministic") {
  const PlanarBipedModel m;
  auto a = nominal_state(m), b = nominal_state(m);
  for (int k = 0; k < 100; ++k) {
    JointVector act = JointVector::Constant(std::sin(0.3 * k));
    control_step(m, Terrain::flat(), a, act);
    control_step(m, Terrain::flat(), b, act);
  }
  CHECK(a.q == b.q);
  CHECK(a.v == b.v);
}

TEST_CASE("mirror maps are involutions") {
  const auto mm = MirrorMaps::planar();
  CHECK(mm.state.size() == 27);
  CHECK(mm.action.size() == 6);
  CHECK(mm.state.is_involution());
  CHECK(mm.action.is_involution());
  const auto S = mm.state.matrix();
  CHECK(S * S == Eigen::MatrixXd::Identity(27, 27));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd x(27);
  for (auto& v : x) v = n(rng);
  CHECK(mm.state.apply(mm.state.apply(x)) == x);
  CHECK(mm.state.apply(x) == S * x);
  Eigen::MatrixXd cols(27, 5);
  for (auto& v : cols.reshaped()) v = n(rng);
  CHECK(mm.state.apply_columns(cols) == S * cols);
  const auto g = MirrorMaps::for_biped(6, {1, -1, -1, 1, 1, -1});
  CHECK(g.state.is_involution());
  CHECK(g.state.size() == 2 * 12 + 15);
  CHECK_THROWS_AS(mm.state.apply(Eigen::VectorXd::Zero(5)), InvalidArgument);
}

TEST_CASE("mirror flips lateral targets and fixes symmetric stands") {
  const auto mm = MirrorMaps::planar();
  task::RobotObservation r;
  r.joint_pos = {0.3, -0.6, 0.3, 0.3, -0.6, 0.3};
  r.joint_vel = std::vector<double>(6, 0.0);
  const auto stand = task::build_observation(r, {}, 0.0, true).flatten();
  Eigen::VectorXd shifted = task::build_observation(r, {}, 0.5, true).flatten();
  CHECK((mm.state.apply(stand) - shifted).norm() < 1e-15);
  const task::Window w = {task::Target{0.25, 0.15, 0.0, 0.1}, task::Target{0.5, -0.15, 0.0, 0.0}};
  const auto walk = task::build_observation(r, w, 0.2, false).flatten();
  const auto mw = mm.state.apply(walk);
  CHECK(mw(18) == -0.15);
  CHECK(mw(20) == -0.1);
  CHECK(mw(22) == 0.15);
  CHECK(mw(17) == 0.25);
}

TEST_CASE("mirrored rollouts stay mirrored") {
  const PlanarBipedModel m;
  auto s = nominal_state(m);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 3; i < kNumDof; ++i) s.v(i) = u(rng);
  s.q(3) += 0.1;
  s.q(7) -= 0.1;
  auto ms = mirror(s);
  double worst = 0.0;
  for (int k = 0; k < 80; ++k) {
    JointVector a;
    for (int i = 0; i < kNumJoints; ++i) a(i) = u(rng);
    control_step(m, Terrain::flat(), s, a);
    control_step(m, Terrain::flat(), ms, mirror_action(a));
    const auto back = mirror(ms);
    worst = std::max({worst, (back.q - s.q).cwiseAbs().maxCoeff(),
                      (back.v - s.v).cwiseAbs().maxCoeff()});
  }
  CHECK(worst <= 1e-9);
  CHECK(mirror(mirror(s)).q == s.q);
}

TEST_CASE("scripted walker lands on every step") {
  const auto sched = gait::GaitSchedule::hrp5p();
  const auto p = plan::gen_line_plan(plan::Direction::kForward, 0.35, 0.15, 6);
  const auto frames = scripted_walk_3d(p, sched);
  REQUIRE(!frames.empty());
  CHECK(frames[1].t - frames[0].t == doctest::Approx(sched.control_dt));
  for (const auto& step : p.steps) {
    const int foot = step.side == plan::Side::kLeft ? 0 : 1;
    bool landed = false;
    for (const auto& f : frames) {
      landed = landed || (std::abs(f.feet[foot].x - step.x) < 1e-12 &&
                          std::abs(f.feet[foot].y - step.y) < 1e-12 && f.contact[foot]);
    }
    CHECK(landed);
  }
  for (const auto& f : frames) CHECK((f.contact[0] || f.contact[1]));
}

TEST_CASE("scripted turn tracks the heading monotonically") {
  const auto p = plan::gen_turn_in_place(kPi / 2, kPi / 8, 0.15);
  const auto frames = scripted_walk_3d(p, gait::GaitSchedule::hrp5p());
  double prev = frames.front().root.yaw;
  for (const auto& f : frames) {
    CHECK(f.root.yaw >= prev - 1e-12);
    prev = f.root.yaw;
  }
  CHECK(frames.back().root.yaw == doctest::Approx(kPi / 2));
}

TEST_CASE("scripted stand keeps the feet still") {
  const auto frames = scripted_walk_3d(plan::gen_stand(), gait::GaitSchedule::hrp5p());
  for (const auto& f : frames) {
    CHECK(f.foot_velocity[0].norm() == 0.0);
    CHECK(f.foot_velocity[1].norm() == 0.0);
  }
  const auto steps = eval::replay_scripted(plan::gen_stand(), gait::GaitSchedule::hrp5p());
  for (const auto& s : steps) CHECK(s.breakdown.spd == 0.0);
  CHECK(eval::count_scored(steps) == 1);
}

TEST_CASE("scripted walker rejects unreachable steps") {
  plan::FootstepPlan p = plan::gen_line_plan(plan::Direction::kForward, 0.35, 0.15, 2);
  p.steps[1].x = 5.0;
  CHECK_THROWS_AS(scripted_walk_3d(p, gait::GaitSchedule::hrp5p()), InfeasiblePlan);
  p = plan::gen_line_plan(plan::Direction::kForward, 0.35, 0.15, 2);
  p.steps[0].z = 1.0;
  CHECK_THROWS_AS(scripted_walk_3d(p, gait::GaitSchedule::hrp5p()), InfeasiblePlan);
}

TEST_CASE("scripted replay scores every step of every plan mode") {
  const auto grid = plan::OccupancyGrid::empty_centered(6.0, 0.05);
  const std::vector<plan::FootstepPlan> plans = {
      plan::gen_line_plan(plan::Direction::kForward, 0.35, 0.15, 8),
      plan::gen_line_plan(plan::Direction::kBackward, 0.25, 0.12, 6),
      plan::gen_line_plan(plan::Direction::kLateralLeft, 0.2, 0.15, 6),
      plan::gen_turn_in_place(kPi / 2, kPi / 8, 0.15),
      plan::gen_stand(),
      plan::plan_curved(grid, {0, 0, 0}, {1.5, 0.8, 0.6}),
      plan::apply_stairs(plan::gen_line_plan(plan::Direction::kForward, 0.3, 0.15, 5), 0.1),
  };
  for (const auto& sched : {gait::GaitSchedule::hrp5p(), gait::GaitSchedule::jvrc1()}) {
    for (const auto& p : plans) {
      task::ScoreConfig sc;
      sc.target_delay = sched.single_support;
      const auto steps = eval::replay_scripted(p, sched, sc);
      CHECK(eval::count_scored(steps) == p.size());
      for (const auto& s : steps) {
        CHECK(s.breakdown.total >= -0.3);
        CHECK(s.breakdown.total <= 1.0);
      }
    }
  }
}
