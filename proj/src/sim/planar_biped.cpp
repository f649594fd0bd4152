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

#include "steprl/sim/planar_biped.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "steprl/common.hpp"

namespace steprl::sim {

namespace {

using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Jac = Eigen::Matrix<double, 2, 6>;
using Mat9 = Eigen::Matrix<double, kNumDof, kNumDof>;

Vec2 rot(double a, double x, double z) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {c * x - s * z, s * x + c * z};
}

// Derivative of a rotated offset with respect to its rotation angle.
Vec2 perp(const Vec2& r) { return {-r.y(), r.x()}; }

// Joint index of (leg, type) in the joint vector / state q.
constexpr int joint_index(int leg, int type) { return 3 * leg + type; }
constexpr int dof_index(int leg, int type) { return 3 + joint_index(leg, type); }

struct LegFrame {
  Vec2 hip, knee, ankle;
  Vec2 com_thigh, com_shank, com_foot;
  Vec2 heel, toe;
  double w_thigh = 0.0, w_shank = 0.0, w_foot = 0.0;
  // Velocity-product accelerations (generalized accelerations set to zero).
  Vec2 bias_knee, bias_ankle;
  Vec2 bias_thigh, bias_shank, bias_foot, bias_heel, bias_toe;
};

// Local generalized velocity of a leg: (xd, zd, pitchd, hipd, kneed, ankled).
Vec6 leg_velocity(const PlanarBipedState& s, int leg) {
  Vec6 v;
  v << s.v(0), s.v(1), s.v(2), s.v(dof_index(leg, 0)), s.v(dof_index(leg, 1)),
      s.v(dof_index(leg, 2));
  return v;
}

LegFrame leg_frame(const PlanarBipedModel& m, const PlanarBipedState& s, int leg) {
  LegFrame f;
  const double pitch = s.q(2);
  const double a_t = pitch + s.q(dof_index(leg, 0));
  const double a_s = a_t + s.q(dof_index(leg, 1));
  const double a_f = a_s + s.q(dof_index(leg, 2));
  f.w_thigh = s.v(2) + s.v(dof_index(leg, 0));
  f.w_shank = f.w_thigh + s.v(dof_index(leg, 1));
  f.w_foot = f.w_shank + s.v(dof_index(leg, 2));

  f.hip = Vec2(s.q(0), s.q(1));
  const Vec2 r_knee = rot(a_t, 0.0, -m.thigh_length);
  const Vec2 r_ct = rot(a_t, 0.0, -m.thigh_com);
  f.knee = f.hip + r_knee;
  f.com_thigh = f.hip + r_ct;
  const Vec2 r_ankle = rot(a_s, 0.0, -m.shank_length);
  const Vec2 r_cs = rot(a_s, 0.0, -m.shank_com);
  f.ankle = f.knee + r_ankle;
  f.com_shank = f.knee + r_cs;
  const Vec2 r_cf = rot(a_f, m.foot_com_x, -m.foot_com_z);
  const Vec2 r_heel = rot(a_f, -m.foot_heel, -m.ankle_height);
  const Vec2 r_toe = rot(a_f, m.foot_toe, -m.ankle_height);
  f.com_foot = f.ankle + r_cf;
  f.heel = f.ankle + r_heel;
  f.toe = f.ankle + r_toe;

  const double wt2 = f.w_thigh * f.w_thigh;
  const double ws2 = f.w_shank * f.w_shank;
  const double wf2 = f.w_foot * f.w_foot;
  f.bias_thigh = -wt2 * r_ct;
  f.bias_knee = -wt2 * r_knee;
  f.bias_shank = f.bias_knee - ws2 * r_cs;
  f.bias_ankle = f.bias_knee - ws2 * r_ankle;
  f.bias_foot = f.bias_ankle - wf2 * r_cf;
  f.bias_heel = f.bias_ankle - wf2 * r_heel;
  f.bias_toe = f.bias_ankle - wf2 * r_toe;
  return f;
}

// Jacobian of a point attached to leg link `level` (1 thigh, 2 shank, 3 foot)
// with respect to the leg-local coordinates.
Jac point_jacobian(const LegFrame& f, const Vec2& p, int level) {
  Jac J = Jac::Zero();
  J(0, 0) = 1.0;
  J(1, 1) = 1.0;
  const Vec2 about_hip = perp(p - f.hip);
  J.col(2) = about_hip;
  J.col(3) = about_hip;
  if (level >= 2) J.col(4) = perp(p - f.knee);
  if (level >= 3) J.col(5) = perp(p - f.ankle);
  return J;
}

Vec6 angular_row(int level) {
  Vec6 r = Vec6::Zero();
  r(2) = 1.0;
  r(3) = 1.0;
  if (level >= 2) r(4) = 1.0;
  if (level >= 3) r(5) = 1.0;
  return r;
}

struct LegTerms {
  Mat6 mass = Mat6::Zero();
  Vec6 force = Vec6::Zero();
};

// Contributions of one leg's three links (mass, gravity, velocity products).
LegTerms leg_dynamics(const PlanarBipedModel& m, const LegFrame& f) {
  LegTerms t;
  const Vec2 g(0.0, -m.gravity);
  auto add_link = [&](const Vec2& com, const Vec2& bias, int level, double mass,
                      double inertia) {
    const Jac J = point_jacobian(f, com, level);
    const Vec6 w = angular_row(level);
    t.mass.noalias() += mass * J.transpose() * J;
    t.mass.noalias() += inertia * w * w.transpose();
    t.force.noalias() += J.transpose() * (mass * (g - bias));
  };
  add_link(f.com_thigh, f.bias_thigh, 1, m.thigh_mass, m.thigh_inertia);
  add_link(f.com_shank, f.bias_shank, 2, m.shank_mass, m.shank_inertia);
  add_link(f.com_foot, f.bias_foot, 3, m.foot_mass, m.foot_inertia);
  return t;
}

struct TorsoTerms {
  Mat3 mass = Mat3::Zero();
  Vec3 force = Vec3::Zero();
  Vec2 com;
  Vec2 head;
};

TorsoTerms torso_dynamics(const PlanarBipedModel& m, const PlanarBipedState& s) {
  TorsoTerms t;
  const Vec2 hip(s.q(0), s.q(1));
  const Vec2 r = rot(s.q(2), 0.0, m.torso_com);
  t.com = hip + r;
  t.head = hip + rot(s.q(2), 0.0, m.torso_length);
  Eigen::Matrix<double, 2, 3> J;
  J.col(0) = Vec2(1.0, 0.0);
  J.col(1) = Vec2(0.0, 1.0);
  J.col(2) = perp(r);
  const Vec2 bias = -s.v(2) * s.v(2) * r;
  t.mass.noalias() = m.torso_mass * J.transpose() * J;
  t.mass(2, 2) += m.torso_inertia;
  t.force.noalias() = J.transpose() * (m.torso_mass * (Vec2(0.0, -m.gravity) - bias));
  return t;
}

void update_contact(const PlanarBipedModel& m, const Terrain& terrain,
                    ContactPoint& cp, const Vec2& pos, const Vec2& vel) {
  cp.position = pos;
  cp.velocity = vel;
  Vec2 n;
  const double depth = terrain.penetration(pos.x(), pos.y(), &n);
  cp.penetration = depth;
  if (depth <= 0.0) {
    cp.active = false;
    cp.force.setZero();
    cp.normal_force = 0.0;
    cp.tangent_force = 0.0;
    return;
  }
  if (!cp.active) {
    cp.anchor = pos;
    cp.active = true;
  }
  const Vec2 t(n.y(), -n.x());
  const double vn = vel.dot(n);
  const double vt = vel.dot(t);
  const double fn = std::max(0.0, m.contact_stiffness * depth - m.contact_damping * vn);
  const double slip = (pos - cp.anchor).dot(t);
  double ft = -m.tangent_stiffness * slip - m.tangent_damping * vt;
  const double cap = m.friction * fn;
  if (std::abs(ft) > cap) {
    ft = std::clamp(ft, -cap, cap);
    // Slide the anchor so the spring alone carries the capped force.
    cp.anchor = pos + t * (ft / m.tangent_stiffness);
  }
  cp.normal_force = fn;
  cp.tangent_force = ft;
  cp.force = fn * n + ft * t;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                        const Vec2& q2) {
  const Vec2 r = p2 - p1;
  const Vec2 s = q2 - q1;
  const double d1 = cross2(r, q1 - p1);
  const double d2 = cross2(r, q2 - p1);
  const double d3 = cross2(s, p1 - q1);
  const double d4 = cross2(s, p2 - q1);
  return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0)) && d1 != 0.0 &&
         d2 != 0.0 && d3 != 0.0 && d4 != 0.0;
}

double limit_torque(const PlanarBipedModel& m, double q, double qd, double lo,
                    double hi) {
  if (q < lo) return m.joint_limit_stiffness * (lo - q) - m.joint_limit_damping * std::min(qd, 0.0);
  if (q > hi) return m.joint_limit_stiffness * (hi - q) - m.joint_limit_damping * std::max(qd, 0.0);
  return 0.0;
}

}  // namespace

// Model -----------------------------------------------------------------------

double PlanarBipedModel::total_mass() const {
  return torso_mass + 2.0 * (thigh_mass + shank_mass + foot_mass);
}

JointVector PlanarBipedModel::joint_array(const std::array<double, 3>& t) const {
  JointVector v;
  v << t[0], t[1], t[2], t[0], t[1], t[2];
  return v;
}

JointVector PlanarBipedModel::nominal_joints() const { return joint_array(nominal); }

void PlanarBipedModel::validate() const {
  for (double mass : {torso_mass, thigh_mass, shank_mass, foot_mass}) {
    if (!(mass > 0.0)) throw InvalidArgument("link masses must be positive");
  }
  for (double in : {torso_inertia, thigh_inertia, shank_inertia, foot_inertia}) {
    if (!(in > 0.0)) throw InvalidArgument("link inertias must be positive");
  }
  if (!(gravity >= 0.0)) throw InvalidArgument("gravity must be non-negative");
  if (!(contact_stiffness > 0.0) || !(tangent_stiffness > 0.0) || !(friction >= 0.0)) {
    throw InvalidArgument("contact parameters out of range");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(joint_lower[i] < joint_upper[i])) {
      throw InvalidArgument("joint lower limit must be below upper limit");
    }
    if (!(torque_limit[i] > 0.0)) throw InvalidArgument("torque limits must be positive");
  }
}

// Terrain ---------------------------------------------------------------------

Terrain::Terrain(std::vector<double> edges, std::vector<double> heights)
    : edges_(std::move(edges)), heights_(std::move(heights)) {
  if (heights_.size() != edges_.size() + 1) {
    throw InvalidArgument("terrain needs one more height than edges");
  }
  if (!std::is_sorted(edges_.begin(), edges_.end())) {
    throw InvalidArgument("terrain edges must be sorted");
  }
}

Terrain Terrain::from_plan(const plan::FootstepPlan& plan) {
  if (plan.steps.empty() || !(plan.step_length > 0.0)) return flat();
  std::vector<double> edges;
  std::vector<double> heights = {0.0};
  const double half = 0.5 * plan.step_length;
  for (const auto& s : plan.steps) {
    const double e = s.x - half;
    if (!edges.empty() && e <= edges.back()) {
      throw InvalidArgument("stair treads must advance along +x");
    }
    edges.push_back(e);
    heights.push_back(s.z);
  }
  return Terrain(std::move(edges), std::move(heights));
}

std::size_t Terrain::segment(double x) const {
  return static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) -
                                  edges_.begin());
}

double Terrain::height(double x) const { return heights_[segment(x)]; }

double Terrain::penetration(double x, double z, Eigen::Vector2d* normal) const {
  const std::size_t k = segment(x);
  const double h = heights_[k];
  *normal = Vec2(0.0, 1.0);
  if (z >= h) return 0.0;
  double depth = h - z;
  // A point that entered through a riser is pushed back out horizontally.
  if (k > 0 && heights_[k - 1] < h && z > heights_[k - 1]) {
    const double dh = x - edges_[k - 1];
    if (dh < depth) {
      depth = dh;
      *normal = Vec2(-1.0, 0.0);
    }
  }
  if (k + 1 < heights_.size() && heights_[k + 1] < h && z > heights_[k + 1]) {
    const double dh = edges_[k] - x;
    if (dh < depth) {
      depth = dh;
      *normal = Vec2(1.0, 0.0);
    }
  }
  return depth;
}

// Kinematics ------------------------------------------------------------------

Kinematics kinematics(const PlanarBipedModel& model, const PlanarBipedState& s) {
  Kinematics k;
  const TorsoTerms torso = torso_dynamics(model, s);
  k.hip = Vec2(s.q(0), s.q(1));
  k.head = torso.head;
  k.torso_com = torso.com;
  Vec2 weighted = model.torso_mass * torso.com;
  for (int leg = 0; leg < 2; ++leg) {
    const LegFrame f = leg_frame(model, s, leg);
    k.knee[leg] = f.knee;
    k.ankle[leg] = f.ankle;
    k.heel[leg] = f.heel;
    k.toe[leg] = f.toe;
    k.foot_center[leg] = 0.5 * (f.heel + f.toe);
    const Vec6 v = leg_velocity(s, leg);
    const Jac Jc = point_jacobian(f, k.foot_center[leg], 3);
    k.foot_velocity[leg] = Jc * v;
    weighted += model.thigh_mass * f.com_thigh + model.shank_mass * f.com_shank +
                model.foot_mass * f.com_foot;
  }
  k.com = weighted / model.total_mass();
  return k;
}

PlanarBipedState standing_state(const PlanarBipedModel& model,
                                const JointVector& joints, double pitch,
                                const Terrain& terrain, double x) {
  PlanarBipedState s;
  s.q(0) = x;
  s.q(2) = pitch;
  s.q.tail<kNumJoints>() = joints;
  const Kinematics k = kinematics(model, s);
  double lowest = 0.0;
  bool first = true;
  for (int leg = 0; leg < 2; ++leg) {
    for (const Vec2& p : {k.heel[leg], k.toe[leg]}) {
      const double gap = p.y() - terrain.height(p.x());
      if (first || gap < lowest) lowest = gap;
      first = false;
    }
  }
  s.q(1) = -lowest;
  return s;
}

PlanarBipedState nominal_state(const PlanarBipedModel& model, const Terrain& terrain) {
  return standing_state(model, model.nominal_joints(), 0.0, terrain);
}

// Dynamics --------------------------------------------------------------------

JointVector pd_torque(const JointVector& q_des, const JointVector& q,
                      const JointVector& qd, const JointVector& kp,
                      const JointVector& kd, const JointVector& limits) {
  JointVector tau = kp.cwiseProduct(q_des - q) - kd.cwiseProduct(qd);
  return tau.cwiseMax(-limits).cwiseMin(limits);
}

Mat9 mass_matrix(const PlanarBipedModel& model, const PlanarBipedState& s) {
  const TorsoTerms torso = torso_dynamics(model, s);
  Mat9 M = Mat9::Zero();
  Mat3 bb = Mat3::Zero();
  for (int leg = 0; leg < 2; ++leg) {
    const LegTerms t = leg_dynamics(model, leg_frame(model, s, leg));
    bb += t.mass.topLeftCorner<3, 3>();
    const int o = 3 + 3 * leg;
    M.block<3, 3>(0, o) = t.mass.topRightCorner<3, 3>();
    M.block<3, 3>(o, 0) = t.mass.bottomLeftCorner<3, 3>();
    M.block<3, 3>(o, o) = t.mass.bottomRightCorner<3, 3>();
    M.block<3, 3>(o, o).diagonal().array() += model.armature;
  }
  M.topLeftCorner<3, 3>() = torso.mass + bb;
  return M;
}

double kinetic_energy(const PlanarBipedModel& model, const PlanarBipedState& s) {
  return 0.5 * s.v.dot(mass_matrix(model, s) * s.v);
}

double potential_energy(const PlanarBipedModel& model, const PlanarBipedState& s) {
  const Kinematics k = kinematics(model, s);
  return model.total_mass() * model.gravity * k.com.y();
}

void physics_step(const PlanarBipedModel& model, const Terrain& terrain,
                  PlanarBipedState& state, const JointVector& torque, double dt) {
  if (!(dt > 0.0) || dt > 2e-3) throw InvalidArgument("physics dt must lie in (0, 2e-3]");

  const TorsoTerms torso = torso_dynamics(model, state);
  std::array<LegFrame, 2> frames = {leg_frame(model, state, kLeft),
                                    leg_frame(model, state, kRight)};
  std::array<LegTerms, 2> legs;
  for (int leg = 0; leg < 2; ++leg) {
    const LegFrame& f = frames[leg];
    LegTerms& t = legs[leg];
    t = leg_dynamics(model, f);
    const Vec6 v = leg_velocity(state, leg);

    const Jac Jh = point_jacobian(f, f.heel, 3);
    const Jac Jt = point_jacobian(f, f.toe, 3);
    FootContact& fc = state.feet[leg];
    update_contact(model, terrain, fc.heel, f.heel, Jh * v);
    update_contact(model, terrain, fc.toe, f.toe, Jt * v);
    t.force.noalias() += Jh.transpose() * fc.heel.force;
    t.force.noalias() += Jt.transpose() * fc.toe.force;

    for (int type = 0; type < 3; ++type) {
      const int d = dof_index(leg, type);
      t.force(3 + type) += torque(joint_index(leg, type)) +
                           limit_torque(model, state.q(d), state.v(d),
                                        model.joint_lower[type], model.joint_upper[type]);
    }
  }

  // Solve in coordinates (base, u, w) with q_left = u + w, q_right = u - w.
  // Swapping the legs only flips the sign of w, so mirrored states evolve
  // exactly mirrored.
  const Mat6& L = legs[kLeft].mass;
  const Mat6& R = legs[kRight].mass;
  Mat9 A;
  const Mat3 bb = torso.mass + (L.topLeftCorner<3, 3>() + R.topLeftCorner<3, 3>());
  const Mat3 bu = L.topRightCorner<3, 3>() + R.topRightCorner<3, 3>();
  const Mat3 bw = L.topRightCorner<3, 3>() - R.topRightCorner<3, 3>();
  Mat3 uu = L.bottomRightCorner<3, 3>() + R.bottomRightCorner<3, 3>();
  uu.diagonal().array() += 2.0 * model.armature;
  const Mat3 uw = L.bottomRightCorner<3, 3>() - R.bottomRightCorner<3, 3>();
  A.block<3, 3>(0, 0) = bb;
  A.block<3, 3>(0, 3) = bu;
  A.block<3, 3>(0, 6) = bw;
  A.block<3, 3>(3, 0) = bu.transpose();
  A.block<3, 3>(6, 0) = bw.transpose();
  A.block<3, 3>(3, 3) = uu;
  A.block<3, 3>(6, 6) = uu;
  A.block<3, 3>(3, 6) = uw;
  A.block<3, 3>(6, 3) = uw.transpose();

  DofVector b;
  b.head<3>() = torso.force + (legs[kLeft].force.head<3>() + legs[kRight].force.head<3>());
  b.segment<3>(3) = legs[kLeft].force.tail<3>() + legs[kRight].force.tail<3>();
  b.segment<3>(6) = legs[kLeft].force.tail<3>() - legs[kRight].force.tail<3>();

  const DofVector acc_s = A.llt().solve(b);
  DofVector acc;
  acc.head<3>() = acc_s.head<3>();
  acc.segment<3>(3) = acc_s.segment<3>(3) + acc_s.segment<3>(6);
  acc.segment<3>(6) = acc_s.segment<3>(3) - acc_s.segment<3>(6);

  state.v += dt * acc;
  state.q += dt * state.v;
  state.torque = torque;
  state.time += dt;

  if (!state.v.allFinite() || !state.q.allFinite() ||
      state.v.cwiseAbs().maxCoeff() > model.max_speed) {
    throw SimulationDiverged("planar biped simulation diverged at t = " +
                             format_double(state.time));
  }

  const Vec2 hip(state.q(0), state.q(1));
  const Vec2 head = hip + rot(state.q(2), 0.0, model.torso_length);
  state.self_collision = false;
  for (int leg = 0; leg < 2; ++leg) {
    const LegFrame f = leg_frame(model, state, leg);
    if (segments_intersect(hip, head, f.knee, f.ankle) ||
        segments_intersect(hip, head, f.heel, f.toe)) {
      state.self_collision = true;
    }
  }
}

ControlResult control_step(const PlanarBipedModel& model, const Terrain& terrain,
                           PlanarBipedState& state, const JointVector& action,
                           const ControlConfig& config) {
  if (config.substeps < 1) throw InvalidArgument("substeps must be at least 1");
  ControlResult r;
  const JointVector clipped = action.cwiseMax(-1.0).cwiseMin(1.0);
  r.q_des = model.nominal_joints() + clipped * model.action_scale;
  const JointVector kp = model.joint_array(model.kp);
  const JointVector kd = model.joint_array(model.kd);
  const JointVector lim = model.joint_array(model.torque_limit);
  for (int i = 0; i < config.substeps; ++i) {
    const JointVector tau = pd_torque(r.q_des, state.q.tail<kNumJoints>(),
                                      state.v.tail<kNumJoints>(), kp, kd, lim);
    physics_step(model, terrain, state, tau, config.physics_dt);
    r.mean_torque += tau;
    r.grf_z[0] += state.feet[kLeft].grf_z();
    r.grf_z[1] += state.feet[kRight].grf_z();
  }
  const double inv = 1.0 / config.substeps;
  r.mean_torque *= inv;
  r.grf_z[0] *= inv;
  r.grf_z[1] *= inv;
  return r;
}

PlanarBipedState mirror(const PlanarBipedState& s) {
  PlanarBipedState m = s;
  m.q.segment<3>(3) = s.q.segment<3>(6);
  m.q.segment<3>(6) = s.q.segment<3>(3);
  m.v.segment<3>(3) = s.v.segment<3>(6);
  m.v.segment<3>(6) = s.v.segment<3>(3);
  m.torque.head<3>() = s.torque.tail<3>();
  m.torque.tail<3>() = s.torque.head<3>();
  std::swap(m.feet[0], m.feet[1]);
  return m;
}

}  // namespace steprl::sim
