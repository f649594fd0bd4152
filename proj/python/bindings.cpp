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

#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steprl/common.hpp"
#include "steprl/env.hpp"
#include "steprl/eval.hpp"
#include "steprl/gait.hpp"
#include "steprl/learn/ppo.hpp"
#include "steprl/learn/trainer.hpp"
#include "steprl/plan.hpp"
#include "steprl/reward.hpp"
#include "steprl/task.hpp"

namespace py = pybind11;
using namespace steprl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Footstep-conditioned biped locomotion: plans, gait, rewards and the planar env.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<PlanningFailure>(m, "PlanningFailure", base.ptr());
  py::register_exception<SimulationDiverged>(m, "SimulationDiverged", base.ptr());
  py::register_exception<InfeasiblePlan>(m, "InfeasiblePlan", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());

  // plan
  py::enum_<plan::Side>(m, "Side")
      .value("LEFT", plan::Side::kLeft)
      .value("RIGHT", plan::Side::kRight)
      .value("EITHER", plan::Side::kEither);
  py::enum_<plan::Mode>(m, "Mode")
      .value("FORWARD", plan::Mode::kForward)
      .value("BACKWARD", plan::Mode::kBackward)
      .value("LATERAL", plan::Mode::kLateral)
      .value("TURN", plan::Mode::kTurn)
      .value("STAND", plan::Mode::kStand)
      .value("STAIRS", plan::Mode::kStairs)
      .value("CURVED", plan::Mode::kCurved);
  py::enum_<plan::Direction>(m, "Direction")
      .value("FORWARD", plan::Direction::kForward)
      .value("BACKWARD", plan::Direction::kBackward)
      .value("LATERAL_LEFT", plan::Direction::kLateralLeft)
      .value("LATERAL_RIGHT", plan::Direction::kLateralRight);

  py::class_<plan::Footstep>(m, "Footstep")
      .def(py::init<>())
      .def_readwrite("x", &plan::Footstep::x)
      .def_readwrite("y", &plan::Footstep::y)
      .def_readwrite("z", &plan::Footstep::z)
      .def_readwrite("heading", &plan::Footstep::heading)
      .def_readwrite("side", &plan::Footstep::side)
      .def("__repr__", [](const plan::Footstep& f) {
        std::ostringstream o;
        o << "Footstep(x=" << f.x << ", y=" << f.y << ", z=" << f.z << ", heading=" << f.heading
          << ", side=" << plan::to_string(f.side) << ")";
        return o.str();
      });

  py::class_<plan::FootstepPlan>(m, "FootstepPlan")
      .def(py::init<>())
      .def_readwrite("steps", &plan::FootstepPlan::steps)
      .def_readwrite("mode", &plan::FootstepPlan::mode)
      .def_readwrite("foot_spread", &plan::FootstepPlan::foot_spread)
      .def_readwrite("step_length", &plan::FootstepPlan::step_length)
      .def("is_stand", &plan::FootstepPlan::is_stand)
      .def("__len__", &plan::FootstepPlan::size)
      .def("__eq__", [](const plan::FootstepPlan& a, const plan::FootstepPlan& b) { return a == b; })
      .def("to_text", [](const plan::FootstepPlan& p) {
        std::ostringstream o;
        plan::write_plan(o, p);
        return o.str();
      })
      .def_static("from_text", [](const std::string& s) {
        std::istringstream in(s);
        return plan::read_plan(in);
      });

  py::class_<plan::Pose2>(m, "Pose2")
      .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
           py::arg("theta") = 0.0)
      .def_readwrite("x", &plan::Pose2::x)
      .def_readwrite("y", &plan::Pose2::y)
      .def_readwrite("theta", &plan::Pose2::theta);

  py::class_<plan::OccupancyGrid>(m, "OccupancyGrid")
      .def_static("empty_centered", &plan::OccupancyGrid::empty_centered, py::arg("extent"),
                  py::arg("resolution"))
      .def_property_readonly("resolution", &plan::OccupancyGrid::resolution)
      .def("blocked", &plan::OccupancyGrid::blocked)
      .def("fill_box", &plan::OccupancyGrid::fill_box);

  py::class_<plan::PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("step_length", &plan::PlannerConfig::step_length)
      .def_readwrite("foot_spread", &plan::PlannerConfig::foot_spread)
      .def_readwrite("max_yaw_step", &plan::PlannerConfig::max_yaw_step)
      .def_readwrite("goal_tolerance", &plan::PlannerConfig::goal_tolerance)
      .def_readwrite("goal_yaw_tolerance", &plan::PlannerConfig::goal_yaw_tolerance);

  m.def("gen_line_plan", &plan::gen_line_plan, py::arg("direction"), py::arg("step_length"),
        py::arg("foot_spread"), py::arg("n_steps"));
  m.def("gen_stand", &plan::gen_stand);
  m.def("gen_turn_in_place", &plan::gen_turn_in_place, py::arg("total_yaw"),
        py::arg("yaw_per_step"), py::arg("foot_spread"));
  m.def("apply_stairs", &plan::apply_stairs, py::arg("plan"), py::arg("rise"));
  m.def("plan_curved", &plan::plan_curved, py::arg("grid"), py::arg("start"), py::arg("goal"),
        py::arg("config") = plan::PlannerConfig{});
  m.def("sample_goal", &plan::sample_goal, py::arg("seed"));

  // gait
  py::class_<gait::GaitSchedule>(m, "GaitSchedule")
      .def(py::init<>())
      .def_readwrite("double_support", &gait::GaitSchedule::double_support)
      .def_readwrite("single_support", &gait::GaitSchedule::single_support)
      .def_readwrite("control_dt", &gait::GaitSchedule::control_dt)
      .def_readwrite("standing", &gait::GaitSchedule::standing)
      .def_readwrite("ramp_width", &gait::GaitSchedule::ramp_width)
      .def("cycle", &gait::GaitSchedule::cycle)
      .def_static("hrp5p", &gait::GaitSchedule::hrp5p)
      .def_static("jvrc1", &gait::GaitSchedule::jvrc1);
  py::class_<gait::Indicators>(m, "Indicators")
      .def_readonly("left_grf", &gait::Indicators::left_grf)
      .def_readonly("right_grf", &gait::Indicators::right_grf)
      .def_readonly("left_spd", &gait::Indicators::left_spd)
      .def_readonly("right_spd", &gait::Indicators::right_spd);
  m.def("clock_encode", &gait::clock_encode, py::arg("phase"));
  m.def("indicators", &gait::indicators, py::arg("phase"), py::arg("schedule"));

  // reward
  m.def("step_reward", py::overload_cast<double, double, double>(&reward::step_reward),
        py::arg("d_foot"), py::arg("d_root"), py::arg("k_hit") = 0.8);
  m.def(
      "orientation_reward",
      [](const Eigen::Vector4d& q, const Eigen::Vector4d& q_desired) {
        return reward::orientation_reward(Eigen::Quaterniond(q(0), q(1), q(2), q(3)),
                                          Eigen::Quaterniond(q_desired(0), q_desired(1),
                                                             q_desired(2), q_desired(3)));
      },
      py::arg("q"), py::arg("q_desired"), "Quaternions as (w, x, y, z).");

  // task
  m.def(
      "curriculum_magnitude",
      [](long itr) {
        task::CurriculumState s;
        s.itr = itr;
        return task::curriculum_magnitude(s);
      },
      py::arg("itr"));

  // env
  py::class_<env::EnvConfig>(m, "EnvConfig")
      .def(py::init([] {
        env::EnvConfig c;
        c.finalize();
        return c;
      }))
      .def_readwrite("step_length", &env::EnvConfig::step_length)
      .def_readwrite("foot_spread", &env::EnvConfig::foot_spread)
      .def_readwrite("plan_steps", &env::EnvConfig::plan_steps)
      .def("finalize", &env::EnvConfig::finalize);
  py::class_<env::StepResult>(m, "StepResult")
      .def_readonly("observation", &env::StepResult::observation)
      .def_readonly("reward", &env::StepResult::reward)
      .def_readonly("scored", &env::StepResult::scored)
      .def_property_readonly("termination", [](const env::StepResult& r) {
        return std::string(task::to_string(r.termination));
      });
  py::class_<env::WalkEnv>(m, "WalkEnv")
      .def(py::init<const env::EnvConfig&, plan::FootstepPlan, std::uint64_t>(),
           py::arg("config"), py::arg("plan"), py::arg("seed"))
      .def("reset", &env::WalkEnv::reset)
      .def("step", &env::WalkEnv::step, py::arg("action"))
      .def_property_readonly("time", &env::WalkEnv::time)
      .def_property_readonly("forward_displacement", &env::WalkEnv::forward_displacement)
      .def_readonly_static("obs_dim", &env::WalkEnv::kObsDim)
      .def_readonly_static("act_dim", &env::WalkEnv::kActDim);

  // learn
  m.def(
      "gae",
      [](const std::vector<double>& r, const std::vector<double>& v,
         const std::vector<std::uint8_t>& done, double gamma, double lambda) {
        const auto g = learn::gae_advantages(r, v, done, gamma, lambda);
        return py::make_tuple(g.advantages, g.returns);
      },
      py::arg("rewards"), py::arg("values"), py::arg("dones"), py::arg("gamma"),
      py::arg("lam"), "Returns (advantages, returns); values has one extra bootstrap entry.");

  // eval
  m.def(
      "replay_scripted_scores",
      [](const plan::FootstepPlan& p, const gait::GaitSchedule& s) {
        task::ScoreConfig sc;
        sc.target_delay = s.single_support;
        const auto steps = eval::replay_scripted(p, s, sc);
        std::vector<double> totals;
        totals.reserve(steps.size());
        for (const auto& st : steps) totals.push_back(st.breakdown.total);
        return py::make_tuple(eval::count_scored(steps), totals);
      },
      py::arg("plan"), py::arg("schedule"),
      "Replays the scripted walker; returns (steps scored, per-step reward totals).");
}
