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

// Command-line front end: training, evaluation, plan generation, robustness
// sweeps and log/report emission.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "steprl/common.hpp"
#include "steprl/eval.hpp"
#include "steprl/learn/trainer.hpp"
#include "steprl/plan.hpp"

namespace fs = std::filesystem;
using namespace steprl;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string checkpoint;
  std::string out = "out";
};

eval::Config load_config(const Globals& g) {
  return g.config_path.empty() ? eval::Config{} : eval::Config::load(g.config_path);
}

std::ofstream open_out(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  const auto path = fs::path(g.out) / name;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path.string());
  return f;
}

void manifest(const Globals& g, const eval::Config& c, const std::string& cmd,
              std::vector<std::pair<std::string, std::string>> extra = {}) {
  auto f = open_out(g, "manifest.csv");
  eval::Manifest m;
  m.command = cmd;
  m.config_hash = c.hash();
  m.seed = g.seed;
  m.extra = std::move(extra);
  if (!g.checkpoint.empty()) m.extra.emplace_back("checkpoint", g.checkpoint);
  eval::write_manifest(f, m);
}

learn::ActorCritic require_policy(const Globals& g) {
  if (g.checkpoint.empty()) throw UsageError("--checkpoint is required");
  if (!fs::exists(g.checkpoint)) throw UsageError("checkpoint not found: " + g.checkpoint);
  return learn::load_policy(g.checkpoint);
}

learn::TrainConfig train_cfg(const Globals& g, const eval::Config& c) {
  auto t = eval::train_config(c);
  if (g.seed_set) t.seed = g.seed;
  return t;
}

void cmd_train(const Globals& g, int iterations, int checkpoint_every) {
  const auto c = load_config(g);
  auto t = train_cfg(g, c);
  if (iterations >= 0) t.iterations = iterations;
  learn::Trainer trainer(t);
  const auto ckpt = (fs::path(g.out) / "checkpoint.bin").string();
  bool resumed = false;
  if (!g.checkpoint.empty()) {
    if (!fs::exists(g.checkpoint)) throw UsageError("checkpoint not found: " + g.checkpoint);
    trainer.load_checkpoint(g.checkpoint);
    resumed = true;
  }
  fs::create_directories(g.out);
  const auto curve_path = fs::path(g.out) / "training_curve.csv";
  std::ofstream curve(curve_path, resumed ? std::ios::app : std::ios::trunc);
  if (!curve) throw UsageError("cannot write " + curve_path.string());
  if (!resumed || fs::file_size(curve_path) == 0) learn::write_curve_header(curve);
  manifest(g, c, "train", {{"iterations", std::to_string(t.iterations)},
                           {"workers", std::to_string(t.n_workers)},
                           {"train_seed", std::to_string(t.seed)}});
  while (trainer.iteration() < t.iterations) {
    const auto s = trainer.iterate();
    learn::write_curve_row(curve, s);
    curve.flush();
    std::printf("iter %ld return %.3f length %.2fs displacement %.3fm%s\n", s.iteration,
                s.mean_return, s.mean_length, s.mean_displacement, s.aborted ? " (aborted)" : "");
    std::fflush(stdout);
    if (checkpoint_every > 0 && trainer.iteration() % checkpoint_every == 0) {
      trainer.save_checkpoint(ckpt);
    }
  }
  trainer.save_checkpoint(ckpt);
}

eval::SweepSetup sweep_setup(const Globals& g, const eval::Config& c,
                             const eval::EvalSettings& s) {
  const auto t = train_cfg(g, c);
  eval::SweepSetup setup;
  setup.env = t.env;
  setup.env.height_noise_site = s.noise_site;
  setup.plan = eval::evaluation_plan(s.plan, t.env, s.stair_height);
  setup.n_trials = s.n_trials;
  setup.duration = s.duration;
  setup.n_workers = s.n_workers;
  setup.seed = g.seed;
  return setup;
}

void cmd_eval(const Globals& g) {
  const auto c = load_config(g);
  const auto policy = require_policy(g);
  const auto s = eval::eval_settings(c);
  const auto rep = eval::run_trials(policy, sweep_setup(g, c, s), "clean", 0.0);
  auto f = open_out(g, "eval.csv");
  eval::write_reports(f, {rep});
  manifest(g, c, "eval", {{"plan", s.plan}});
  std::printf("success %.3f mean length %.2fs over %d trials\n", rep.success_rate,
              rep.mean_episode_length, rep.n_trials);
}

void cmd_sweep(const Globals& g, bool terrain) {
  const auto c = load_config(g);
  const auto policy = require_policy(g);
  const auto s = eval::eval_settings(c);
  const auto setup = sweep_setup(g, c, s);
  const auto reps = terrain ? eval::terrain_noise_sweep(policy, setup, s.terrain_levels)
                            : eval::obs_noise_sweep(policy, setup, s.obs_levels);
  auto f = open_out(g, terrain ? "sweep_terrain.csv" : "sweep_obs.csv");
  eval::write_reports(f, reps);
  manifest(g, c, terrain ? "sweep-terrain" : "sweep-obs", {{"plan", s.plan}});
  for (const auto& r : reps) {
    std::printf("level %g success %.3f mean length %.2fs\n", r.noise_level, r.success_rate,
                r.mean_episode_length);
  }
}

void cmd_grf_log(const Globals& g, const std::string& kind, double duration) {
  const auto c = load_config(g);
  const auto policy = require_policy(g);
  const auto s = eval::eval_settings(c);
  const auto t = train_cfg(g, c);
  const auto plan = eval::evaluation_plan(kind.empty() ? "forward" : kind, t.env, s.stair_height);
  const auto rows = eval::grf_log(policy, t.env, plan, duration, g.seed);
  auto f = open_out(g, "grf_log.csv");
  eval::write_log(f, rows);
  manifest(g, c, "grf-log", {{"duration", format_double(duration)}});
}

void cmd_report(const Globals& g, const std::string& log_path) {
  const auto c = load_config(g);
  std::ifstream in(log_path);
  if (!in) throw UsageError("cannot open log: " + log_path);
  const auto rows = eval::read_log(in);
  const auto t = train_cfg(g, c);
  const auto r = eval::report_peaks(rows, t.env.model);
  auto f = open_out(g, "peaks.csv");
  eval::write_peaks(f, r);
  manifest(g, c, "report", {{"log", log_path}});
}

struct PlanArgs {
  std::string kind = "forward";
  int steps = 10;
  double step_length = 0.25;
  double spread = 0.12;
  double rise = 0.05;
  double yaw = 1.5707963267948966;
  double yaw_step = 0.39269908169872414;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double goal_yaw = 0.0;
  bool sample_goal = false;
  std::string grid;
};

void cmd_plan(const Globals& g, const PlanArgs& a) {
  const auto c = load_config(g);
  plan::FootstepPlan p;
  using plan::Direction;
  if (a.kind == "forward") {
    p = plan::gen_line_plan(Direction::kForward, a.step_length, a.spread, a.steps);
  } else if (a.kind == "backward") {
    p = plan::gen_line_plan(Direction::kBackward, a.step_length, a.spread, a.steps);
  } else if (a.kind == "lateral-left") {
    p = plan::gen_line_plan(Direction::kLateralLeft, a.step_length, a.spread, a.steps);
  } else if (a.kind == "lateral-right") {
    p = plan::gen_line_plan(Direction::kLateralRight, a.step_length, a.spread, a.steps);
  } else if (a.kind == "stand") {
    p = plan::gen_stand();
  } else if (a.kind == "turn") {
    p = plan::gen_turn_in_place(a.yaw, a.yaw < 0 ? -std::abs(a.yaw_step) : std::abs(a.yaw_step),
                                a.spread);
  } else if (a.kind == "stairs") {
    p = plan::apply_stairs(
        plan::gen_line_plan(Direction::kForward, a.step_length, a.spread, a.steps), a.rise);
  } else if (a.kind == "curved") {
    const auto grid = a.grid.empty() ? plan::OccupancyGrid::empty_centered(4.0, 0.05)
                                     : plan::load_grid(a.grid);
    const plan::Pose2 goal = a.sample_goal ? plan::sample_goal(g.seed)
                                           : plan::Pose2{a.goal_x, a.goal_y, a.goal_yaw};
    p = plan::plan_curved(grid, plan::Pose2{0.0, 0.0, 0.0}, goal);
  } else {
    throw UsageError("unknown plan kind: " + a.kind);
  }
  {
    auto f = open_out(g, "plan.csv");
    f << "index,x,y,z,heading,side\n";
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      const auto& s = p.steps[i];
      f << i << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << format_double(s.z) << ',' << format_double(s.heading) << ','
        << plan::to_string(s.side) << '\n';
    }
  }
  plan::save_plan((fs::path(g.out) / "plan.txt").string(), p);
  manifest(g, c, "plan", {{"kind", a.kind}});
  std::printf("%zu steps written to %s\n", p.steps.size(), g.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steprl: footstep-conditioned biped walking with PPO"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", g.config_path, "Configuration file (key = value, [sections])");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { g.seed = s; g.seed_set = true; }, "Master seed");
    sub->add_option("--checkpoint", g.checkpoint, "Checkpoint file");
    sub->add_option("--out", g.out, "Output directory")->capture_default_str();
  };

  int iterations = -1;
  int checkpoint_every = 10;
  auto* train = app.add_subcommand("train", "Train a walking policy with PPO");
  add_globals(train);
  train->add_option("--iterations", iterations, "Override train.iterations");
  train->add_option("--checkpoint-every", checkpoint_every, "Iterations between checkpoints");

  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint without noise");
  add_globals(ev);

  PlanArgs pa;
  auto* pl = app.add_subcommand("plan", "Generate a footstep plan");
  add_globals(pl);
  pl->add_option("--kind", pa.kind,
                 "forward|backward|lateral-left|lateral-right|stand|turn|stairs|curved")
      ->capture_default_str();
  pl->add_option("--steps", pa.steps)->capture_default_str();
  pl->add_option("--step-length", pa.step_length)->capture_default_str();
  pl->add_option("--spread", pa.spread)->capture_default_str();
  pl->add_option("--rise", pa.rise)->capture_default_str();
  pl->add_option("--yaw", pa.yaw, "Total yaw for turn plans")->capture_default_str();
  pl->add_option("--yaw-step", pa.yaw_step)->capture_default_str();
  pl->add_option("--goal-x", pa.goal_x);
  pl->add_option("--goal-y", pa.goal_y);
  pl->add_option("--goal-yaw", pa.goal_yaw);
  pl->add_flag("--sample-goal", pa.sample_goal, "Draw the goal from the seed");
  pl->add_option("--grid", pa.grid, "Occupancy grid file for curved plans");

  auto* st = app.add_subcommand("sweep-terrain", "Step-height noise robustness sweep");
  add_globals(st);
  auto* so = app.add_subcommand("sweep-obs", "Joint observation noise robustness sweep");
  add_globals(so);

  std::string log_plan;
  double duration = 10.0;
  auto* gl = app.add_subcommand("grf-log", "Log joints, torques and ground reaction forces");
  add_globals(gl);
  gl->add_option("--plan", log_plan, "forward|backward|stand|stairs");
  gl->add_option("--duration", duration)->capture_default_str();

  std::string log_path;
  auto* rp = app.add_subcommand("report", "Peak torque/velocity report from a log");
  add_globals(rp);
  rp->add_option("--log", log_path, "Log CSV produced by grf-log")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) cmd_train(g, iterations, checkpoint_every);
    if (*ev) cmd_eval(g);
    if (*pl) cmd_plan(g, pa);
    if (*st) cmd_sweep(g, true);
    if (*so) cmd_sweep(g, false);
    if (*gl) cmd_grf_log(g, log_plan, duration);
    if (*rp) cmd_report(g, log_path);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
