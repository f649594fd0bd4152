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
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steprl/env.hpp"
#include "steprl/gait.hpp"
#include "steprl/learn/nn.hpp"
#include "steprl/learn/trainer.hpp"
#include "steprl/plan.hpp"
#include "steprl/reward.hpp"
#include "steprl/sim/planar_biped.hpp"
#include "steprl/sim/scripted_walk.hpp"
#include "steprl/task.hpp"

namespace steprl::eval {

/// Line-oriented `key = value` configuration with [sections]. Keys are
/// addressed as "section.key".
class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

  /// Sorted "key = value" lines; the hash is taken over this text.
  std::string canonical() const;
  std::uint64_t hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Builds the training configuration; unknown keys raise UsageError.
learn::TrainConfig train_config(const Config& c);

struct EvalSettings {
  int n_trials = 100;
  double duration = 10.0;  // seconds
  int n_workers = 1;
  std::string plan = "stairs";  // forward | backward | stand | stairs
  double stair_height = 0.05;
  env::NoiseSite noise_site = env::NoiseSite::kObserved;
  std::vector<double> terrain_levels = {0.0, 0.01, 0.02, 0.03, 0.04};
  std::vector<double> obs_levels = {0.0, 1.0, 2.0, 3.0, 4.0};
};

EvalSettings eval_settings(const Config& c);

/// Evaluation plan named by `kind` with the environment's step geometry.
plan::FootstepPlan evaluation_plan(const std::string& kind, const env::EnvConfig& env,
                                   double stair_height);

// Robustness trials -------------------------------------------------------------

struct TrialReport {
  std::string sweep;  // "terrain" or "obs"
  double noise_level = 0.0;
  int n_trials = 0;
  double success_rate = 0.0;
  double mean_episode_length = 0.0;  // seconds
  std::vector<std::string> causes;   // per trial: continue/fall/self_collision/timeout/diverged

  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

struct SweepSetup {
  env::EnvConfig env;
  plan::FootstepPlan plan;
  int n_trials = 100;
  double duration = 10.0;
  int n_workers = 1;
  std::uint64_t seed = 1;
};

/// Runs n_trials deterministic-policy episodes; trial k uses the same seed at
/// every noise level. Success means no fall or self-collision (or
/// divergence) within the duration.
TrialReport run_trials(const learn::ActorCritic& policy, const SweepSetup& setup,
                       const std::string& sweep, double level);

/// Step-height noise of +-l (metres) on observed (or physical) step z.
std::vector<TrialReport> terrain_noise_sweep(const learn::ActorCritic& policy,
                                             const SweepSetup& setup,
                                             std::span<const double> levels);
/// Joint position/velocity observation noise of +-l degrees.
std::vector<TrialReport> obs_noise_sweep(const learn::ActorCritic& policy,
                                         const SweepSetup& setup,
                                         std::span<const double> levels);

void write_reports(std::ostream& out, const std::vector<TrialReport>& reports);
std::vector<TrialReport> read_reports(std::istream& in);

// GRF / trajectory logs ---------------------------------------------------------

struct LogRow {
  double t = 0.0;
  sim::JointVector q = sim::JointVector::Zero();
  sim::JointVector qd = sim::JointVector::Zero();
  sim::JointVector tau = sim::JointVector::Zero();
  double grf_left = 0.0;
  double grf_right = 0.0;
};

/// Rolls out the policy mean on `plan` for up to `duration` seconds (stops
/// early on a fall) and logs every control step.
std::vector<LogRow> grf_log(const learn::ActorCritic& policy, const env::EnvConfig& env,
                            const plan::FootstepPlan& plan, double duration,
                            std::uint64_t seed);

void write_log(std::ostream& out, const std::vector<LogRow>& rows);
std::vector<LogRow> read_log(std::istream& in);

struct PeakReport {
  std::array<double, sim::kNumJoints> peak_torque{};
  std::array<double, sim::kNumJoints> peak_velocity{};
  std::array<double, sim::kNumJoints> torque_limit{};
  std::array<double, sim::kNumJoints> velocity_limit{};
  std::array<bool, sim::kNumJoints> torque_exceeded{};
  std::array<bool, sim::kNumJoints> velocity_exceeded{};
};

/// Per-joint maxima of |tau| and |qd|. Throws UsageError on an empty log.
PeakReport report_peaks(const std::vector<LogRow>& log, const sim::PlanarBipedModel& model);
void write_peaks(std::ostream& out, const PeakReport& r);

/// Names of the joints in log/report order.
const std::array<const char*, sim::kNumJoints>& joint_names();

// Scripted replay ----------------------------------------------------------------

struct ScriptedStep {
  double t = 0.0;
  std::size_t target_index = 0;  // index of T1 when the reward was computed
  bool scored = false;
  reward::RewardBreakdown breakdown;
};

/// Runs the kinematic walker through scoring and the reward. Contact feet
/// share the body weight equally; the root stays upright, so the posture
/// and smoothness terms sit at their maxima. Stand plans use the standing
/// schedule.
std::vector<ScriptedStep> replay_scripted(const plan::FootstepPlan& plan,
                                          const gait::GaitSchedule& schedule,
                                          const task::ScoreConfig& score = {},
                                          const reward::RewardWeights& weights = {},
                                          const sim::ScriptedWalkConfig& walk = {});

std::size_t count_scored(const std::vector<ScriptedStep>& steps);

// Run manifest ------------------------------------------------------------------

struct Manifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> extra;
};

void write_manifest(std::ostream& out, const Manifest& m);

}  // namespace steprl::eval
