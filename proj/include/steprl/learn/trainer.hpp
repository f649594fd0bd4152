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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steprl/env.hpp"
#include "steprl/learn/nn.hpp"
#include "steprl/learn/ppo.hpp"
#include "steprl/sim/mirror.hpp"
#include "steprl/task.hpp"

namespace steprl::learn {

/// One episode fragment collected under a fixed policy snapshot.
struct Rollout {
  Eigen::MatrixXd obs;       // obs_dim x T
  Eigen::MatrixXd actions;   // act_dim x T
  Eigen::VectorXd log_probs; // T
  Eigen::VectorXd rewards;   // T
  Eigen::VectorXd values;    // T + 1; the last entry bootstraps (0 if terminal)
  std::vector<std::uint8_t> dones;  // T
  task::Termination cause = task::Termination::kContinue;
  bool diverged = false;
  double episode_return = 0.0;
  double forward_displacement = 0.0;
  double duration = 0.0;  // seconds
  std::size_t steps_scored = 0;

  int length() const { return static_cast<int>(rewards.size()); }
};

struct RolloutBuffer {
  std::vector<Rollout> rollouts;

  std::size_t transitions() const;
  /// Concatenates rollouts; advantages are computed per rollout with GAE and
  /// normalized over the whole batch.
  Batch to_batch(double gamma, double lambda) const;
};

/// Builds the environment for (training iteration, rollout index, seed).
using EnvFactory = std::function<env::WalkEnv(long iteration, int index, std::uint64_t seed)>;

/// Factory drawing plans from the configured mode mix and curriculum.
EnvFactory training_env_factory(const env::EnvConfig& config);

struct CollectConfig {
  int rollouts = 64;
  int rollout_len = 400;
  int n_workers = 1;
  bool deterministic = false;  // act with the policy mean
};

/// Seed of rollout `index` at `iteration`; independent of the worker count.
std::uint64_t rollout_seed(std::uint64_t seed, long iteration, int index);

/// Runs one episode (up to max_len steps) and records it.
Rollout run_rollout(const ActorCritic& policy, env::WalkEnv& env, int max_len,
                    std::uint64_t seed, bool deterministic);

RolloutBuffer collect_rollouts(const ActorCritic& policy, const EnvFactory& factory,
                               const CollectConfig& config, long iteration, std::uint64_t seed);

struct TrainConfig {
  PPOConfig ppo;
  env::EnvConfig env;
  int iterations = 500;
  int n_workers = 1;
  std::uint64_t seed = 1;
};

struct IterationStats {
  long iteration = 0;
  double mean_return = 0.0;
  double mean_length = 0.0;        // seconds
  double mean_displacement = 0.0;  // metres
  double mean_steps_scored = 0.0;
  int diverged = 0;
  bool aborted = false;
  LossTerms loss;
  double seconds = 0.0;
};

void write_curve_header(std::ostream& out);
void write_curve_row(std::ostream& out, const IterationStats& s);

class Trainer {
 public:
  explicit Trainer(TrainConfig config);

  /// Collects a batch with the current policy, updates it, and returns the
  /// batch statistics. A non-finite loss skips the update (aborted = true).
  IterationStats iterate();

  long iteration() const { return iteration_; }
  const ActorCritic& policy() const { return ac_; }
  const TrainConfig& config() const { return config_; }
  void set_env_factory(EnvFactory f) { factory_ = std::move(f); }

  void save_checkpoint(const std::string& path) const;
  /// Restores parameters, optimizer state, normalizer and iteration counter.
  void load_checkpoint(const std::string& path);

 private:
  TrainConfig config_;
  ActorCritic ac_;
  Adam actor_opt_;
  Adam critic_opt_;
  sim::MirrorMaps mirror_;
  EnvFactory factory_;
  long iteration_ = 0;
};

/// Policy-only view of a checkpoint for evaluation.
ActorCritic load_policy(const std::string& path);

}  // namespace steprl::learn
