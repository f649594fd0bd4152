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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "steprl/learn/nn.hpp"
#include "steprl/sim/mirror.hpp"

namespace steprl::learn {

struct PPOConfig {
  int rollout_len = 400;
  int rollouts_per_batch = 64;
  double lr = 1e-4;
  double clip = 0.2;
  double gamma = 0.99;
  double lambda = 0.95;
  int epochs = 3;
  int minibatch = 4096;
  double sym_loss_weight = 4.0;
  double init_std = 0.3;
  std::vector<int> hidden = {256, 256};
  double value_coef = 1.0;
  double value_scale = 10.0;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.0;  // 0 disables clipping
  bool normalize_observations = true;

  void validate() const;
};

struct GaeResult {
  Eigen::VectorXd advantages;  // raw
  Eigen::VectorXd returns;     // advantages + values
};

/// values has one more entry than rewards (the bootstrap value). A done flag
/// at t stops both bootstrapping and the advantage recursion.
GaeResult gae_advantages(std::span<const double> rewards, std::span<const double> values,
                         std::span<const std::uint8_t> dones, double gamma, double lambda);

/// Zero mean, unit variance (no-op scaling for fewer than two samples).
void normalize_advantages(Eigen::VectorXd& adv);

struct Batch {
  Eigen::MatrixXd obs;      // obs_dim x N
  Eigen::MatrixXd actions;  // act_dim x N
  Eigen::VectorXd log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  Eigen::Index size() const { return obs.cols(); }
  Batch select(std::span<const Eigen::Index> idx) const;
};

struct LossTerms {
  double policy = 0.0;
  double value = 0.0;
  double sym = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;

  /// Objective minimized by the actor update.
  double actor_total(double entropy_coef) const { return policy + sym - entropy_coef * entropy; }
};

struct Gradients {
  Eigen::VectorXd actor;   // actor network params followed by log_std
  Eigen::VectorXd critic;
};

/// Losses on one minibatch and, when `grad` is given, their exact gradients.
/// The symmetry term is skipped entirely when its weight is 0 or `mirror`
/// is null.
LossTerms ppo_loss(const ActorCritic& ac, const Batch& batch, const PPOConfig& config,
                   const sim::MirrorMaps* mirror, Gradients* grad);

struct UpdateStats {
  LossTerms mean;
  int minibatches = 0;
};

/// Clipped-PPO epochs over the batch. Works on copies and commits only when
/// every minibatch loss is finite; otherwise throws AbortIteration and
/// leaves `ac` and the optimizers untouched.
UpdateStats ppo_update(ActorCritic& ac, Adam& actor_opt, Adam& critic_opt, const Batch& batch,
                       const PPOConfig& config, const sim::MirrorMaps* mirror,
                       std::uint64_t shuffle_seed);

}  // namespace steprl::learn
