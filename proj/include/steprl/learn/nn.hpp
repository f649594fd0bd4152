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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "steprl/sim/mirror.hpp"

namespace steprl::learn {

/// Fully connected ReLU network with a linear output layer. All weights and
/// biases live in one flat vector: for each layer W (out x in, column-major)
/// followed by b.
class Mlp {
 public:
  Mlp() = default;
  /// sizes = {in, hidden..., out}. Hidden layers use He-normal weights; the
  /// output layer is scaled by `output_gain`. Biases start at zero.
  Mlp(std::vector<int> sizes, std::mt19937_64& rng, double output_gain = 1.0);

  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // [0] = input, [L] = output
  };

  int n_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t n_params() const { return static_cast<std::size_t>(params_.size()); }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

  /// X is (in x batch). Fills `cache` when given.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const;
  /// Adds dLoss/dparams to `grad` given dLoss/dY for the cached batch.
  void backward(const Cache& cache, const Eigen::MatrixXd& dy, Eigen::VectorXd& grad) const;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  Eigen::VectorXd params_;
};

/// Running mean/variance of observations. `apply` uses the frozen
/// (shift, scale) pair set by `refresh`, which optionally symmetrizes the
/// statistics under the state mirror map so normalization commutes with it.
struct ObsNormalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  double count = 0.0;
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;
  double min_std = 1e-2;
  double clip = 10.0;

  static ObsNormalizer identity(int dim);
  void update(const Eigen::MatrixXd& batch);
  void refresh(const sim::SignedPermutation* mirror);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct Adam {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
};

/// Gaussian policy (tanh-squashed mean, state-independent log-std) and a
/// value function sharing the observation normalizer.
struct ActorCritic {
  ObsNormalizer normalizer;
  Mlp actor;
  Eigen::VectorXd log_std;
  Mlp critic;
  double value_scale = 1.0;  // V(s) = value_scale * critic(s)

  static ActorCritic create(int obs_dim, int act_dim, std::vector<int> hidden,
                            double init_std, std::uint64_t seed, double value_scale = 1.0);

  int obs_dim() const { return actor.input_dim(); }
  int act_dim() const { return actor.output_dim(); }

  Eigen::MatrixXd mean(const Eigen::MatrixXd& obs) const;
  Eigen::VectorXd value(const Eigen::MatrixXd& obs) const;
  /// Sum over action dims of the diagonal Gaussian log-density.
  Eigen::VectorXd log_prob(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& actions) const;
  /// Samples a ~ N(mean, diag(exp(log_std))^2); returns the mean when
  /// `deterministic`.
  Eigen::VectorXd sample(const Eigen::VectorXd& mean, std::mt19937_64& rng,
                         bool deterministic = false) const;

  /// Actor parameters followed by log_std.
  Eigen::VectorXd actor_params() const;
  void set_actor_params(const Eigen::VectorXd& p);
};

}  // namespace steprl::learn
