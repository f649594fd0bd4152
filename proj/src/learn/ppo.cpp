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

#include "steprl/learn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "steprl/common.hpp"

namespace steprl::learn {

void PPOConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must be in (0, 1]");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must be in (0, 1]");
  if (!(lr > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(clip > 0.0)) throw InvalidArgument("clip range must be positive");
  if (epochs < 1 || minibatch < 1 || rollout_len < 1 || rollouts_per_batch < 1) {
    throw InvalidArgument("epochs, minibatch and rollout sizes must be positive");
  }
  if (!(sym_loss_weight >= 0.0)) throw InvalidArgument("symmetry weight must be >= 0");
  if (!(init_std > 0.0)) throw InvalidArgument("initial std must be positive");
  if (!(value_scale > 0.0)) throw InvalidArgument("value scale must be positive");
}

GaeResult gae_advantages(std::span<const double> rewards, std::span<const double> values,
                         std::span<const std::uint8_t> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n) {
    throw InvalidArgument("gae expects T rewards, T dones and T+1 values");
  }
  GaeResult r;
  r.advantages.resize(static_cast<Eigen::Index>(n));
  r.returns.resize(static_cast<Eigen::Index>(n));
  double next = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double live = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * values[i + 1] * live - values[i];
    next = delta + gamma * lambda * live * next;
    r.advantages(static_cast<Eigen::Index>(i)) = next;
    r.returns(static_cast<Eigen::Index>(i)) = next + values[i];
  }
  return r;
}

void normalize_advantages(Eigen::VectorXd& adv) {
  if (adv.size() == 0) return;
  const double mu = adv.mean();
  adv.array() -= mu;
  if (adv.size() < 2) return;
  const double sd = std::sqrt(adv.squaredNorm() / static_cast<double>(adv.size()));
  adv /= sd + 1e-8;
}

Batch Batch::select(std::span<const Eigen::Index> idx) const {
  Batch b;
  const auto n = static_cast<Eigen::Index>(idx.size());
  b.obs.resize(obs.rows(), n);
  b.actions.resize(actions.rows(), n);
  b.log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    b.obs.col(k) = obs.col(i);
    b.actions.col(k) = actions.col(i);
    b.log_probs(k) = log_probs(i);
    b.advantages(k) = advantages(i);
    b.returns(k) = returns(i);
  }
  return b;
}

namespace {

// out = M^T x for a signed permutation M, column-wise.
Eigen::MatrixXd apply_transpose(const sim::SignedPermutation& m, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.row(m.source[i]) += m.sign[i] * x.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

void clip_norm(Eigen::VectorXd& g, double max_norm) {
  if (max_norm <= 0.0) return;
  const double n = g.norm();
  if (n > max_norm) g *= max_norm / n;
}

}  // namespace

LossTerms ppo_loss(const ActorCritic& ac, const Batch& batch, const PPOConfig& config,
                   const sim::MirrorMaps* mirror, Gradients* grad) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw InvalidArgument("empty minibatch");
  const double inv_n = 1.0 / static_cast<double>(n);
  const int act_dim = ac.act_dim();

  Mlp::Cache cache;
  const Eigen::MatrixXd x = ac.normalizer.apply(batch.obs);
  const Eigen::MatrixXd y = ac.actor.forward(x, grad ? &cache : nullptr);
  const Eigen::MatrixXd mu = y.array().tanh();
  const Eigen::VectorXd logp = ac.log_prob(mu, batch.actions);
  const Eigen::ArrayXd var_inv = (-2.0 * ac.log_std).array().exp();

  LossTerms out;
  Eigen::MatrixXd d_mu = Eigen::MatrixXd::Zero(act_dim, n);
  Eigen::VectorXd d_log_std = Eigen::VectorXd::Zero(act_dim);
  double clipped = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const double log_ratio = logp(b) - batch.log_probs(b);
    const double ratio = std::exp(log_ratio);
    const double a = batch.advantages(b);
    const double s1 = ratio * a;
    const double s2 = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip) * a;
    out.policy -= std::min(s1, s2) * inv_n;
    out.approx_kl -= log_ratio * inv_n;
    if (std::abs(ratio - 1.0) > config.clip) clipped += 1.0;
    if (grad && s1 <= s2) {
      // d(-s1)/d(logp) = -a * ratio
      const double g = -a * ratio * inv_n;
      const Eigen::ArrayXd diff = (batch.actions.col(b) - mu.col(b)).array();
      d_mu.col(b) = (g * diff * var_inv).matrix();
      d_log_std.array() += g * (diff.square() * var_inv - 1.0);
    }
  }
  out.clip_fraction = clipped * inv_n;
  out.entropy = ac.log_std.sum() + 0.5 * act_dim * (1.0 + std::log(2.0 * kPi));
  if (grad) d_log_std.array() -= config.entropy_coef;

  Mlp::Cache mcache;
  Eigen::MatrixXd d_mu_m;
  Eigen::MatrixXd mu_m;
  const bool use_sym = mirror && config.sym_loss_weight != 0.0;
  if (use_sym) {
    const Eigen::MatrixXd xm = ac.normalizer.apply(mirror->state.apply_columns(batch.obs));
    mu_m = ac.actor.forward(xm, grad ? &mcache : nullptr).array().tanh();
    const Eigen::MatrixXd diff = mu_m - mirror->action.apply_columns(mu);
    out.sym = config.sym_loss_weight * diff.squaredNorm() * inv_n;
    if (grad) {
      const double c = 2.0 * config.sym_loss_weight * inv_n;
      d_mu_m = c * diff;
      d_mu -= c * apply_transpose(mirror->action, diff);
    }
  }

  Mlp::Cache vcache;
  const Eigen::VectorXd v =
      ac.value_scale * ac.critic.forward(x, grad ? &vcache : nullptr).row(0).transpose();
  const Eigen::VectorXd verr = v - batch.returns;
  out.value = config.value_coef * verr.squaredNorm() * inv_n;

  if (grad) {
    grad->actor = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ac.actor.n_params()) + act_dim);
    Eigen::VectorXd g_net = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ac.actor.n_params()));
    const Eigen::MatrixXd d_y = d_mu.array() * (1.0 - mu.array().square());
    ac.actor.backward(cache, d_y, g_net);
    if (use_sym) {
      const Eigen::MatrixXd d_ym = d_mu_m.array() * (1.0 - mu_m.array().square());
      ac.actor.backward(mcache, d_ym, g_net);
    }
    grad->actor << g_net, d_log_std;
    grad->critic = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ac.critic.n_params()));
    const Eigen::MatrixXd d_v =
        (2.0 * config.value_coef * ac.value_scale * inv_n) * verr.transpose();
    ac.critic.backward(vcache, d_v, grad->critic);
  }
  return out;
}

UpdateStats ppo_update(ActorCritic& ac, Adam& actor_opt, Adam& critic_opt, const Batch& batch,
                       const PPOConfig& config, const sim::MirrorMaps* mirror,
                       std::uint64_t shuffle_seed) {
  config.validate();
  ActorCritic work = ac;
  Adam a_opt = actor_opt;
  Adam c_opt = critic_opt;
  a_opt.lr = config.lr;
  c_opt.lr = config.lr;

  const Eigen::Index n = batch.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(shuffle_seed);
  const auto mb = static_cast<std::size_t>(config.minibatch);

  UpdateStats stats;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::size_t len = std::min(mb, order.size() - start);
      const Batch sub = batch.select(std::span<const Eigen::Index>(order).subspan(start, len));
      Gradients g;
      const LossTerms l = ppo_loss(work, sub, config, mirror, &g);
      const double total = l.actor_total(config.entropy_coef) + l.value;
      if (!std::isfinite(total) || !g.actor.allFinite() || !g.critic.allFinite()) {
        throw AbortIteration("non-finite PPO loss at epoch " + std::to_string(epoch) +
                             " (policy " + std::to_string(l.policy) + ", value " +
                             std::to_string(l.value) + ", sym " + std::to_string(l.sym) + ")");
      }
      clip_norm(g.actor, config.max_grad_norm);
      clip_norm(g.critic, config.max_grad_norm);
      Eigen::VectorXd p = work.actor_params();
      a_opt.step(p, g.actor);
      work.set_actor_params(p);
      c_opt.step(work.critic.params(), g.critic);

      stats.mean.policy += l.policy;
      stats.mean.value += l.value;
      stats.mean.sym += l.sym;
      stats.mean.entropy += l.entropy;
      stats.mean.approx_kl += l.approx_kl;
      stats.mean.clip_fraction += l.clip_fraction;
      ++stats.minibatches;
    }
  }
  const double k = 1.0 / std::max(1, stats.minibatches);
  stats.mean.policy *= k;
  stats.mean.value *= k;
  stats.mean.sym *= k;
  stats.mean.entropy *= k;
  stats.mean.approx_kl *= k;
  stats.mean.clip_fraction *= k;
  ac = std::move(work);
  actor_opt = std::move(a_opt);
  critic_opt = std::move(c_opt);
  return stats;
}

}  // namespace steprl::learn
