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
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "steprl/common.hpp"
#include "steprl/env.hpp"
#include "steprl/learn/nn.hpp"
#include "steprl/learn/ppo.hpp"
#include "steprl/learn/trainer.hpp"
#include "steprl/sim/mirror.hpp"

using namespace steprl;
using namespace steprl::learn;
using oracle::actor_objective;
using oracle::random_batch;
using oracle::toy_mirror;
using oracle::vanilla_update;

namespace {

double rel_err(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-7});
}

TrainConfig tiny_train_config() {
  TrainConfig c;
  c.ppo.rollout_len = 40;
  c.ppo.rollouts_per_batch = 4;
  c.ppo.minibatch = 64;
  c.ppo.epochs = 2;
  c.ppo.hidden = {16, 16};
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("gae limits") {
  std::vector<double> r = {1.0, 2.0, 3.0};
  std::vector<double> v = {0.0, 0.0, 0.0, 0.0};
  std::vector<std::uint8_t> d = {0, 0, 0};
  auto g = gae_advantages(r, v, d, 1.0, 1.0);
  CHECK(g.advantages(0) == 6.0);
  CHECK(g.advantages(1) == 5.0);
  CHECK(g.advantages(2) == 3.0);
  const std::vector<double> one_r = {1.0}, one_v = {0.0, 0.0};
  const std::vector<std::uint8_t> one_d = {0};
  g = gae_advantages(one_r, one_v, one_d, 0.99, 0.95);
  CHECK(g.advantages(0) == 1.0);
  CHECK(g.returns(0) == 1.0);
  CHECK_THROWS_AS(gae_advantages(r, r, d, 0.99, 0.95), InvalidArgument);
}

TEST_CASE("gae matches the brute-force sum") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + static_cast<int>(u(rng) * 40);
    std::vector<double> r(T), v(T + 1);
    std::vector<std::uint8_t> d(T);
    for (auto& x : r) x = n(rng);
    for (auto& x : v) x = n(rng);
    for (auto& x : d) x = u(rng) < 0.1;
    const double gamma = 0.9 + 0.1 * u(rng), lambda = 0.8 + 0.2 * u(rng);
    const auto g = gae_advantages(r, v, d, gamma, lambda);
    const auto bf = oracle::brute_force_gae(r, v, d, gamma, lambda);
    for (int t = 0; t < T; ++t) {
      CHECK(std::abs(g.advantages(t) - bf[static_cast<std::size_t>(t)]) <= 1e-10);
      CHECK(g.returns(t) == doctest::Approx(bf[static_cast<std::size_t>(t)] + v[static_cast<std::size_t>(t)]));
    }
  }
}

TEST_CASE("advantage normalization") {
  Eigen::VectorXd a(5);
  a << 1, 2, 3, 4, 10;
  normalize_advantages(a);
  CHECK(std::abs(a.mean()) < 1e-12);
  CHECK(std::sqrt(a.squaredNorm() / 5) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mlp gradient matches central differences") {
  std::mt19937_64 rng(2);
  Mlp net({3, 4, 4, 2}, rng);
  // Non-zero biases keep every pre-activation away from the ReLU kink.
  std::normal_distribution<double> g0(0.0, 0.5);
  for (auto& p : net.params()) p = g0(rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 5);
  Eigen::MatrixXd w = Eigen::MatrixXd::Random(2, 5);
  auto f = [&](const Mlp& m) { return (m.forward(x).array() * w.array()).sum(); };
  Mlp::Cache c;
  net.forward(x, &c);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.n_params()));
  net.backward(c, w, g);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    Mlp p = net, m = net;
    p.params()(i) += 1e-6;
    m.params()(i) -= 1e-6;
    CHECK(rel_err(g(i), (f(p) - f(m)) / 2e-6) < 1e-5);
  }
}

TEST_CASE("policy and value gradients match central differences") {
  auto ac = ActorCritic::create(19, 2, {4}, 0.3, 5, 2.0);
  // Larger output weights so the tanh and symmetry terms are exercised.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 0.5);
  for (auto& p : ac.actor.params()) p = g(rng);
  const Batch b = random_batch(ac, 16, 9, 0.05);
  PPOConfig cfg;
  cfg.sym_loss_weight = 4.0;
  cfg.entropy_coef = 0.01;
  Gradients grad;
  ppo_loss(ac, b, cfg, &toy_mirror(), &grad);
  const Eigen::VectorXd p0 = ac.actor_params();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p0.size(); ++i) {
    const double h = 1e-6;
    Eigen::VectorXd p = p0;
    p(i) += h;
    ac.set_actor_params(p);
    const double fp = actor_objective(ac, b, cfg, &toy_mirror());
    p(i) -= 2 * h;
    ac.set_actor_params(p);
    const double fm = actor_objective(ac, b, cfg, &toy_mirror());
    ac.set_actor_params(p0);
    worst = std::max(worst, rel_err(grad.actor(i), (fp - fm) / (2 * h)));
  }
  CHECK(worst < 1e-4);
  const Eigen::VectorXd c0 = ac.critic.params();
  worst = 0.0;
  for (Eigen::Index i = 0; i < c0.size(); ++i) {
    const double h = 1e-6;
    ac.critic.params()(i) = c0(i) + h;
    const double fp = ppo_loss(ac, b, cfg, nullptr, nullptr).value;
    ac.critic.params()(i) = c0(i) - h;
    const double fm = ppo_loss(ac, b, cfg, nullptr, nullptr).value;
    ac.critic.params()(i) = c0(i);
    worst = std::max(worst, rel_err(grad.critic(i), (fp - fm) / (2 * h)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("clipped samples contribute no gradient") {
  auto ac = ActorCritic::create(3, 1, {4}, 0.3, 1);
  Batch b;
  b.obs = Eigen::MatrixXd::Random(3, 2);
  const Eigen::MatrixXd mu = ac.mean(b.obs);
  b.actions = mu.array() + 0.2;
  const Eigen::VectorXd lp = ac.log_prob(mu, b.actions);
  // Sample 0: ratio 1.5 with A = +1 (clipped). Sample 1: ratio 0.9, A = +1.
  b.log_probs.resize(2);
  b.log_probs << lp(0) - std::log(1.5), lp(1) - std::log(0.9);
  b.advantages = Eigen::Vector2d(1.0, 1.0);
  b.returns = Eigen::Vector2d::Zero();
  PPOConfig cfg;
  Gradients both;
  const auto l = ppo_loss(ac, b, cfg, nullptr, &both);
  CHECK(l.policy == doctest::Approx(-(1.2 + 0.9) / 2));
  CHECK(l.clip_fraction == 0.5);
  const std::array<Eigen::Index, 1> only = {1};
  Gradients single;
  ppo_loss(ac, b.select(only), cfg, nullptr, &single);
  CHECK((both.actor - 0.5 * single.actor).norm() < 1e-14);

  // Negative advantage below the lower bound is clipped as well.
  b.log_probs << lp(0) - std::log(0.5), lp(1) - std::log(0.9);
  b.advantages = Eigen::Vector2d(-1.0, 1.0);
  Gradients neg;
  const auto ln = ppo_loss(ac, b, cfg, nullptr, &neg);
  CHECK(ln.policy == doctest::Approx(-(-0.8 + 0.9) / 2));
  CHECK((neg.actor - 0.5 * single.actor).norm() < 1e-14);
}

TEST_CASE("symmetry loss vanishes for an equivariant policy") {
  auto ac = ActorCritic::create(19, 2, {}, 0.3, 4);
  const auto& m = toy_mirror();
  const Eigen::MatrixXd Ms = m.state.matrix(), Ma = m.action.matrix();
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 19);
  const Eigen::MatrixXd W = 0.5 * (A + Ma * A * Ms);
  ac.actor.params().head(38) = W.reshaped();
  ac.actor.params().tail(2).setConstant(0.3);
  const Batch b = random_batch(ac, 32, 2, 0.0);
  PPOConfig cfg;
  const auto l = ppo_loss(ac, b, cfg, &m, nullptr);
  CHECK(l.sym < 1e-28);
  auto bumped = ac;
  bumped.actor.params()(0) += 0.5;
  CHECK(ppo_loss(bumped, b, cfg, &m, nullptr).sym > 1e-4);
}

TEST_CASE("zero symmetry weight is vanilla PPO bit for bit") {
  auto ac = ActorCritic::create(19, 2, {8, 8}, 0.3, 8);
  const Batch b = random_batch(ac, 100, 4, 0.1);
  PPOConfig cfg;
  cfg.minibatch = 32;
  cfg.sym_loss_weight = 0.0;
  ActorCritic a1 = ac, a2 = ac, a3 = ac;
  Adam o1, c1, o2, c2, o3, c3;
  for (int it = 0; it < 3; ++it) {
    ppo_update(a1, o1, c1, b, cfg, &toy_mirror(), 100 + it);
    ppo_update(a2, o2, c2, b, cfg, nullptr, 100 + it);
    vanilla_update(a3, o3, c3, b, cfg, 100 + it);
  }
  CHECK(a1.actor_params() == a2.actor_params());
  CHECK(a1.critic.params() == a2.critic.params());
  CHECK(a1.actor_params() == a3.actor_params());
  CHECK(a1.critic.params() == a3.critic.params());
  CHECK(o1.m == o3.m);
  cfg.sym_loss_weight = 4.0;
  ActorCritic a4 = ac;
  Adam o4, c4;
  ppo_update(a4, o4, c4, b, cfg, &toy_mirror(), 100);
  CHECK(!(a4.actor_params() == a2.actor_params()));
}

TEST_CASE("non-finite losses abort the iteration") {
  auto ac = ActorCritic::create(19, 2, {8}, 0.3, 8);
  Batch b = random_batch(ac, 10, 4, 0.1);
  b.returns(3) = std::nan("");
  const auto before = ac.actor_params();
  Adam o, c;
  PPOConfig cfg;
  CHECK_THROWS_AS(ppo_update(ac, o, c, b, cfg, nullptr, 1), AbortIteration);
  CHECK(ac.actor_params() == before);
  CHECK(o.t == 0);
}

TEST_CASE("adam first step moves by the learning rate") {
  Adam a;
  a.lr = 0.01;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 2.0, -0.5, 1e-3;
  a.step(p, g);
  CHECK(p(0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(p(1) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(p(2) == doctest::Approx(-0.01).epsilon(1e-4));
}

TEST_CASE("normalizer merges batches exactly") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(2.0, 3.0);
  Eigen::MatrixXd all(4, 300);
  for (auto& v : all.reshaped()) v = n(rng);
  auto norm = ObsNormalizer::identity(4);
  norm.update(all.leftCols(100));
  norm.update(all.middleCols(100, 150));
  norm.update(all.rightCols(50));
  const Eigen::VectorXd mean = all.rowwise().mean();
  const Eigen::VectorXd var = (all.colwise() - mean).array().square().rowwise().mean();
  CHECK((norm.mean - mean).norm() < 1e-12);
  CHECK((norm.var - var).norm() < 1e-10);
  CHECK(norm.count == 300.0);
  norm.refresh(nullptr);
  const Eigen::MatrixXd z = norm.apply(all);
  CHECK(z.rowwise().mean().norm() < 1e-10);
  CHECK_THROWS_AS(norm.update(Eigen::MatrixXd::Zero(3, 2)), InvalidArgument);
}

TEST_CASE("symmetrized normalizer commutes with the mirror") {
  const auto& m = toy_mirror();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(1.0, 2.0);
  Eigen::MatrixXd obs(19, 50);
  for (auto& v : obs.reshaped()) v = n(rng);
  auto norm = ObsNormalizer::identity(19);
  norm.update(obs);
  norm.refresh(&m.state);
  const Eigen::MatrixXd lhs = norm.apply(m.state.apply_columns(obs));
  const Eigen::MatrixXd rhs = m.state.apply_columns(norm.apply(obs));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rollout collection is independent of the worker count") {
  auto cfg = tiny_train_config();
  cfg.env.finalize();
  const auto ac = ActorCritic::create(env::WalkEnv::kObsDim, env::WalkEnv::kActDim, {16}, 0.3, 1);
  const auto factory = training_env_factory(cfg.env);
  CollectConfig cc;
  cc.rollouts = 6;
  cc.rollout_len = 30;
  cc.n_workers = 1;
  const auto a = collect_rollouts(ac, factory, cc, 2, 11);
  cc.n_workers = 4;
  const auto b = collect_rollouts(ac, factory, cc, 2, 11);
  REQUIRE(a.rollouts.size() == 6);
  REQUIRE(b.rollouts.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(a.rollouts[k].obs == b.rollouts[k].obs);
    CHECK(a.rollouts[k].actions == b.rollouts[k].actions);
    CHECK(a.rollouts[k].rewards == b.rollouts[k].rewards);
    CHECK(a.rollouts[k].values == b.rollouts[k].values);
    CHECK(a.rollouts[k].dones == b.rollouts[k].dones);
  }
  CHECK(a.transitions() <= 6u * 30u);
  CHECK(!(a.rollouts[0].obs == a.rollouts[1].obs));
}

TEST_CASE("rollout bookkeeping") {
  env::EnvConfig ec;
  ec.finalize();
  const auto ac = ActorCritic::create(env::WalkEnv::kObsDim, env::WalkEnv::kActDim, {16}, 0.3, 1);
  env::WalkEnv e(ec, plan::gen_line_plan(plan::Direction::kForward, 0.25, 0.12, 10), 5);
  const auto r = run_rollout(ac, e, 25, 9, false);
  CHECK(r.length() <= 25);
  CHECK(r.values.size() == r.length() + 1);
  CHECK(r.obs.cols() == r.length());
  CHECK(r.log_probs.size() == r.length());
  CHECK(r.episode_return == doctest::Approx(r.rewards.sum()));
  RolloutBuffer buf;
  buf.rollouts.push_back(r);
  buf.rollouts.push_back(r);
  const Batch b = buf.to_batch(0.99, 0.95);
  CHECK(b.size() == 2 * r.length());
}

TEST_CASE("a still policy stands until the timeout") {
  env::EnvConfig ec;
  ec.finalize();
  ec.termination.max_control_steps = 400;
  auto ac = ActorCritic::create(env::WalkEnv::kObsDim, env::WalkEnv::kActDim, {16}, 0.3, 1);
  ac.actor.params().setZero();
  ac.log_std.setConstant(-30.0);
  env::WalkEnv e(ec, plan::gen_line_plan(plan::Direction::kForward, 0.25, 0.12, 10), 5);
  const auto r = run_rollout(ac, e, 400, 9, false);
  CHECK(r.cause == task::Termination::kTimeout);
  CHECK(r.length() == 400);
  CHECK(r.actions.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.duration == doctest::Approx(10.0));
}

TEST_CASE("checkpoint resume reproduces the uninterrupted run") {
  const auto path = std::filesystem::temp_directory_path() / "steprl_resume_test.ck";
  Trainer full(tiny_train_config());
  full.iterate();
  full.save_checkpoint(path.string());
  full.iterate();
  full.iterate();

  Trainer resumed(tiny_train_config());
  resumed.load_checkpoint(path.string());
  CHECK(resumed.iteration() == 1);
  resumed.iterate();
  resumed.iterate();
  CHECK(resumed.policy().actor_params() == full.policy().actor_params());
  CHECK(resumed.policy().critic.params() == full.policy().critic.params());
  CHECK(resumed.policy().normalizer.shift == full.policy().normalizer.shift);

  const auto loaded = load_policy(path.string());
  CHECK(loaded.actor.sizes() == full.policy().actor.sizes());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_policy(path.string()), UsageError);
}

TEST_CASE("ppo config validation") {
  PPOConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = PPOConfig{};
  c.lr = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = PPOConfig{};
  CHECK(c.rollout_len == 400);
  CHECK(c.rollouts_per_batch == 64);
  CHECK(c.lr == 1e-4);
  CHECK(c.hidden == std::vector<int>{256, 256});
}
