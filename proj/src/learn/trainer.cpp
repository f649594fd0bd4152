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

#include "steprl/learn/trainer.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>
#include <thread>

#include "steprl/common.hpp"

namespace steprl::learn {

std::size_t RolloutBuffer::transitions() const {
  std::size_t n = 0;
  for (const auto& r : rollouts) n += static_cast<std::size_t>(r.length());
  return n;
}

Batch RolloutBuffer::to_batch(double gamma, double lambda) const {
  Batch b;
  const auto n = static_cast<Eigen::Index>(transitions());
  if (rollouts.empty() || n == 0) return b;
  b.obs.resize(rollouts.front().obs.rows(), n);
  b.actions.resize(rollouts.front().actions.rows(), n);
  b.log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  Eigen::Index at = 0;
  for (const auto& r : rollouts) {
    const Eigen::Index t = r.length();
    if (t == 0) continue;
    const auto g = gae_advantages(
        std::span<const double>(r.rewards.data(), static_cast<std::size_t>(t)),
        std::span<const double>(r.values.data(), static_cast<std::size_t>(t) + 1), r.dones, gamma,
        lambda);
    b.obs.middleCols(at, t) = r.obs;
    b.actions.middleCols(at, t) = r.actions;
    b.log_probs.segment(at, t) = r.log_probs;
    b.advantages.segment(at, t) = g.advantages;
    b.returns.segment(at, t) = g.returns;
    at += t;
  }
  normalize_advantages(b.advantages);
  return b;
}

EnvFactory training_env_factory(const env::EnvConfig& config) {
  return [config](long iteration, int, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 11));
    auto plan = env::sample_training_plan(config, iteration, rng);
    return env::WalkEnv(config, std::move(plan), seed);
  };
}

std::uint64_t rollout_seed(std::uint64_t seed, long iteration, int index) {
  return derive_seed(seed, static_cast<std::uint64_t>(iteration),
                     static_cast<std::uint64_t>(index));
}

Rollout run_rollout(const ActorCritic& policy, env::WalkEnv& env, int max_len,
                    std::uint64_t seed, bool deterministic) {
  std::mt19937_64 rng(derive_seed(seed, 3));
  const int od = policy.obs_dim();
  const int ad = policy.act_dim();
  Eigen::MatrixXd obs(od, max_len + 1);
  Eigen::MatrixXd act(ad, max_len);
  Eigen::VectorXd logp(max_len);
  Eigen::VectorXd rew(max_len);
  Rollout r;
  obs.col(0) = env.reset();
  bool terminal = false;
  int t = 0;
  for (; t < max_len; ++t) {
    const Eigen::VectorXd mu = policy.mean(obs.col(t));
    const Eigen::VectorXd a = policy.sample(mu, rng, deterministic);
    act.col(t) = a;
    logp(t) = policy.log_prob(mu, a)(0);
    env::StepResult s;
    try {
      s = env.step(a);
    } catch (const SimulationDiverged&) {
      r.diverged = true;
      terminal = true;
      break;
    }
    rew(t) = s.reward;
    r.episode_return += s.reward;
    obs.col(t + 1) = s.observation;
    r.cause = s.termination;
    if (s.termination == task::Termination::kFall ||
        s.termination == task::Termination::kSelfCollision) {
      terminal = true;
      ++t;
      break;
    }
    if (s.termination == task::Termination::kTimeout) {
      ++t;
      break;
    }
  }
  // A diverged step is discarded; the previous transition becomes terminal.
  if (r.diverged && t == 0) {
    r.obs.resize(od, 0);
    r.actions.resize(ad, 0);
    r.values = Eigen::VectorXd::Zero(1);
    return r;
  }
  r.obs = obs.leftCols(t);
  r.actions = act.leftCols(t);
  r.log_probs = logp.head(t);
  r.rewards = rew.head(t);
  r.dones.assign(static_cast<std::size_t>(t), 0);
  if (terminal) r.dones.back() = 1;
  r.values.resize(t + 1);
  r.values.head(t) = policy.value(r.obs);
  r.values(t) = terminal ? 0.0 : policy.value(obs.col(t))(0);
  r.forward_displacement = env.forward_displacement();
  r.duration = env.time();
  r.steps_scored = env.tracker().current_index;
  return r;
}

RolloutBuffer collect_rollouts(const ActorCritic& policy, const EnvFactory& factory,
                               const CollectConfig& config, long iteration, std::uint64_t seed) {
  if (config.n_workers < 1) throw InvalidArgument("n_workers must be >= 1");
  if (config.rollouts < 1 || config.rollout_len < 1) {
    throw InvalidArgument("rollout count and length must be positive");
  }
  RolloutBuffer buf;
  buf.rollouts.resize(static_cast<std::size_t>(config.rollouts));
  auto work = [&](int worker) {
    for (int i = worker; i < config.rollouts; i += config.n_workers) {
      const std::uint64_t s = rollout_seed(seed, iteration, i);
      env::WalkEnv env = factory(iteration, i, s);
      buf.rollouts[static_cast<std::size_t>(i)] =
          run_rollout(policy, env, config.rollout_len, s, config.deterministic);
    }
  };
  const int workers = std::min(config.n_workers, config.rollouts);
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return buf;
}

void write_curve_header(std::ostream& out) {
  out << "iteration,mean_return,mean_episode_length,policy_loss,value_loss,sym_loss,"
         "approx_kl,clip_fraction,mean_displacement,mean_steps_scored,diverged,aborted,seconds\n";
}

void write_curve_row(std::ostream& out, const IterationStats& s) {
  out << s.iteration << ',' << format_double(s.mean_return) << ','
      << format_double(s.mean_length) << ',' << format_double(s.loss.policy) << ','
      << format_double(s.loss.value) << ',' << format_double(s.loss.sym) << ','
      << format_double(s.loss.approx_kl) << ',' << format_double(s.loss.clip_fraction) << ','
      << format_double(s.mean_displacement) << ',' << format_double(s.mean_steps_scored) << ','
      << s.diverged << ',' << (s.aborted ? 1 : 0) << ',' << format_double(s.seconds) << '\n';
}

namespace {

constexpr char kMagic[8] = {'S', 'T', 'E', 'P', 'R', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

CollectConfig collect_config(const TrainConfig& c) {
  CollectConfig cc;
  cc.rollouts = c.ppo.rollouts_per_batch;
  cc.rollout_len = c.ppo.rollout_len;
  cc.n_workers = c.n_workers;
  return cc;
}

}  // namespace

Trainer::Trainer(TrainConfig config)
    : config_(std::move(config)), mirror_(sim::MirrorMaps::planar()) {
  config_.ppo.validate();
  config_.env.finalize();
  config_.env.termination.max_control_steps = config_.ppo.rollout_len;
  ac_ = ActorCritic::create(env::WalkEnv::kObsDim, env::WalkEnv::kActDim, config_.ppo.hidden,
                            config_.ppo.init_std, derive_seed(config_.seed, 0x5eed),
                            config_.ppo.value_scale);
  actor_opt_.lr = config_.ppo.lr;
  critic_opt_.lr = config_.ppo.lr;
  factory_ = training_env_factory(config_.env);
  if (config_.ppo.normalize_observations) {
    // Seed the normalizer from a warm-up batch of the initial policy.
    CollectConfig cc = collect_config(config_);
    cc.rollouts = std::max(1, cc.rollouts / 4);
    const auto buf = collect_rollouts(ac_, factory_, cc, -1, config_.seed);
    for (const auto& r : buf.rollouts) {
      if (r.length() > 0) ac_.normalizer.update(r.obs);
    }
    ac_.normalizer.refresh(&mirror_.state);
  }
}

IterationStats Trainer::iterate() {
  const auto t0 = std::chrono::steady_clock::now();
  IterationStats s;
  s.iteration = iteration_;
  const auto buf = collect_rollouts(ac_, factory_, collect_config(config_), iteration_,
                                    config_.seed);
  const double n = static_cast<double>(buf.rollouts.size());
  for (const auto& r : buf.rollouts) {
    s.mean_return += r.episode_return / n;
    s.mean_length += r.duration / n;
    s.mean_displacement += r.forward_displacement / n;
    s.mean_steps_scored += static_cast<double>(r.steps_scored) / n;
    s.diverged += r.diverged ? 1 : 0;
  }
  const Batch batch = buf.to_batch(config_.ppo.gamma, config_.ppo.lambda);
  if (batch.size() > 0) {
    try {
      const auto u = ppo_update(ac_, actor_opt_, critic_opt_, batch, config_.ppo, &mirror_,
                                derive_seed(config_.seed, static_cast<std::uint64_t>(iteration_), 7));
      s.loss = u.mean;
    } catch (const AbortIteration&) {
      s.aborted = true;
    }
    if (config_.ppo.normalize_observations) {
      ac_.normalizer.update(batch.obs);
      ac_.normalizer.refresh(&mirror_.state);
    }
  }
  ++iteration_;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

namespace {

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw InvalidArgument("cannot open checkpoint for writing: " + path);
  }
  template <typename T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void vec(const Eigen::VectorXd& v) {
    pod(static_cast<std::uint64_t>(v.size()));
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(v.size())));
  }
  void sizes(const std::vector<int>& s) {
    pod(static_cast<std::uint64_t>(s.size()));
    for (int v : s) pod(static_cast<std::int32_t>(v));
  }
  void raw(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw Error("failed writing checkpoint");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw UsageError("cannot open checkpoint: " + path);
  }
  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw InvalidArgument("truncated checkpoint");
    return v;
  }
  Eigen::VectorXd vec() {
    const auto n = pod<std::uint64_t>();
    if (n > (1ull << 28)) throw InvalidArgument("corrupt checkpoint vector length");
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * n));
    if (!in_) throw InvalidArgument("truncated checkpoint");
    return v;
  }
  std::vector<int> sizes() {
    const auto n = pod<std::uint64_t>();
    if (n > 64) throw InvalidArgument("corrupt checkpoint layer count");
    std::vector<int> s(n);
    for (auto& v : s) v = pod<std::int32_t>();
    return s;
  }
  void raw(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (!in_) throw InvalidArgument("truncated checkpoint");
  }

 private:
  std::ifstream in_;
};

void write_net(Writer& w, const Mlp& m) {
  w.sizes(m.sizes());
  w.vec(m.params());
}

Mlp read_net(Reader& r) {
  const auto sizes = r.sizes();
  std::mt19937_64 rng(0);
  Mlp m(sizes, rng);
  Eigen::VectorXd p = r.vec();
  if (p.size() != m.params().size()) throw InvalidArgument("checkpoint network size mismatch");
  m.params() = std::move(p);
  return m;
}

void write_adam(Writer& w, const Adam& a) {
  w.pod(static_cast<std::int64_t>(a.t));
  w.vec(a.m);
  w.vec(a.v);
}

void read_adam(Reader& r, Adam& a) {
  a.t = r.pod<std::int64_t>();
  a.m = r.vec();
  a.v = r.vec();
}

struct CheckpointData {
  long iteration = 0;
  std::uint64_t seed = 0;
  ActorCritic ac;
  Adam actor_opt;
  Adam critic_opt;
};

CheckpointData read_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw InvalidArgument("not a checkpoint: " + path);
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion) throw InvalidArgument("unsupported checkpoint version");
  CheckpointData d;
  d.iteration = r.pod<std::int64_t>();
  d.seed = r.pod<std::uint64_t>();
  d.ac.normalizer.mean = r.vec();
  d.ac.normalizer.var = r.vec();
  d.ac.normalizer.count = r.pod<double>();
  d.ac.normalizer.shift = r.vec();
  d.ac.normalizer.scale = r.vec();
  d.ac.normalizer.min_std = r.pod<double>();
  d.ac.normalizer.clip = r.pod<double>();
  d.ac.actor = read_net(r);
  d.ac.log_std = r.vec();
  d.ac.critic = read_net(r);
  d.ac.value_scale = r.pod<double>();
  read_adam(r, d.actor_opt);
  read_adam(r, d.critic_opt);
  if (d.ac.log_std.size() != d.ac.actor.output_dim() ||
      d.ac.normalizer.shift.size() != d.ac.actor.input_dim()) {
    throw InvalidArgument("inconsistent checkpoint");
  }
  return d;
}

}  // namespace

void Trainer::save_checkpoint(const std::string& path) const {
  Writer w(path);
  w.raw(kMagic, sizeof kMagic);
  w.pod(kVersion);
  w.pod(static_cast<std::int64_t>(iteration_));
  w.pod(config_.seed);
  w.vec(ac_.normalizer.mean);
  w.vec(ac_.normalizer.var);
  w.pod(ac_.normalizer.count);
  w.vec(ac_.normalizer.shift);
  w.vec(ac_.normalizer.scale);
  w.pod(ac_.normalizer.min_std);
  w.pod(ac_.normalizer.clip);
  write_net(w, ac_.actor);
  w.vec(ac_.log_std);
  write_net(w, ac_.critic);
  w.pod(ac_.value_scale);
  write_adam(w, actor_opt_);
  write_adam(w, critic_opt_);
  w.finish();
}

void Trainer::load_checkpoint(const std::string& path) {
  auto d = read_checkpoint(path);
  if (d.ac.obs_dim() != ac_.obs_dim() || d.ac.act_dim() != ac_.act_dim()) {
    throw InvalidArgument("checkpoint does not match the environment dimensions");
  }
  ac_ = std::move(d.ac);
  const double lr = config_.ppo.lr;
  actor_opt_ = std::move(d.actor_opt);
  critic_opt_ = std::move(d.critic_opt);
  actor_opt_.lr = lr;
  critic_opt_.lr = lr;
  iteration_ = d.iteration;
  config_.seed = d.seed;
}

ActorCritic load_policy(const std::string& path) { return read_checkpoint(path).ac; }

}  // namespace steprl::learn
