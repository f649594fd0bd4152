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

#include "steprl/learn/nn.hpp"

#include <cmath>

#include "steprl/common.hpp"

namespace steprl::learn {

Mlp::Mlp(std::vector<int> sizes, std::mt19937_64& rng, double output_gain)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw InvalidArgument("network needs at least two layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] <= 0 || sizes_[l + 1] <= 0) throw InvalidArgument("layer sizes must be positive");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int l = 0; l < n_layers(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double gain = l + 1 == n_layers() ? output_gain : 1.0;
    const double sd = gain * std::sqrt(2.0 / in);
    double* w = params_.data() + weight_offset(l);
    for (int i = 0; i < in * out; ++i) w[i] = sd * n01(rng);
  }
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weight(int l) const {
  return {params_.data() + weight_offset(l), sizes_[l + 1], sizes_[l]};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(int l) const {
  return {params_.data() + weight_offset(l) + static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l],
          sizes_[l + 1]};
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache* cache) const {
  if (x.rows() != input_dim()) throw InvalidArgument("network input has the wrong size");
  if (cache) {
    cache->activations.resize(static_cast<std::size_t>(n_layers()) + 1);
    cache->activations[0] = x;
  }
  Eigen::MatrixXd a = x;
  for (int l = 0; l < n_layers(); ++l) {
    Eigen::MatrixXd z = weight(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < n_layers()) z = z.cwiseMax(0.0);
    a = std::move(z);
    if (cache) cache->activations[static_cast<std::size_t>(l) + 1] = a;
  }
  return a;
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dy, Eigen::VectorXd& grad) const {
  if (grad.size() != params_.size()) throw InvalidArgument("gradient has the wrong size");
  Eigen::MatrixXd dz = dy;
  for (int l = n_layers() - 1; l >= 0; --l) {
    const Eigen::MatrixXd& a_in = cache.activations[static_cast<std::size_t>(l)];
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offset(l), out, in);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + weight_offset(l) + static_cast<std::size_t>(out) * in, out);
    gw.noalias() += dz * a_in.transpose();
    gb += dz.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd da = weight(l).transpose() * dz;
      dz = (a_in.array() > 0.0).select(da, 0.0);
    }
  }
}

ObsNormalizer ObsNormalizer::identity(int dim) {
  ObsNormalizer n;
  n.mean = Eigen::VectorXd::Zero(dim);
  n.var = Eigen::VectorXd::Ones(dim);
  n.shift = Eigen::VectorXd::Zero(dim);
  n.scale = Eigen::VectorXd::Ones(dim);
  return n;
}

void ObsNormalizer::update(const Eigen::MatrixXd& batch) {
  if (batch.rows() != mean.size()) throw InvalidArgument("normalizer dimension mismatch");
  const double nb = static_cast<double>(batch.cols());
  if (nb == 0.0) return;
  const Eigen::VectorXd mb = batch.rowwise().mean();
  const Eigen::VectorXd vb = (batch.colwise() - mb).array().square().rowwise().sum() / nb;
  if (count == 0.0) {
    mean = mb;
    var = vb;
    count = nb;
    return;
  }
  const double total = count + nb;
  const Eigen::VectorXd delta = mb - mean;
  mean += delta * (nb / total);
  var = (var * count + vb * nb + delta.array().square().matrix() * (count * nb / total)) / total;
  count = total;
}

void ObsNormalizer::refresh(const sim::SignedPermutation* mirror) {
  Eigen::VectorXd m = mean;
  Eigen::VectorXd v = var;
  if (mirror) {
    Eigen::VectorXd vm(v.size());
    for (std::size_t i = 0; i < mirror->size(); ++i) vm(static_cast<Eigen::Index>(i)) = var(mirror->source[i]);
    m = 0.5 * (mean + mirror->apply(mean));
    v = 0.5 * (var + vm);
  }
  shift = m;
  scale = v.cwiseSqrt().cwiseMax(min_std);
}

Eigen::MatrixXd ObsNormalizer::apply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out = (x.colwise() - shift).array().colwise() / scale.array();
  return out.cwiseMax(-clip).cwiseMin(clip);
}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (m.size() != params.size()) {
    m = Eigen::VectorXd::Zero(params.size());
    v = Eigen::VectorXd::Zero(params.size());
    t = 0;
  }
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

ActorCritic ActorCritic::create(int obs_dim, int act_dim, std::vector<int> hidden,
                                double init_std, std::uint64_t seed, double value_scale) {
  if (!(init_std > 0.0)) throw InvalidArgument("initial std must be positive");
  if (!(value_scale > 0.0)) throw InvalidArgument("value scale must be positive");
  std::mt19937_64 rng(seed);
  std::vector<int> a_sizes = {obs_dim};
  a_sizes.insert(a_sizes.end(), hidden.begin(), hidden.end());
  std::vector<int> c_sizes = a_sizes;
  a_sizes.push_back(act_dim);
  c_sizes.push_back(1);
  ActorCritic ac;
  ac.normalizer = ObsNormalizer::identity(obs_dim);
  ac.actor = Mlp(a_sizes, rng, 0.01);
  ac.critic = Mlp(c_sizes, rng, 1.0);
  ac.log_std = Eigen::VectorXd::Constant(act_dim, std::log(init_std));
  ac.value_scale = value_scale;
  return ac;
}

Eigen::MatrixXd ActorCritic::mean(const Eigen::MatrixXd& obs) const {
  return actor.forward(normalizer.apply(obs)).array().tanh();
}

Eigen::VectorXd ActorCritic::value(const Eigen::MatrixXd& obs) const {
  return value_scale * critic.forward(normalizer.apply(obs)).row(0).transpose();
}

Eigen::VectorXd ActorCritic::log_prob(const Eigen::MatrixXd& mean,
                                      const Eigen::MatrixXd& actions) const {
  const double half_log_2pi = 0.5 * std::log(2.0 * kPi);
  const Eigen::ArrayXd inv_std = (-log_std).array().exp();
  Eigen::VectorXd out(mean.cols());
  for (Eigen::Index b = 0; b < mean.cols(); ++b) {
    const Eigen::ArrayXd z = (actions.col(b) - mean.col(b)).array() * inv_std;
    out(b) = (-0.5 * z.square() - log_std.array() - half_log_2pi).sum();
  }
  return out;
}

Eigen::VectorXd ActorCritic::sample(const Eigen::VectorXd& mean, std::mt19937_64& rng,
                                    bool deterministic) const {
  if (deterministic) return mean;
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd a(mean.size());
  for (Eigen::Index j = 0; j < mean.size(); ++j) a(j) = mean(j) + std::exp(log_std(j)) * n01(rng);
  return a;
}

Eigen::VectorXd ActorCritic::actor_params() const {
  Eigen::VectorXd p(actor.params().size() + log_std.size());
  p << actor.params(), log_std;
  return p;
}

void ActorCritic::set_actor_params(const Eigen::VectorXd& p) {
  const Eigen::Index n = actor.params().size();
  if (p.size() != n + log_std.size()) throw InvalidArgument("actor parameter size mismatch");
  actor.params() = p.head(n);
  log_std = p.tail(log_std.size());
}

}  // namespace steprl::learn
