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

#include "steprl/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "steprl/common.hpp"

namespace steprl::eval {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  if (b != e && *b == '+') ++b;
  const auto r = std::from_chars(b, e, out);
  if (r.ec != std::errc() || r.ptr != e) throw UsageError("expected an integer for " + key + ": " + v);
  return out;
}

double parse_number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw UsageError("expected a number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("expected a boolean for " + key + ": " + v);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_number(key, item));
  return out;
}

std::array<double, 3> parse_triple(const std::string& key, const std::string& v) {
  const auto l = parse_list(key, v);
  if (l.size() != 3) throw UsageError(key + " expects hip, knee, ankle values");
  return {l[0], l[1], l[2]};
}

std::string section_of(const std::string& key) {
  const auto dot = key.find('.');
  return dot == std::string::npos ? "" : key.substr(0, dot);
}

}  // namespace

Config Config::parse(std::istream& in) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("malformed configuration: ") + e.what());
  }
  Config c;
  for (const auto& [name, node] : pt) {
    if (node.empty()) {
      c.values_[name] = trim(node.data());
      continue;
    }
    for (const auto& [key, value] : node) c.values_[name + "." + key] = trim(value.data());
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open configuration file: " + path);
  return parse(in);
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_number(key, *v) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
  const auto v = get(key);
  return v ? parse_long(key, *v) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  return v ? parse_bool(key, *v) : fallback;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto v = get(key);
  return v ? *v : fallback;
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> fallback) const {
  const auto v = get(key);
  return v ? parse_list(key, *v) : fallback;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

learn::TrainConfig train_config(const Config& c) {
  learn::TrainConfig t;
  auto& p = t.ppo;
  auto& e = t.env;
  auto& m = e.model;
  using Setter = std::function<void(const std::string& key, const std::string& v)>;
  auto num = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = parse_number(k, v); };
  };
  auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) {
      field = static_cast<int>(parse_long(k, v));
    };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = parse_bool(k, v); };
  };
  auto triple = [](std::array<double, 3>& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = parse_triple(k, v); };
  };
  const std::map<std::string, Setter> setters = {
      {"train.iterations", integer(t.iterations)},
      {"train.workers", integer(t.n_workers)},
      {"train.seed",
       [&t](const std::string& k, const std::string& v) {
         t.seed = static_cast<std::uint64_t>(parse_long(k, v));
       }},
      {"ppo.lr", num(p.lr)},
      {"ppo.clip", num(p.clip)},
      {"ppo.gamma", num(p.gamma)},
      {"ppo.lambda", num(p.lambda)},
      {"ppo.epochs", integer(p.epochs)},
      {"ppo.minibatch", integer(p.minibatch)},
      {"ppo.rollout_len", integer(p.rollout_len)},
      {"ppo.rollouts_per_batch", integer(p.rollouts_per_batch)},
      {"ppo.sym_loss_weight", num(p.sym_loss_weight)},
      {"ppo.init_std", num(p.init_std)},
      {"ppo.value_coef", num(p.value_coef)},
      {"ppo.value_scale", num(p.value_scale)},
      {"ppo.entropy_coef", num(p.entropy_coef)},
      {"ppo.max_grad_norm", num(p.max_grad_norm)},
      {"ppo.normalize_observations", flag(p.normalize_observations)},
      {"ppo.hidden",
       [&p](const std::string& k, const std::string& v) {
         p.hidden.clear();
         for (double h : parse_list(k, v)) {
           if (h < 1 || h != std::floor(h)) throw UsageError(k + " expects positive integers");
           p.hidden.push_back(static_cast<int>(h));
         }
       }},
      {"env.step_length", num(e.step_length)},
      {"env.foot_spread", num(e.foot_spread)},
      {"env.plan_steps", integer(e.plan_steps)},
      {"env.mix_forward", num(e.mix.forward)},
      {"env.mix_backward", num(e.mix.backward)},
      {"env.mix_stand", num(e.mix.stand)},
      {"env.mix_stairs", num(e.mix.stairs)},
      {"env.joint_noise", num(e.joint_noise)},
      {"env.speed_scale", num(e.speed_scale)},
      {"env.double_support", num(e.schedule.double_support)},
      {"env.single_support", num(e.schedule.single_support)},
      {"env.ramp_width", num(e.schedule.ramp_width)},
      {"env.target_radius", num(e.score.target_radius)},
      {"env.target_delay",
       [&e](const std::string& k, const std::string& v) {
         e.score.target_delay = parse_number(k, v);
         e.delay_from_schedule = false;
       }},
      {"env.require_contact", flag(e.score.require_contact)},
      {"env.min_root_height", num(e.termination.min_root_height)},
      {"env.k_hit", num(e.step_reward.k_hit)},
      {"env.gated_step_reward", flag(e.step_reward.gated)},
      {"env.curriculum_start",
       [&e](const std::string& k, const std::string& v) { e.curriculum.start_itr = parse_long(k, v); }},
      {"env.curriculum_ramp",
       [&e](const std::string& k, const std::string& v) { e.curriculum.ramp_itrs = parse_long(k, v); }},
      {"env.curriculum_max_height", num(e.curriculum.max_height)},
      {"env.weights",
       [&e](const std::string& k, const std::string& v) {
         const auto w = parse_list(k, v);
         if (w.size() != 8) throw UsageError(k + " expects 8 weights");
         std::copy(w.begin(), w.end(), e.weights.w.begin());
       }},
      {"env.schedule",
       [&e](const std::string& k, const std::string& v) {
         if (v == "jvrc1") {
           e.schedule = gait::GaitSchedule::jvrc1();
         } else if (v == "hrp5p") {
           e.schedule = gait::GaitSchedule::hrp5p();
         } else {
           throw UsageError(k + " must be jvrc1 or hrp5p");
         }
       }},
      {"model.gravity", num(m.gravity)},
      {"model.friction", num(m.friction)},
      {"model.contact_stiffness", num(m.contact_stiffness)},
      {"model.contact_damping", num(m.contact_damping)},
      {"model.action_scale", num(m.action_scale)},
      {"model.armature", num(m.armature)},
      {"model.kp", triple(m.kp)},
      {"model.kd", triple(m.kd)},
      {"model.torque_limit", triple(m.torque_limit)},
      {"model.velocity_limit", triple(m.velocity_limit)},
      {"model.nominal", triple(m.nominal)},
      {"model.substeps", integer(e.control.substeps)},
      {"model.physics_dt", num(e.control.physics_dt)},
  };
  // The schedule preset must apply before individual durations override it.
  if (const auto v = c.get("env.schedule")) setters.at("env.schedule")("env.schedule", *v);
  for (const auto& [key, value] : c.values()) {
    const std::string sec = section_of(key);
    if (sec == "eval") continue;
    if (key == "env.schedule") continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown configuration key: " + key);
    it->second(key, value);
  }
  t.ppo.validate();
  if (t.iterations < 0 || t.n_workers < 1) throw UsageError("iterations >= 0 and workers >= 1 required");
  return t;
}

EvalSettings eval_settings(const Config& c) {
  EvalSettings s;
  static const char* const kKnown[] = {"eval.trials",        "eval.duration",  "eval.workers",
                                       "eval.plan",          "eval.stair_height",
                                       "eval.noise_site",    "eval.terrain_levels",
                                       "eval.obs_levels"};
  for (const auto& [key, value] : c.values()) {
    if (section_of(key) != "eval") continue;
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw UsageError("unknown configuration key: " + key);
    }
  }
  s.n_trials = static_cast<int>(c.get_int("eval.trials", s.n_trials));
  s.duration = c.get_double("eval.duration", s.duration);
  s.n_workers = static_cast<int>(c.get_int("eval.workers", s.n_workers));
  s.plan = c.get_string("eval.plan", s.plan);
  s.stair_height = c.get_double("eval.stair_height", s.stair_height);
  const std::string site = c.get_string("eval.noise_site", "observed");
  if (site == "observed") {
    s.noise_site = env::NoiseSite::kObserved;
  } else if (site == "physical") {
    s.noise_site = env::NoiseSite::kPhysical;
  } else {
    throw UsageError("eval.noise_site must be observed or physical");
  }
  s.terrain_levels = c.get_list("eval.terrain_levels", s.terrain_levels);
  s.obs_levels = c.get_list("eval.obs_levels", s.obs_levels);
  if (s.n_trials < 1 || s.n_workers < 1 || !(s.duration > 0.0)) {
    throw UsageError("eval.trials, eval.workers and eval.duration must be positive");
  }
  return s;
}

plan::FootstepPlan evaluation_plan(const std::string& kind, const env::EnvConfig& env,
                                   double stair_height) {
  if (kind == "stand") return plan::gen_stand();
  if (kind == "backward") {
    return plan::gen_line_plan(plan::Direction::kBackward, env.step_length, env.foot_spread,
                               env.plan_steps);
  }
  auto fwd = plan::gen_line_plan(plan::Direction::kForward, env.step_length, env.foot_spread,
                                 env.plan_steps);
  if (kind == "forward") return fwd;
  if (kind == "stairs") return plan::apply_stairs(fwd, stair_height);
  throw UsageError("unknown plan kind: " + kind);
}

TrialReport run_trials(const learn::ActorCritic& policy, const SweepSetup& setup,
                       const std::string& sweep, double level) {
  if (setup.n_trials < 1 || setup.n_workers < 1) throw UsageError("n_trials and n_workers must be >= 1");
  if (!(level >= 0.0)) throw InvalidArgument("noise level must be >= 0");
  env::EnvConfig cfg = setup.env;
  if (sweep == "terrain") {
    cfg.step_height_noise = level;
  } else if (sweep == "obs") {
    cfg.joint_obs_noise_deg = level;
  } else if (sweep != "clean") {
    throw InvalidArgument("unknown sweep kind: " + sweep);
  }
  cfg.finalize();
  const int max_steps = static_cast<int>(std::lround(
      setup.duration / (cfg.control.substeps * cfg.control.physics_dt)));
  cfg.termination.max_control_steps = max_steps;

  std::vector<std::string> causes(static_cast<std::size_t>(setup.n_trials));
  std::vector<double> lengths(static_cast<std::size_t>(setup.n_trials));
  auto work = [&](int worker) {
    for (int k = worker; k < setup.n_trials; k += setup.n_workers) {
      const std::uint64_t s = derive_seed(setup.seed, static_cast<std::uint64_t>(k));
      env::WalkEnv env(cfg, setup.plan, s);
      const auto r = learn::run_rollout(policy, env, max_steps, s, true);
      causes[static_cast<std::size_t>(k)] =
          r.diverged ? "diverged" : std::string(task::to_string(r.cause));
      lengths[static_cast<std::size_t>(k)] = r.duration;
    }
  };
  const int workers = std::min(setup.n_workers, setup.n_trials);
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
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

  TrialReport rep;
  rep.sweep = sweep;
  rep.noise_level = level;
  rep.n_trials = setup.n_trials;
  int ok = 0;
  double total = 0.0;
  for (int k = 0; k < setup.n_trials; ++k) {
    const auto& c = causes[static_cast<std::size_t>(k)];
    if (c == "timeout" || c == "continue") ++ok;
    total += lengths[static_cast<std::size_t>(k)];
  }
  rep.success_rate = static_cast<double>(ok) / setup.n_trials;
  rep.mean_episode_length = total / setup.n_trials;
  rep.causes = std::move(causes);
  return rep;
}

std::vector<TrialReport> terrain_noise_sweep(const learn::ActorCritic& policy,
                                             const SweepSetup& setup,
                                             std::span<const double> levels) {
  std::vector<TrialReport> out;
  for (double l : levels) out.push_back(run_trials(policy, setup, "terrain", l));
  return out;
}

std::vector<TrialReport> obs_noise_sweep(const learn::ActorCritic& policy,
                                         const SweepSetup& setup,
                                         std::span<const double> levels) {
  std::vector<TrialReport> out;
  for (double l : levels) out.push_back(run_trials(policy, setup, "obs", l));
  return out;
}

void write_reports(std::ostream& out, const std::vector<TrialReport>& reports) {
  out << "sweep,noise_level,n_trials,success_rate,mean_episode_length,causes\n";
  for (const auto& r : reports) {
    out << r.sweep << ',' << format_double(r.noise_level) << ',' << r.n_trials << ','
        << format_double(r.success_rate) << ',' << format_double(r.mean_episode_length) << ',';
    for (std::size_t i = 0; i < r.causes.size(); ++i) out << (i ? ";" : "") << r.causes[i];
    out << '\n';
  }
}

std::vector<TrialReport> read_reports(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "sweep,noise_level,n_trials,success_rate,mean_episode_length,causes") {
    throw InvalidArgument("not a trial report file");
  }
  std::vector<TrialReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw InvalidArgument("malformed trial report row: " + line);
    TrialReport r;
    r.sweep = f[0];
    r.noise_level = parse_double(f[1]);
    r.n_trials = static_cast<int>(parse_long("n_trials", f[2]));
    r.success_rate = parse_double(f[3]);
    r.mean_episode_length = parse_double(f[4]);
    if (!f[5].empty()) r.causes = split(f[5], ';');
    out.push_back(std::move(r));
  }
  return out;
}

const std::array<const char*, sim::kNumJoints>& joint_names() {
  static const std::array<const char*, sim::kNumJoints> names = {
      "hip_l", "knee_l", "ankle_l", "hip_r", "knee_r", "ankle_r"};
  return names;
}

std::vector<LogRow> grf_log(const learn::ActorCritic& policy, const env::EnvConfig& env_cfg,
                            const plan::FootstepPlan& plan, double duration,
                            std::uint64_t seed) {
  if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
  env::EnvConfig cfg = env_cfg;
  cfg.finalize();
  const double dt = cfg.control.substeps * cfg.control.physics_dt;
  const int steps = static_cast<int>(std::lround(duration / dt));
  cfg.termination.max_control_steps = steps;
  env::WalkEnv env(cfg, plan, seed);
  Eigen::VectorXd obs = env.reset();
  std::vector<LogRow> rows;
  for (int i = 0; i < steps; ++i) {
    const auto s = env.step(policy.mean(obs));
    LogRow row;
    row.t = env.time();
    row.q = env.state().q.tail<sim::kNumJoints>();
    row.qd = env.state().v.tail<sim::kNumJoints>();
    row.tau = s.control.mean_torque;
    row.grf_left = s.control.grf_z[0];
    row.grf_right = s.control.grf_z[1];
    rows.push_back(row);
    obs = s.observation;
    if (s.termination == task::Termination::kFall ||
        s.termination == task::Termination::kSelfCollision) {
      break;
    }
  }
  return rows;
}

void write_log(std::ostream& out, const std::vector<LogRow>& rows) {
  out << 't';
  for (const char* p : {"q_", "qd_", "tau_"}) {
    for (const char* n : joint_names()) out << ',' << p << n;
  }
  out << ",grf_left,grf_right\n";
  for (const auto& r : rows) {
    out << format_double(r.t);
    for (const auto* v : {&r.q, &r.qd, &r.tau}) {
      for (int j = 0; j < sim::kNumJoints; ++j) out << ',' << format_double((*v)(j));
    }
    out << ',' << format_double(r.grf_left) << ',' << format_double(r.grf_right) << '\n';
  }
}

std::vector<LogRow> read_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,", 0) != 0) throw InvalidArgument("not a log file");
  std::vector<LogRow> rows;
  constexpr std::size_t kCols = 1 + 3 * sim::kNumJoints + 2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kCols) throw InvalidArgument("malformed log row: " + line);
    LogRow r;
    r.t = parse_double(f[0]);
    for (int j = 0; j < sim::kNumJoints; ++j) {
      r.q(j) = parse_double(f[1 + j]);
      r.qd(j) = parse_double(f[1 + sim::kNumJoints + j]);
      r.tau(j) = parse_double(f[1 + 2 * sim::kNumJoints + j]);
    }
    r.grf_left = parse_double(f[kCols - 2]);
    r.grf_right = parse_double(f[kCols - 1]);
    rows.push_back(r);
  }
  return rows;
}

PeakReport report_peaks(const std::vector<LogRow>& log, const sim::PlanarBipedModel& model) {
  if (log.empty()) throw UsageError("cannot report peaks of an empty log");
  PeakReport r;
  const auto tl = model.joint_array(model.torque_limit);
  const auto vl = model.joint_array(model.velocity_limit);
  for (const auto& row : log) {
    for (int j = 0; j < sim::kNumJoints; ++j) {
      r.peak_torque[j] = std::max(r.peak_torque[j], std::abs(row.tau(j)));
      r.peak_velocity[j] = std::max(r.peak_velocity[j], std::abs(row.qd(j)));
    }
  }
  for (int j = 0; j < sim::kNumJoints; ++j) {
    r.torque_limit[j] = tl(j);
    r.velocity_limit[j] = vl(j);
    r.torque_exceeded[j] = r.peak_torque[j] > tl(j);
    r.velocity_exceeded[j] = r.peak_velocity[j] > vl(j);
  }
  return r;
}

void write_peaks(std::ostream& out, const PeakReport& r) {
  out << "joint,peak_torque,torque_limit,torque_exceeded,peak_velocity,velocity_limit,"
         "velocity_exceeded\n";
  for (int j = 0; j < sim::kNumJoints; ++j) {
    out << joint_names()[j] << ',' << format_double(r.peak_torque[j]) << ','
        << format_double(r.torque_limit[j]) << ',' << (r.torque_exceeded[j] ? 1 : 0) << ','
        << format_double(r.peak_velocity[j]) << ',' << format_double(r.velocity_limit[j]) << ','
        << (r.velocity_exceeded[j] ? 1 : 0) << '\n';
  }
}

void write_manifest(std::ostream& out, const Manifest& m) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.config_hash));
  out << "key,value\n";
  out << "command," << m.command << '\n';
  out << "config_hash," << hex << '\n';
  out << "seed," << m.seed << '\n';
  for (const auto& [k, v] : m.extra) out << k << ',' << v << '\n';
}

// Scripted replay ----------------------------------------------------------------

std::vector<ScriptedStep> replay_scripted(const plan::FootstepPlan& plan,
                                          const gait::GaitSchedule& schedule,
                                          const task::ScoreConfig& score,
                                          const reward::RewardWeights& weights,
                                          const sim::ScriptedWalkConfig& walk) {
  gait::GaitSchedule sched = schedule;
  if (plan.is_stand()) sched.standing = true;
  gait::GaitSchedule timing = schedule;
  timing.standing = false;
  const auto frames = sim::scripted_walk_3d(plan, timing, walk);

  task::ScoreTracker tracker;
  tracker.config = score;
  const std::array<double, 1> still = {0.0};
  std::vector<ScriptedStep> out;
  out.reserve(frames.size());
  for (const auto& fr : frames) {
    std::array<task::FootSample, 2> feet;
    int in_contact = 0;
    for (int k = 0; k < 2; ++k) {
      feet[k].position = Eigen::Vector3d(fr.feet[k].x, fr.feet[k].y, fr.feet[k].z);
      feet[k].contact = fr.contact[k];
      in_contact += fr.contact[k] ? 1 : 0;
    }
    const auto window = task::target_window(tracker, plan);
    const auto& t1 = window[0];
    const Eigen::Vector3d target(t1.x, t1.y, t1.z);

    reward::RewardInputs in;
    for (int k = 0; k < 2; ++k) {
      const double f = fr.contact[k] ? 1.0 / std::max(in_contact, 1) : 0.0;
      const double v = reward::normalize_speed(fr.foot_velocity[k].norm());
      (k == 0 ? in.grf_left : in.grf_right) = f;
      (k == 0 ? in.speed_left : in.speed_right) = v;
    }
    in.d_foot = std::min((feet[0].position - target).norm(),
                         (feet[1].position - target).norm());
    in.d_root = std::hypot(fr.root.x - t1.x, fr.root.y - t1.y);
    in.orientation = reward::yaw_quaternion(fr.root.yaw);
    in.desired_orientation = reward::yaw_quaternion(t1.heading);
    in.root_height = fr.root.z - 0.5 * (fr.feet[0].z + fr.feet[1].z);
    in.desired_root_height = walk.root_height;
    in.head_xy = Eigen::Vector2d(fr.root.x, fr.root.y);
    in.root_xy = in.head_xy;
    in.action = still;
    in.prev_action = still;
    in.torque = still;
    in.prev_torque = still;
    in.indicators = gait::indicators(fr.phase, sched);

    ScriptedStep step;
    step.t = fr.t;
    step.target_index = tracker.current_index;
    step.breakdown = reward::compute(in, weights);
    const auto r = task::score_update(tracker, feet, timing.control_dt, plan);
    tracker = r.tracker;
    step.scored = r.scored;
    out.push_back(step);
  }
  return out;
}

std::size_t count_scored(const std::vector<ScriptedStep>& steps) {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const ScriptedStep& s) { return s.scored; }));
}

}  // namespace steprl::eval
