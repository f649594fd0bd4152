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

#include "steprl/plan.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "steprl/common.hpp"

namespace steprl::plan {

namespace {

Side side_of(int sign) { return sign > 0 ? Side::kLeft : Side::kRight; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(Side s) {
  switch (s) {
    case Side::kLeft: return "left";
    case Side::kRight: return "right";
    case Side::kEither: return "either";
  }
  return "either";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kForward: return "forward";
    case Mode::kBackward: return "backward";
    case Mode::kLateral: return "lateral";
    case Mode::kTurn: return "turn";
    case Mode::kStand: return "stand";
    case Mode::kStairs: return "stairs";
    case Mode::kCurved: return "curved";
  }
  return "stand";
}

Side side_from_string(std::string_view s) {
  if (s == "left") return Side::kLeft;
  if (s == "right") return Side::kRight;
  if (s == "either") return Side::kEither;
  throw InvalidArgument("unknown step side '" + std::string(s) + "'");
}

Mode mode_from_string(std::string_view s) {
  for (Mode m : {Mode::kForward, Mode::kBackward, Mode::kLateral, Mode::kTurn,
                 Mode::kStand, Mode::kStairs, Mode::kCurved}) {
    if (to_string(m) == s) return m;
  }
  throw InvalidArgument("unknown plan mode '" + std::string(s) + "'");
}

// OccupancyGrid ---------------------------------------------------------------

OccupancyGrid::OccupancyGrid(double resolution, int width, int height,
                             double origin_x, double origin_y)
    : resolution_(resolution),
      width_(width),
      height_(height),
      origin_x_(origin_x),
      origin_y_(origin_y) {
  require_positive(resolution, "grid resolution");
  if (width < 1 || height < 1) {
    throw InvalidArgument("grid dimensions must be at least 1");
  }
  cells_.assign(static_cast<std::size_t>(width) * height, 0);
}

OccupancyGrid OccupancyGrid::empty_centered(double extent, double resolution) {
  const int n = static_cast<int>(std::ceil(extent / resolution));
  return OccupancyGrid(resolution, n, n, -0.5 * n * resolution,
                       -0.5 * n * resolution);
}

bool OccupancyGrid::occupied(int i, int j) const {
  if (i < 0 || j < 0 || i >= width_ || j >= height_) return true;
  return cells_[static_cast<std::size_t>(j) * width_ + i] != 0;
}

void OccupancyGrid::set_occupied(int i, int j, bool value) {
  if (i < 0 || j < 0 || i >= width_ || j >= height_) {
    throw InvalidArgument("cell index out of range");
  }
  cells_[static_cast<std::size_t>(j) * width_ + i] = value ? 1 : 0;
}

bool OccupancyGrid::inside(double x, double y) const {
  const double fx = (x - origin_x_) / resolution_;
  const double fy = (y - origin_y_) / resolution_;
  return fx >= 0.0 && fy >= 0.0 && fx < width_ && fy < height_;
}

bool OccupancyGrid::blocked(double x, double y) const {
  if (!inside(x, y)) return true;
  const int i = static_cast<int>(std::floor((x - origin_x_) / resolution_));
  const int j = static_cast<int>(std::floor((y - origin_y_) / resolution_));
  return occupied(i, j);
}

void OccupancyGrid::fill_box(double x0, double y0, double x1, double y1) {
  for (int j = 0; j < height_; ++j) {
    for (int i = 0; i < width_; ++i) {
      const double cx = origin_x_ + (i + 0.5) * resolution_;
      const double cy = origin_y_ + (j + 0.5) * resolution_;
      if (cx >= x0 && cx <= x1 && cy >= y0 && cy <= y1) set_occupied(i, j);
    }
  }
}

// Generators ------------------------------------------------------------------

FootstepPlan gen_line_plan(Direction direction, double step_length,
                           double foot_spread, int n_steps) {
  require_positive(step_length, "step_length");
  require_positive(foot_spread, "foot_spread");
  if (n_steps < 1) throw InvalidArgument("n_steps must be at least 1");

  FootstepPlan plan;
  plan.foot_spread = foot_spread;
  plan.step_length = step_length;
  plan.steps.reserve(static_cast<std::size_t>(n_steps));

  switch (direction) {
    case Direction::kForward:
    case Direction::kBackward: {
      plan.mode = direction == Direction::kForward ? Mode::kForward
                                                   : Mode::kBackward;
      const double dir = direction == Direction::kForward ? 1.0 : -1.0;
      for (int k = 1; k <= n_steps; ++k) {
        const int sign = (k % 2 == 1) ? -1 : 1;  // right foot first
        plan.steps.push_back({dir * k * step_length, sign * foot_spread, 0.0,
                              0.0, side_of(sign)});
      }
      break;
    }
    case Direction::kLateralLeft:
    case Direction::kLateralRight: {
      // Each foot moves by step_length every other step, leading foot first;
      // each step is offset +-foot_spread from the moving centre line.
      plan.mode = Mode::kLateral;
      const int lead = direction == Direction::kLateralLeft ? 1 : -1;
      for (int k = 1; k <= n_steps; ++k) {
        const int sign = (k % 2 == 1) ? lead : -lead;
        const double centre = lead * ((k + 1) / 2) * step_length;
        plan.steps.push_back(
            {0.0, centre + sign * foot_spread, 0.0, 0.0, side_of(sign)});
      }
      break;
    }
  }
  return plan;
}

FootstepPlan gen_stand() {
  FootstepPlan plan;
  plan.mode = Mode::kStand;
  plan.steps.push_back({0.0, 0.0, 0.0, 0.0, Side::kEither});
  return plan;
}

FootstepPlan gen_turn_in_place(double total_yaw, double yaw_per_step,
                               double foot_spread) {
  require_positive(foot_spread, "foot_spread");
  if (yaw_per_step == 0.0 || !std::isfinite(yaw_per_step)) {
    throw InvalidArgument("yaw_per_step must be non-zero");
  }
  if (std::abs(yaw_per_step) > kPi / 6.0 + 1e-12) {
    throw InvalidArgument("|yaw_per_step| must not exceed pi/6");
  }
  if (total_yaw == 0.0) return gen_stand();
  if ((total_yaw > 0.0) != (yaw_per_step > 0.0)) {
    throw InvalidArgument("total_yaw and yaw_per_step must share a sign");
  }

  const int n =
      static_cast<int>(std::ceil(std::abs(total_yaw / yaw_per_step) - 1e-9));
  const int lead = total_yaw > 0.0 ? 1 : -1;  // lead with the turn-side foot

  FootstepPlan plan;
  plan.mode = Mode::kTurn;
  plan.foot_spread = foot_spread;
  plan.step_length = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double yaw = (k == n) ? total_yaw : k * yaw_per_step;
    const int sign = (k % 2 == 1) ? lead : -lead;
    // Rotate the lateral offset (0, sign*spread) by the step yaw.
    const double x = -std::sin(yaw) * sign * foot_spread;
    const double y = std::cos(yaw) * sign * foot_spread;
    plan.steps.push_back({x, y, 0.0, wrap_angle(yaw), side_of(sign)});
  }
  return plan;
}

FootstepPlan apply_stairs(const FootstepPlan& plan, double rise) {
  if (plan.mode != Mode::kForward && plan.mode != Mode::kStairs) {
    throw InvalidArgument("stairs require a forward line plan");
  }
  if (!std::isfinite(rise)) throw InvalidArgument("rise must be finite");
  if (rise == 0.0) return plan;
  FootstepPlan out = plan;
  out.mode = Mode::kStairs;
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    out.steps[k].z = static_cast<double>(k + 1) * rise;
  }
  return out;
}

Pose2 sample_goal(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double y = -1.0 + 2.0 * unit(rng);
  const double theta = -0.5 * kPi + kPi * unit(rng);
  return {0.0, y, theta};
}

// Serialization ---------------------------------------------------------------

void write_plan(std::ostream& out, const FootstepPlan& plan) {
  out << "steprl-plan 1\n";
  out << "mode " << to_string(plan.mode) << '\n';
  out << "foot_spread " << format_double(plan.foot_spread) << '\n';
  out << "step_length " << format_double(plan.step_length) << '\n';
  out << "steps " << plan.steps.size() << '\n';
  for (const auto& s : plan.steps) {
    out << format_double(s.x) << ' ' << format_double(s.y) << ' '
        << format_double(s.z) << ' ' << format_double(s.heading) << ' '
        << to_string(s.side) << '\n';
  }
}

namespace {

std::string expect_key(std::istream& in, std::string_view key) {
  std::string k, v;
  if (!(in >> k >> v) || k != key) {
    throw InvalidArgument("plan file: expected '" + std::string(key) + "'");
  }
  return v;
}

}  // namespace

FootstepPlan read_plan(std::istream& in) {
  if (expect_key(in, "steprl-plan") != "1") {
    throw InvalidArgument("plan file: unsupported version");
  }
  FootstepPlan plan;
  plan.mode = mode_from_string(expect_key(in, "mode"));
  plan.foot_spread = parse_double(expect_key(in, "foot_spread"));
  plan.step_length = parse_double(expect_key(in, "step_length"));
  const long n = std::stol(expect_key(in, "steps"));
  if (n < 0) throw InvalidArgument("plan file: negative step count");
  plan.steps.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    std::string x, y, z, h, side;
    if (!(in >> x >> y >> z >> h >> side)) {
      throw InvalidArgument("plan file: truncated step list");
    }
    plan.steps.push_back({parse_double(x), parse_double(y), parse_double(z),
                          parse_double(h), side_from_string(side)});
  }
  return plan;
}

void save_plan(const std::string& path, const FootstepPlan& plan) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  write_plan(out, plan);
}

FootstepPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_plan(in);
}

OccupancyGrid read_grid(std::istream& in) {
  const double res = parse_double(expect_key(in, "resolution"));
  const int w = std::stoi(expect_key(in, "width"));
  const int h = std::stoi(expect_key(in, "height"));
  std::string k, ox, oy;
  if (!(in >> k >> ox >> oy) || k != "origin") {
    throw InvalidArgument("grid file: expected 'origin X Y'");
  }
  OccupancyGrid grid(res, w, h, parse_double(ox), parse_double(oy));
  for (int j = 0; j < h; ++j) {
    int i = 0;
    while (i < w) {
      char c = 0;
      if (!(in >> c)) throw InvalidArgument("grid file: truncated cell rows");
      if (c != '0' && c != '1') {
        throw InvalidArgument("grid file: cells must be 0 or 1");
      }
      grid.set_occupied(i, j, c == '1');
      ++i;
    }
  }
  return grid;
}

void write_grid(std::ostream& out, const OccupancyGrid& grid) {
  out << "resolution " << format_double(grid.resolution()) << '\n'
      << "width " << grid.width() << '\n'
      << "height " << grid.height() << '\n'
      << "origin " << format_double(grid.origin_x()) << ' '
      << format_double(grid.origin_y()) << '\n';
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) out << (grid.occupied(i, j) ? '1' : '0');
    out << '\n';
  }
}

OccupancyGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_grid(in);
}

}  // namespace steprl::plan
