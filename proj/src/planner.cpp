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

// Footstep search. The search walks a "centre pose" (midpoint between the
// feet) through a fixed set of stepping primitives; every primitive places
// the next foot at +-foot_spread beside the new centre pose, so a straight
// run of full forward primitives reproduces a forward line plan exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "steprl/common.hpp"
#include "steprl/plan.hpp"

namespace steprl::plan {

namespace {

struct Primitive {
  double dx;
  double dy;
  double dyaw;
  double cost;
};

std::vector<Primitive> make_primitives(const PlannerConfig& c) {
  const double L = c.step_length;
  const double t = c.max_yaw_step;
  const double h = 0.5 * t;
  std::vector<Primitive> p = {
      {L, 0.0, 0.0, 1.0},
      {L, 0.0, h, 1.05},           {L, 0.0, -h, 1.05},
      {0.75 * L, 0.0, t, 1.05},    {0.75 * L, 0.0, -t, 1.05},
      {0.5 * L, 0.0, 0.0, 1.1},
      {0.5 * L, 0.0, h, 1.1},      {0.5 * L, 0.0, -h, 1.1},
      {0.5 * L, 0.0, t, 1.1},      {0.5 * L, 0.0, -t, 1.1},
      {0.25 * L, 0.0, 0.0, 1.2},
      {0.5 * L, 0.5 * L, 0.0, 1.15}, {0.5 * L, -0.5 * L, 0.0, 1.15},
      {0.0, 0.5 * L, 0.0, 1.2},    {0.0, -0.5 * L, 0.0, 1.2},
      {0.0, 0.25 * L, 0.0, 1.2},   {0.0, -0.25 * L, 0.0, 1.2},
      {0.0, 0.5 * L, h, 1.2},      {0.0, 0.5 * L, -h, 1.2},
      {0.0, -0.5 * L, h, 1.2},     {0.0, -0.5 * L, -h, 1.2},
      {0.0, 0.0, t, 1.1},          {0.0, 0.0, -t, 1.1},
      {0.0, 0.0, h, 1.1},          {0.0, 0.0, -h, 1.1},
      {-0.5 * L, 0.0, 0.0, 1.3},   {-0.25 * L, 0.0, 0.0, 1.3},
      {0.0, 0.0, 0.0, 1.25},
  };
  return p;
}

struct Node {
  Pose2 centre;
  int next_sign;  // +1 places the left foot next, -1 the right foot
  double g;
  int parent;
  Footstep step;
};

struct QueueEntry {
  double f;
  std::uint64_t order;
  int node;
  bool operator>(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    return order > o.order;
  }
};

std::int64_t state_key(const Pose2& p, int sign, const PlannerConfig& c) {
  const auto ix = static_cast<std::int64_t>(std::llround(p.x / c.state_resolution));
  const auto iy = static_cast<std::int64_t>(std::llround(p.y / c.state_resolution));
  const double bin = 2.0 * kPi / c.yaw_bins;
  auto it = static_cast<std::int64_t>(std::llround(wrap_angle(p.theta) / bin));
  it = ((it % c.yaw_bins) + c.yaw_bins) % c.yaw_bins;
  // 2^20 cells per axis is ample for any map this planner is asked to solve.
  const std::int64_t off = 1 << 19;
  return ((((ix + off) << 20) | (iy + off)) * c.yaw_bins + it) * 2 + (sign > 0);
}

bool segment_blocked(const OccupancyGrid& grid, double x0, double y0, double x1,
                     double y1) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int n = std::max(1, static_cast<int>(std::ceil(len / (0.5 * grid.resolution()))));
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    if (grid.blocked(x0 + s * (x1 - x0), y0 + s * (y1 - y0))) return true;
  }
  return false;
}

}  // namespace

FootstepPlan plan_curved(const OccupancyGrid& grid, const Pose2& start,
                         const Pose2& goal, const PlannerConfig& config) {
  if (!(config.step_length > 0.0) || !(config.foot_spread > 0.0) ||
      !(config.max_yaw_step > 0.0) || config.yaw_bins < 4 ||
      !(config.state_resolution > 0.0)) {
    throw InvalidArgument("planner configuration out of range");
  }
  if (grid.blocked(start.x, start.y)) {
    throw InvalidArgument("start pose is outside the map or occupied");
  }
  if (grid.blocked(goal.x, goal.y)) {
    throw InvalidArgument("goal pose is outside the map or occupied");
  }

  const auto prims = make_primitives(config);
  const double goal_yaw = wrap_angle(goal.theta);

  auto heuristic = [&](const Pose2& p) {
    const double d = std::hypot(goal.x - p.x, goal.y - p.y);
    const double dyaw = std::abs(wrap_angle(goal_yaw - p.theta));
    const double by_dist = std::max(0.0, d - config.goal_tolerance) / config.step_length;
    const double by_yaw =
        std::max(0.0, dyaw - config.goal_yaw_tolerance) / config.max_yaw_step;
    return std::max(by_dist, by_yaw);
  };
  auto at_goal = [&](const Pose2& p) {
    return std::hypot(goal.x - p.x, goal.y - p.y) <= config.goal_tolerance &&
           std::abs(wrap_angle(goal_yaw - p.theta)) <= config.goal_yaw_tolerance;
  };

  std::vector<Node> nodes;
  nodes.push_back({{start.x, start.y, wrap_angle(start.theta)}, -1, 0.0, -1, {}});
  std::unordered_map<std::int64_t, double> best_g;
  std::unordered_set<std::int64_t> closed;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::uint64_t order = 0;
  open.push({heuristic(nodes[0].centre), order++, 0});

  int goal_node = -1;
  std::size_t expansions = 0;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    const Node cur = nodes[static_cast<std::size_t>(top.node)];
    if (cur.parent >= 0 && at_goal(cur.centre)) {
      goal_node = top.node;
      break;
    }
    const std::int64_t key = state_key(cur.centre, cur.next_sign, config);
    if (top.node != 0) {
      if (!closed.insert(key).second) continue;
    }
    if (++expansions > config.max_expansions) break;

    const double c = std::cos(cur.centre.theta);
    const double s = std::sin(cur.centre.theta);
    for (const auto& pr : prims) {
      Pose2 next;
      next.x = cur.centre.x + c * pr.dx - s * pr.dy;
      next.y = cur.centre.y + s * pr.dx + c * pr.dy;
      next.theta = wrap_angle(cur.centre.theta + pr.dyaw);
      const int sign = cur.next_sign;
      Footstep fs;
      fs.x = next.x - std::sin(next.theta) * sign * config.foot_spread;
      fs.y = next.y + std::cos(next.theta) * sign * config.foot_spread;
      fs.heading = next.theta;
      fs.side = sign > 0 ? Side::kLeft : Side::kRight;
      if (grid.blocked(fs.x, fs.y)) continue;
      if (segment_blocked(grid, cur.centre.x, cur.centre.y, next.x, next.y)) continue;

      const int next_sign = -sign;
      const std::int64_t nkey = state_key(next, next_sign, config);
      if (closed.count(nkey)) continue;
      const double g = cur.g + pr.cost;
      auto it = best_g.find(nkey);
      if (it != best_g.end() && it->second <= g) continue;
      best_g[nkey] = g;
      nodes.push_back({next, next_sign, g, top.node, fs});
      open.push({g + heuristic(next), order++, static_cast<int>(nodes.size() - 1)});
    }
  }

  if (goal_node < 0) {
    throw PlanningFailure("no footstep sequence reaches the goal");
  }

  FootstepPlan plan;
  plan.mode = Mode::kCurved;
  plan.foot_spread = config.foot_spread;
  plan.step_length = config.step_length;
  for (int n = goal_node; nodes[static_cast<std::size_t>(n)].parent >= 0;
       n = nodes[static_cast<std::size_t>(n)].parent) {
    plan.steps.push_back(nodes[static_cast<std::size_t>(n)].step);
  }
  std::reverse(plan.steps.begin(), plan.steps.end());
  return plan;
}

}  // namespace steprl::plan
