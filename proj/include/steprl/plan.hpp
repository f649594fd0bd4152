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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace steprl::plan {

enum class Side { kLeft, kRight, kEither };

enum class Mode { kForward, kBackward, kLateral, kTurn, kStand, kStairs, kCurved };

enum class Direction { kForward, kBackward, kLateralLeft, kLateralRight };

std::string_view to_string(Side s);
std::string_view to_string(Mode m);
Side side_from_string(std::string_view s);
Mode mode_from_string(std::string_view s);

/// Oriented step target. `heading` is the desired root yaw once the step is
/// the active target, not the foot yaw.
struct Footstep {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double heading = 0.0;
  Side side = Side::kEither;

  friend bool operator==(const Footstep&, const Footstep&) = default;
};

struct FootstepPlan {
  std::vector<Footstep> steps;
  Mode mode = Mode::kStand;
  double foot_spread = 0.0;
  double step_length = 0.0;

  bool is_stand() const { return mode == Mode::kStand; }
  std::size_t size() const { return steps.size(); }

  friend bool operator==(const FootstepPlan&, const FootstepPlan&) = default;
};

/// Planar pose (x, y, yaw).
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Binary occupancy map. Cell (i, j) covers
/// [origin.x + i*res, origin.x + (i+1)*res) x [origin.y + j*res, ...).
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, int width, int height, double origin_x = 0.0,
                double origin_y = 0.0);

  /// Square empty map of side `extent` metres centred on the world origin.
  static OccupancyGrid empty_centered(double extent, double resolution);

  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }

  bool occupied(int i, int j) const;
  void set_occupied(int i, int j, bool value = true);

  /// True when (x, y) falls outside the map or on an occupied cell.
  bool blocked(double x, double y) const;
  bool inside(double x, double y) const;

  /// Fills every cell whose centre lies in the axis-aligned world box.
  void fill_box(double x0, double y0, double x1, double y1);

 private:
  double resolution_;
  int width_;
  int height_;
  double origin_x_;
  double origin_y_;
  std::vector<std::uint8_t> cells_;
};

// Generators ------------------------------------------------------------------

/// Straight line plan. Step k (1-based) sits k*step_length along the
/// direction, alternately right and left of the axis by foot_spread. Every
/// heading stays 0, so backward and lateral plans keep facing forward.
FootstepPlan gen_line_plan(Direction direction, double step_length,
                           double foot_spread, int n_steps);

/// Quiet standing: a single step at the origin.
FootstepPlan gen_stand();

/// Turning in place on a circle of radius foot_spread around the origin.
FootstepPlan gen_turn_in_place(double total_yaw, double yaw_per_step,
                               double foot_spread);

/// Raises step k (1-based) of a forward line plan to k*rise.
FootstepPlan apply_stairs(const FootstepPlan& plan, double rise);

struct PlannerConfig {
  double step_length = 0.35;
  double foot_spread = 0.15;
  double max_yaw_step = 0.39269908169872414;  // pi/8
  double goal_tolerance = 0.1;                 // metres
  double goal_yaw_tolerance = 0.17453292519943295;  // 10 degrees
  double state_resolution = 0.05;
  int yaw_bins = 64;
  std::size_t max_expansions = 2'000'000;
};

/// Search-based footstep planner over (x, y, yaw, support foot).
FootstepPlan plan_curved(const OccupancyGrid& grid, const Pose2& start,
                         const Pose2& goal, const PlannerConfig& config = {});

/// Uniform goal in the box (0, -1, -pi/2) .. (0, 1, pi/2).
Pose2 sample_goal(std::uint64_t seed);

// Serialization ---------------------------------------------------------------

void write_plan(std::ostream& out, const FootstepPlan& plan);
FootstepPlan read_plan(std::istream& in);
void save_plan(const std::string& path, const FootstepPlan& plan);
FootstepPlan load_plan(const std::string& path);

/// Grid text format: `resolution R`, `width W`, `height H`, `origin X Y`
/// header lines, then H rows of W 0/1 digits (row j = cell row j).
OccupancyGrid read_grid(std::istream& in);
void write_grid(std::ostream& out, const OccupancyGrid& grid);
OccupancyGrid load_grid(const std::string& path);

}  // namespace steprl::plan
