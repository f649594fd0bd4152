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

#include <array>

namespace steprl::gait {

/// Gait-cycle timing. One cycle is laid out as
///   DS | SS (left foot swings) | DS | SS (right foot swings)
/// with the second half starting exactly at phase 0.5.
struct GaitSchedule {
  double double_support = 0.35;  // seconds
  double single_support = 0.75;  // seconds
  double control_dt = 0.025;     // seconds
  bool standing = false;
  /// Width (fraction of the cycle) of the cosine ramp at each boundary.
  double ramp_width = 0.05;

  double cycle() const { return 2.0 * (double_support + single_support); }
  double ds_fraction() const { return double_support / cycle(); }

  /// Throws InvalidArgument when durations or ramps do not fit the cycle.
  void validate() const;

  static GaitSchedule hrp5p();
  static GaitSchedule jvrc1();
};

/// (sin 2*pi*phase, cos 2*pi*phase).
std::array<double, 2> clock_encode(double phase);

/// (phase + dt / cycle) mod 1.
double advance(double phase, double dt, double cycle);

struct Indicators {
  double left_grf = 1.0;
  double right_grf = 1.0;
  double left_spd = -1.0;
  double right_spd = -1.0;
};

/// Smoothed phase indicators in [-1, 1]. Swing foot: grf -1, spd +1;
/// support foot: grf +1, spd -1; double support: grf +1, spd -1 for both.
Indicators indicators(double phase, const GaitSchedule& schedule);

/// Phase at the centre of the left-swing single-support segment.
double mid_left_swing(const GaitSchedule& schedule);
/// Phase at the centre of the right-swing single-support segment.
double mid_right_swing(const GaitSchedule& schedule);

/// Largest |dI/dphase| of any indicator for this schedule.
double max_indicator_slope(const GaitSchedule& schedule);

}  // namespace steprl::gait
