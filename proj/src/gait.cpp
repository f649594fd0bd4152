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

#include "steprl/gait.hpp"

#include <cmath>

#include "steprl/common.hpp"

namespace steprl::gait {

void GaitSchedule::validate() const {
  if (!(control_dt > 0.0)) throw InvalidArgument("control_dt must be positive");
  if (!(ramp_width > 0.0) || ramp_width >= 0.5) {
    throw InvalidArgument("ramp_width must lie in (0, 0.5)");
  }
  if (standing) return;
  if (!(double_support > 0.0) || !(single_support > 0.0)) {
    throw InvalidArgument("support durations must be positive");
  }
  const double ds = ds_fraction();
  const double ss = 0.5 - ds;
  if (ds < ramp_width || ss < ramp_width) {
    throw InvalidArgument("each gait segment must be at least one ramp wide");
  }
}

GaitSchedule GaitSchedule::hrp5p() {
  GaitSchedule s;
  s.double_support = 0.35;
  s.single_support = 0.75;
  return s;
}

GaitSchedule GaitSchedule::jvrc1() {
  GaitSchedule s;
  s.double_support = 0.20;
  s.single_support = 0.80;
  return s;
}

std::array<double, 2> clock_encode(double phase) {
  const double a = 2.0 * kPi * phase;
  return {std::sin(a), std::cos(a)};
}

double advance(double phase, double dt, double cycle) {
  double p = std::fmod(phase + dt / cycle, 1.0);
  if (p < 0.0) p += 1.0;
  if (p >= 1.0) p = 0.0;
  return p;
}

namespace {

// Value of a +1/-1 step rising (or falling) through `boundary`, smoothed by a
// cosine ramp of total width w centred on the boundary. `from` is the value
// before the boundary.
double ramp(double phase, double boundary, double w, double from) {
  const double s = (phase - (boundary - 0.5 * w)) / w;
  if (s <= 0.0) return from;
  if (s >= 1.0) return -from;
  const double blend = 0.5 * (1.0 - std::cos(kPi * s));
  return from + (-from - from) * blend;
}

// Left-foot GRF indicator: +1 outside [ds, 0.5), -1 inside, ramps at both
// boundaries. Both boundaries are interior to (0, 1), so no wrap handling.
double left_grf(double phase, double ds, double w) {
  if (phase < 0.5 * (ds + 0.5)) return ramp(phase, ds, w, 1.0);
  return ramp(phase, 0.5, w, -1.0);
}

}  // namespace

Indicators indicators(double phase, const GaitSchedule& schedule) {
  Indicators out;
  if (schedule.standing) return out;  // double support everywhere
  const double ds = schedule.ds_fraction();
  const double w = schedule.ramp_width;
  double p = std::fmod(phase, 1.0);
  if (p < 0.0) p += 1.0;
  double q = p + 0.5;
  if (q >= 1.0) q -= 1.0;
  out.left_grf = left_grf(p, ds, w);
  out.right_grf = left_grf(q, ds, w);
  out.left_spd = -out.left_grf;
  out.right_spd = -out.right_grf;
  return out;
}

double mid_left_swing(const GaitSchedule& schedule) {
  return 0.5 * (schedule.ds_fraction() + 0.5);
}

double mid_right_swing(const GaitSchedule& schedule) {
  return 0.5 + mid_left_swing(schedule);
}

double max_indicator_slope(const GaitSchedule& schedule) {
  if (schedule.standing) return 0.0;
  // d/ds of 2*(1-cos(pi s))/2 peaks at pi; chain rule divides by the width.
  return kPi / schedule.ramp_width;
}

}  // namespace steprl::gait
