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
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace steprl {

inline constexpr double kPi = std::numbers::pi;

// Error hierarchy. Every failure surfaced by the library derives from Error so
// callers can catch one type; the subclasses name the failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class PlanningFailure : public Error {
 public:
  using Error::Error;
};

class SimulationDiverged : public Error {
 public:
  using Error::Error;
};

class InfeasiblePlan : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

/// Raised when a PPO iteration produces a non-finite loss.
class AbortIteration : public Error {
 public:
  using Error::Error;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Derives a child seed from a parent seed and up to two stream indices.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a,
                          std::uint64_t b = 0);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict double parse; throws InvalidArgument on trailing garbage.
double parse_double(std::string_view s);

/// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace steprl
