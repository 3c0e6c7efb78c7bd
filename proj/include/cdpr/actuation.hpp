// Copyright 2026 The cdpr-sim Authors
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

// Winch drum and stepper pulse compilation.
//
// A drum of radius r turns a natural-length rate into shaft speed
// w = (dlN/dt) / r; positive w pays cable out. A stepper driven at PPR
// pulses per revolution advances 2 pi / PPR rad per pulse. Pulse schedules
// are tables of (interval, frequency, direction) set-points; the step count
// of each interval is the change of the rounded cumulative step phase, so
// rounding error never accumulates.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdpr/dynamics.hpp"
#include "cdpr/types.hpp"

namespace cdpr {

struct ShaftProfile {
  double sample_period = 0.0;
  std::vector<PerCable<double>> speeds;  // rad/s, signed

  double end_time() const;
  // Exact integral of the piecewise-linear speed from 0 to t, rad.
  double rotation(int motor, double t) const;
};

struct PulseSegment {
  double t_start = 0.0;       // s
  double duration = 0.0;      // s, > 0
  double frequency_hz = 0.0;  // >= 0
  bool pay_out = false;       // direction bit: 1 pays cable out
  std::int64_t steps = 0;     // pulses emitted in this segment

  bool operator==(const PulseSegment&) const = default;
};

struct PulseSchedule {
  std::int32_t ppr = 0;
  double control_period = 0.0;
  PerCable<std::vector<PulseSegment>> motors;

  // Signed sum of emitted steps for one motor.
  std::int64_t net_steps(int motor) const;
};

inline constexpr double kDefaultControlPeriod = 1e-3;

// Central differences inside the grid, one-sided at both ends.
// Throws ValidationError on drum_radius <= 0.
ShaftProfile winch_to_shaft(const WinchProfile& winch, double drum_radius);

// Splits every control interval at zero crossings of the speed so each
// segment has a single direction. Throws ValidationError on a PPR outside
// [800, 40000] or control_period <= 0.
PulseSchedule shaft_to_pulses(const ShaftProfile& shaft, std::int32_t ppr,
                              double control_period = kDefaultControlPeriod);

struct LengthSample {
  double t = 0.0;
  double length = 0.0;
};

// Cable length implied by counting pulses: l0 + r (2 pi / PPR) * net steps,
// sampled at t = 0 and at the end of every segment.
PerCable<std::vector<LengthSample>> pulses_to_length(
    const PulseSchedule& schedule, double drum_radius,
    const PerCable<double>& initial_lengths);

enum class LimitKind { kSpeed, kPulseFrequency, kTorque };

std::string to_string(LimitKind kind);

// One contiguous episode above a limit.
struct LimitViolation {
  LimitKind kind = LimitKind::kSpeed;
  int motor = 0;       // 0-based
  double t_start = 0.0;  // s
  double t_end = 0.0;    // s
  double peak = 0.0;
  double limit = 0.0;
};

struct LimitsReport {
  double max_speed_rpm = 0.0;
  double speed_limit_rpm = 0.0;
  double max_frequency_hz = 0.0;
  double frequency_limit_hz = 0.0;
  double max_torque = 0.0;  // N m
  double torque_limit = 0.0;
  std::vector<LimitViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks shaft speed against the RPM rating, pulse frequency against
// (rpm / 60) * PPR and drum torque T_i * r against the torque rating.
// The trace may be empty, in which case torque is not checked.
LimitsReport validate_limits(const PulseSchedule& schedule,
                             const ShaftProfile& shaft, const SimTrace& trace,
                             const MotorSpec& motor, double drum_radius);

}  // namespace cdpr
