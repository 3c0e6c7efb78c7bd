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

// Rig configuration: the reference rig, JSON loading/saving and validation.
//
// The configuration file is JSON with five optional sections. Every key is
// optional; missing keys take the reference-rig value (see README.md for the
// full key list):
//
//   {
//     "geometry": {"proximal_anchors": [[x,y,z],[x,y,z],[x,y,z]],
//                  "drum_radius": 0.02, "frame_side": 1.0},
//     "payload":  {"variant": "A", "mass": 1.5,
//                  "inertia": [[..],[..],[..]], "distal_anchors": [[..],..],
//                  "cylinder_radius": 0.05, "cylinder_height": 0.1},
//     "cable":    {"stiffness": 7e4, "diameter_mm": 0.9,
//                  "natural_lengths": [l1, l2, l3]},
//     "motor":    {"max_torque": 3.0, "max_speed_rpm": 1200, "ppr": 800},
//     "sim":      {"dt": 1e-4, "damping": 0.0, "gravity": 9.8, ...}
//   }

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cdpr/types.hpp"

namespace cdpr {

struct SimSettings {
  double dt = 1e-4;              // s, integrator step
  double damping = 0.0;          // N s/m on payload translational velocity
  double gravity = kStandardGravity;
  double settle_time = 1.0;      // s simulated after a maneuver ends
  std::int32_t decimation = 10;  // trace keeps every n-th step
  double plan_sample_period = 1e-3;  // s
  double control_period = 1e-3;      // s, pulse frequency update rate
  Vector3 vertical_start{0.0, 0.0, 0.3};
  Vector3 horizontal_start{0.0, 0.0, 0.5};
  Vector3 horizontal_direction{1.0, 0.0, 0.0};
  double pendulum_length = 0.129;  // m, anchor point to payload COM

  bool operator==(const SimSettings&) const = default;
};

struct RigConfig {
  RobotGeometry geometry;
  PayloadSpec payload;
  CableSpec cable;
  MotorSpec motor;
  SimSettings sim;

  bool operator==(const RigConfig&) const = default;
};

// Reference rig: 1 m cubic frame, anchors on an equilateral triangle of
// circumradius 0.45 m at z = 1 m, drum radius 0.02 m, Dyneema cable
// k = 7e4 N/m, 3 N m / 1200 RPM steppers at 800 PPR.
// Payload A is a 1.5 kg cylinder with rim anchors; payload B weighs 2.7 kg.
RigConfig default_rig(PayloadVariant variant = PayloadVariant::kA);

// Payload presets used by default_rig.
PayloadSpec payload_a(double mass = 1.5, double radius = 0.05,
                      double height = 0.1);
PayloadSpec payload_b(double mass = 2.7, double radius = 0.05,
                      double height = 0.1);

inline constexpr double kAnchorCircumradius = 0.45;
inline constexpr double kAnchorHeight = 1.0;

// Throws ParseError or ValidationError.
RigConfig parse_config(std::string_view json_text);
RigConfig load_config(const std::filesystem::path& path);

std::string serialize_config(const RigConfig& config);

// Each throws ValidationError naming the violated invariant.
void validate(const RobotGeometry& geometry);
void validate(const PayloadSpec& payload);
void validate(const CableSpec& cable);
void validate(const MotorSpec& motor);
void validate(const SimSettings& sim);
void validate(const RigConfig& config);

}  // namespace cdpr
