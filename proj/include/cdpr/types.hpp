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

// Shared geometric and physical value types for a three-cable suspended
// parallel robot. World frame: origin at the floor centre, z up.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cdpr {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Orientation = Eigen::Quaterniond;

inline constexpr int kNumCables = 3;
inline constexpr double kStandardGravity = 9.8;  // m/s^2

template <typename T>
using PerCable = std::array<T, kNumCables>;

// Fixed frame geometry. Proximal anchors are the pulley exit points.
struct RobotGeometry {
  PerCable<Vector3> proximal_anchors;
  double drum_radius = 0.0;  // m
  double frame_side = 0.0;   // m, informational

  bool operator==(const RobotGeometry&) const = default;
};

// A: three distinct distal anchors on the payload rim.
// B: all cables meet at one point, the centre of mass.
enum class PayloadVariant { kA, kB };

std::string_view to_string(PayloadVariant variant);
PayloadVariant parse_payload_variant(std::string_view text);

struct PayloadSpec {
  double mass = 0.0;                 // kg
  Matrix3 inertia = Matrix3::Zero();  // kg m^2, body frame, about the COM
  PerCable<Vector3> distal_anchors;  // body-frame offsets from the COM, m
  PayloadVariant variant = PayloadVariant::kB;

  bool operator==(const PayloadSpec&) const = default;
};

struct CableSpec {
  double stiffness = 0.0;    // N/m
  double diameter_mm = 0.0;  // informational
  PerCable<double> initial_natural_lengths{};  // m

  bool operator==(const CableSpec&) const = default;
};

struct MotorSpec {
  double max_torque = 0.0;     // N m
  double max_speed_rpm = 0.0;  // RPM
  std::int32_t ppr = 0;        // pulses per revolution

  bool operator==(const MotorSpec&) const = default;
};

inline constexpr std::int32_t kMinPpr = 800;
inline constexpr std::int32_t kMaxPpr = 40000;

struct Pose {
  Vector3 position = Vector3::Zero();
  Orientation orientation = Orientation::Identity();
};

// Angular velocity is expressed in the body frame.
struct PayloadState {
  Vector3 position = Vector3::Zero();
  Vector3 velocity = Vector3::Zero();
  Orientation orientation = Orientation::Identity();
  Vector3 angular_velocity = Vector3::Zero();

  Pose pose() const { return {position, orientation}; }
};

// Solid cylinder about its centroid, axis along body z.
Matrix3 solid_cylinder_inertia(double mass, double radius, double height);

}  // namespace cdpr
