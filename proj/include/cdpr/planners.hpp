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

// Open-loop maneuver laws and their conversion to winch profiles.
//
// Vertical transfer:
//   constant  - payload rises at distance / duration.
//   sinusoidal - a(t) = A (1 - cos(4 pi t / T)) on [0, T/2], mirrored
//                negative on (T/2, T], A = 4 d / T^2. For d = 0.5 m and
//                T = 1 s this is a(t) = 2 - 2 cos(4 pi t).
//
// Horizontal transfer of a hanging payload (pendulum of length l about the
// cable anchor point x):
//   constant  - anchor point moves at distance / duration.
//   pendulum  - the swing angle follows
//                 theta(t) = -2 p sin(pi u) + p sin(2 pi u),  u = 2 t / T,
//               and the anchor point satisfies the linearized pendulum
//                 x'' = -l theta'' - g theta
//               integrated from rest. theta(T) = theta'(T) = 0, so the
//               payload stops without swinging. Integrating twice gives
//                 x(T) = 3 g p T^2 / (4 pi),
//               independent of l.

#pragma once

#include <optional>
#include <vector>

#include "cdpr/dynamics.hpp"
#include "cdpr/types.hpp"

namespace cdpr {

enum class ReferencePoint {
  kPayloadCentre,  // plan positions are the payload centre of mass
  kCableAnchor,    // plan positions are the cable anchor point on the payload
};

struct MotionPlan {
  double sample_period = 0.0;  // s
  double duration = 0.0;       // s
  ReferencePoint reference = ReferencePoint::kPayloadCentre;
  std::vector<Vector3> positions;
  std::vector<Vector3> velocities;
  std::vector<Vector3> accelerations;

  std::size_t size() const { return positions.size(); }
  double time(std::size_t i) const {
    return static_cast<double>(i) * sample_period;
  }
};

struct PendulumParams {
  double mass = 2.7;     // kg
  double length = 0.129;  // m
  double gravity = kStandardGravity;
  double amplitude = 0.0;  // p, dimensionless
};

enum class AmplitudeMode {
  kSolved,  // p chosen so the anchor point travels exactly `distance`
  kFixed,   // p = 0.2 pi / g regardless of distance
};

inline constexpr double kDefaultPlanSamplePeriod = 1e-3;

// Constant-velocity vertical rise. Velocity is distance / duration on the
// open interval and zero at the two rest samples (the law is discontinuous
// at the ends). Throws ValidationError on duration <= 0.
MotionPlan plan_vertical_constant(double distance, double duration,
                                  const Vector3& start,
                                  double sample_period = kDefaultPlanSamplePeriod);

// Rest-to-rest vertical rise with the raised-cosine acceleration law.
MotionPlan plan_vertical_sinusoidal(double distance, double duration,
                                    const Vector3& start,
                                    double sample_period = kDefaultPlanSamplePeriod);

// Vertical acceleration of the sinusoidal law at time t.
double sinusoidal_acceleration(double t, double distance, double duration);

// Constant-velocity horizontal move of the cable anchor point. Throws
// ValidationError unless `direction` is a horizontal unit vector.
MotionPlan plan_horizontal_constant(double distance, double duration,
                                    const Vector3& start,
                                    const Vector3& direction,
                                    double sample_period = kDefaultPlanSamplePeriod);

struct SwingAngle {
  double angle = 0.0;         // rad
  double rate = 0.0;          // rad/s
  double acceleration = 0.0;  // rad/s^2
};

// Swing-angle law and its time derivatives on [0, duration]. Throws
// ValidationError for t outside the interval or duration <= 0.
SwingAngle pendulum_theta(double t, double amplitude, double duration);

// p such that the pendulum law moves the anchor point by `distance` in
// `duration`: p = 4 pi d / (3 g T^2). The pendulum length cancels.
double solve_pendulum_amplitude(double distance, double duration,
                                double length, double gravity);

// Amplitude used by AmplitudeMode::kFixed.
double fixed_pendulum_amplitude(double gravity);

// Anchor-point displacement along the move direction and its derivatives.
struct AnchorMotion {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
};
AnchorMotion pendulum_anchor_motion(double t, const PendulumParams& params,
                                    double duration);

// Anti-swing horizontal move. params.amplitude is overwritten according to
// `mode`; the amplitude actually used is returned through `used_amplitude`
// when non-null.
MotionPlan plan_horizontal_pendulum(double distance, double duration,
                                    PendulumParams params,
                                    const Vector3& start,
                                    const Vector3& direction,
                                    AmplitudeMode mode = AmplitudeMode::kSolved,
                                    double sample_period = kDefaultPlanSamplePeriod,
                                    double* used_amplitude = nullptr);

// Natural-length profile realizing a plan with the payload held level:
// lN_i = l_i(pose) - pretension_i / k. Without an explicit pretension the
// static tensions at the first plan pose are used. Throws WorkspaceError
// naming the sample time when a pose leaves the workspace or the start
// pose cannot be held statically.
WinchProfile plan_to_winch(const MotionPlan& plan,
                           const RobotGeometry& geometry,
                           const PayloadSpec& payload, const CableSpec& cable,
                           std::optional<PerCable<double>> pretension = {},
                           double gravity = kStandardGravity);

}  // namespace cdpr
