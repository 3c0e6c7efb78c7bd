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

#include "cdpr/planners.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"

namespace cdpr {
namespace {

using std::numbers::pi;

void check_timing(double duration, double sample_period) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("maneuver duration must be positive");
  }
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw ValidationError("plan sample period must be positive");
  }
}

void check_horizontal_direction(const Vector3& direction) {
  if (!direction.allFinite() || std::abs(direction.z()) > 1e-9 ||
      std::abs(direction.norm() - 1.0) > 1e-9) {
    throw ValidationError("move direction must be a horizontal unit vector");
  }
}

// Samples t_i = i * period for i = 0..n with the last sample landing exactly
// on `duration`.
std::size_t interval_count(double duration, double sample_period) {
  return static_cast<std::size_t>(
      std::max(1.0, std::round(duration / sample_period)));
}

struct ScalarMotion {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
};

template <typename Law>
MotionPlan sample_plan(double duration, double sample_period,
                       const Vector3& start, const Vector3& axis,
                       ReferencePoint reference, Law&& law) {
  const std::size_t n = interval_count(duration, sample_period);
  MotionPlan plan;
  plan.duration = duration;
  plan.sample_period = duration / static_cast<double>(n);
  plan.reference = reference;
  plan.positions.reserve(n + 1);
  plan.velocities.reserve(n + 1);
  plan.accelerations.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t =
        i == n ? duration : static_cast<double>(i) * plan.sample_period;
    const ScalarMotion m = law(t);
    plan.positions.push_back(start + m.position * axis);
    plan.velocities.push_back(m.velocity * axis);
    plan.accelerations.push_back(m.acceleration * axis);
  }
  return plan;
}

ScalarMotion constant_velocity(double t, double distance, double duration) {
  ScalarMotion m;
  m.position = distance * t / duration;
  m.velocity = (t > 0.0 && t < duration) ? distance / duration : 0.0;
  return m;
}

ScalarMotion raised_cosine(double t, double distance, double duration) {
  const double amplitude = 4.0 * distance / (duration * duration);
  const double w = 4.0 * pi / duration;
  const double half = 0.5 * duration;
  ScalarMotion m;
  if (t <= half) {
    m.acceleration = amplitude * (1.0 - std::cos(w * t));
    m.velocity = amplitude * (t - std::sin(w * t) / w);
    m.position = amplitude * (0.5 * t * t - (1.0 - std::cos(w * t)) / (w * w));
  } else {
    const double tau = t - half;
    m.acceleration = -amplitude * (1.0 - std::cos(w * tau));
    m.velocity = amplitude * half - amplitude * (tau - std::sin(w * tau) / w);
    m.position = amplitude * half * half / 2.0 + amplitude * half * tau -
                 amplitude * (0.5 * tau * tau -
                              (1.0 - std::cos(w * tau)) / (w * w));
  }
  return m;
}

}  // namespace

MotionPlan plan_vertical_constant(double distance, double duration,
                                  const Vector3& start, double sample_period) {
  check_timing(duration, sample_period);
  return sample_plan(duration, sample_period, start, Vector3::UnitZ(),
                     ReferencePoint::kPayloadCentre, [&](double t) {
                       return constant_velocity(t, distance, duration);
                     });
}

double sinusoidal_acceleration(double t, double distance, double duration) {
  return raised_cosine(t, distance, duration).acceleration;
}

MotionPlan plan_vertical_sinusoidal(double distance, double duration,
                                    const Vector3& start,
                                    double sample_period) {
  check_timing(duration, sample_period);
  return sample_plan(duration, sample_period, start, Vector3::UnitZ(),
                     ReferencePoint::kPayloadCentre, [&](double t) {
                       return raised_cosine(t, distance, duration);
                     });
}

MotionPlan plan_horizontal_constant(double distance, double duration,
                                    const Vector3& start,
                                    const Vector3& direction,
                                    double sample_period) {
  check_timing(duration, sample_period);
  check_horizontal_direction(direction);
  return sample_plan(duration, sample_period, start, direction,
                     ReferencePoint::kCableAnchor, [&](double t) {
                       return constant_velocity(t, distance, duration);
                     });
}

SwingAngle pendulum_theta(double t, double amplitude, double duration) {
  if (!(duration > 0.0)) {
    throw ValidationError("maneuver duration must be positive");
  }
  const double slack = 1e-12 * duration;
  if (!(t >= -slack && t <= duration + slack)) {
    throw ValidationError(
        fmt::format("t = {} s is outside [0, {}] s", t, duration));
  }
  // u = 2 t / T maps the maneuver onto the law's native [0, 2] s window.
  const double rate = 2.0 / duration;
  const double u = rate * t;
  const double a = pi * u;
  const double p = amplitude;
  SwingAngle out;
  out.angle = -2.0 * p * std::sin(a) + p * std::sin(2.0 * a);
  out.rate = rate * pi * (-2.0 * p * std::cos(a) + 2.0 * p * std::cos(2.0 * a));
  out.acceleration = rate * rate * pi * pi *
                     (2.0 * p * std::sin(a) - 4.0 * p * std::sin(2.0 * a));
  return out;
}

double solve_pendulum_amplitude(double distance, double duration,
                                double /*length*/, double gravity) {
  if (!(duration > 0.0)) {
    throw ValidationError("maneuver duration must be positive");
  }
  if (!(gravity > 0.0)) throw ValidationError("gravity must be positive");
  return 4.0 * pi * distance / (3.0 * gravity * duration * duration);
}

double fixed_pendulum_amplitude(double gravity) { return 0.2 * pi / gravity; }

AnchorMotion pendulum_anchor_motion(double t, const PendulumParams& params,
                                    double duration) {
  const SwingAngle theta = pendulum_theta(t, params.amplitude, duration);
  const double half = 0.5 * duration;
  const double u = t / half;
  const double p = params.amplitude;
  const double l = params.length;
  const double g = params.gravity;
  // First and second time integrals of theta from 0.
  const double first =
      half * ((2.0 * p / pi) * (std::cos(pi * u) - 1.0) -
              (p / (2.0 * pi)) * (std::cos(2.0 * pi * u) - 1.0));
  const double second =
      half * half *
      ((2.0 * p / pi) * (std::sin(pi * u) / pi - u) -
       (p / (2.0 * pi)) * (std::sin(2.0 * pi * u) / (2.0 * pi) - u));
  AnchorMotion m;
  m.acceleration = -l * theta.acceleration - g * theta.angle;
  m.velocity = -l * theta.rate - g * first;
  m.position = -l * theta.angle - g * second;
  return m;
}

MotionPlan plan_horizontal_pendulum(double distance, double duration,
                                    PendulumParams params,
                                    const Vector3& start,
                                    const Vector3& direction,
                                    AmplitudeMode mode, double sample_period,
                                    double* used_amplitude) {
  check_timing(duration, sample_period);
  check_horizontal_direction(direction);
  if (!(params.length > 0.0) || !(params.gravity > 0.0)) {
    throw ValidationError("pendulum length and gravity must be positive");
  }
  params.amplitude =
      mode == AmplitudeMode::kSolved
          ? solve_pendulum_amplitude(distance, duration, params.length,
                                     params.gravity)
          : fixed_pendulum_amplitude(params.gravity);
  if (used_amplitude != nullptr) *used_amplitude = params.amplitude;

  MotionPlan plan = sample_plan(
      duration, sample_period, start, direction, ReferencePoint::kCableAnchor,
      [&](double t) {
        const AnchorMotion m = pendulum_anchor_motion(t, params, duration);
        return ScalarMotion{m.position, m.velocity, m.acceleration};
      });
  // The law is rest-to-rest; remove round-off at the closing sample.
  plan.velocities.back().setZero();
  plan.accelerations.back().setZero();
  return plan;
}

WinchProfile plan_to_winch(const MotionPlan& plan,
                           const RobotGeometry& geometry,
                           const PayloadSpec& payload, const CableSpec& cable,
                           std::optional<PerCable<double>> pretension,
                           double gravity) {
  if (plan.size() == 0) throw ValidationError("motion plan is empty");
  if (!(cable.stiffness > 0.0)) {
    throw ValidationError("cable stiffness must be positive");
  }
  if (!pretension) {
    const Pose start{plan.positions.front(), Orientation::Identity()};
    const StaticTensions statics =
        static_tensions(start, geometry, payload, gravity);
    if (!statics.feasible) {
      throw WorkspaceError("plan start pose cannot be held statically");
    }
    pretension = statics.tensions;
  }

  std::vector<PerCable<double>> samples;
  samples.reserve(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const Pose pose{plan.positions[k], Orientation::Identity()};
    PerCable<double> lengths{};
    try {
      lengths = inverse_kinematics(pose, geometry, payload);
    } catch (const std::runtime_error& e) {
      throw WorkspaceError(
          fmt::format("plan sample at t = {:.6f} s: {}", plan.time(k), e.what()));
    }
    PerCable<double> natural{};
    for (int i = 0; i < kNumCables; ++i) {
      natural[i] = lengths[i] - (*pretension)[i] / cable.stiffness;
    }
    samples.push_back(natural);
  }
  return WinchProfile(plan.sample_period, std::move(samples));
}

}  // namespace cdpr
