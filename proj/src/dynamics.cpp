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

#include "cdpr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"

namespace cdpr {

// --- WinchProfile -------------------------------------------------------------

WinchProfile::WinchProfile(double sample_period,
                           std::vector<PerCable<double>> samples)
    : sample_period_(sample_period), samples_(std::move(samples)) {
  if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
    throw ValidationError("winch sample period must be positive");
  }
  if (samples_.empty()) throw ValidationError("winch profile is empty");
  for (const auto& sample : samples_) {
    for (double l : sample) {
      if (!(l > 0.0) || !std::isfinite(l)) {
        throw ValidationError("winch natural lengths must be positive");
      }
    }
  }
}

WinchProfile WinchProfile::constant(const PerCable<double>& lengths,
                                    double duration, double sample_period) {
  const auto intervals = static_cast<std::size_t>(
      std::max(1.0, std::ceil(duration / sample_period - 1e-9)));
  return WinchProfile(sample_period,
                      std::vector<PerCable<double>>(intervals + 1, lengths));
}

double WinchProfile::end_time() const {
  return samples_.empty()
             ? 0.0
             : static_cast<double>(samples_.size() - 1) * sample_period_;
}

PerCable<double> WinchProfile::at(double t) const {
  if (samples_.empty()) throw ValidationError("winch profile is empty");
  if (t <= 0.0) return samples_.front();
  const double position = t / sample_period_;
  const auto index = static_cast<std::size_t>(std::floor(position));
  if (index + 1 >= samples_.size()) return samples_.back();
  const double frac = position - static_cast<double>(index);
  PerCable<double> out{};
  for (int i = 0; i < kNumCables; ++i) {
    out[i] = samples_[index][i] +
             frac * (samples_[index + 1][i] - samples_[index][i]);
  }
  return out;
}

WinchProfile WinchProfile::extended_to(double duration) const {
  std::vector<PerCable<double>> samples = samples_;
  while (static_cast<double>(samples.size() - 1) * sample_period_ <
         duration - 1e-12) {
    samples.push_back(samples_.back());
  }
  return WinchProfile(sample_period_, std::move(samples));
}

// --- model --------------------------------------------------------------------

double cable_tension(double length, double natural_length, double stiffness) {
  return length >= natural_length ? stiffness * (length - natural_length)
                                  : 0.0;
}

namespace {

struct CableLoads {
  CableGeometry geometry;
  PerCable<double> tensions{};
};

CableLoads evaluate_cables(const PayloadState& state,
                           const PerCable<double>& natural_lengths,
                           const RobotGeometry& geometry,
                           const PayloadSpec& payload, const CableSpec& cable) {
  CableLoads loads{cable_geometry(state, geometry, payload), {}};
  for (int i = 0; i < kNumCables; ++i) {
    loads.tensions[i] = cable_tension(loads.geometry.lengths[i],
                                      natural_lengths[i], cable.stiffness);
  }
  return loads;
}

// q_dot = 1/2 q (x) (0, w) with w in the body frame.
Eigen::Vector4d quaternion_rate(const Orientation& q, const Vector3& omega) {
  const Orientation rate =
      q * Orientation(0.0, omega.x(), omega.y(), omega.z());
  return 0.5 * Eigen::Vector4d(rate.w(), rate.x(), rate.y(), rate.z());
}

// Flat layout: p(3) v(3) q(4: w x y z) w(3).
using FlatState = Eigen::Matrix<double, 13, 1>;

FlatState flatten(const PayloadState& s) {
  FlatState x;
  x << s.position, s.velocity, s.orientation.w(), s.orientation.x(),
      s.orientation.y(), s.orientation.z(), s.angular_velocity;
  return x;
}

PayloadState unflatten(const FlatState& x) {
  PayloadState s;
  s.position = x.segment<3>(0);
  s.velocity = x.segment<3>(3);
  s.orientation = Orientation(x[6], x[7], x[8], x[9]);
  s.angular_velocity = x.segment<3>(10);
  return s;
}

FlatState flatten(const StateDerivative& d) {
  FlatState x;
  x << d.velocity, d.acceleration, d.orientation_rate, d.angular_acceleration;
  return x;
}

}  // namespace

StateDerivative dynamics_rhs(const PayloadState& state,
                             const PerCable<double>& natural_lengths,
                             const RobotGeometry& geometry,
                             const PayloadSpec& payload,
                             const CableSpec& cable, const SimParams& params) {
  const CableLoads loads =
      evaluate_cables(state, natural_lengths, geometry, payload, cable);

  Vector3 force(0.0, 0.0, -payload.mass * params.gravity);
  force -= params.damping * state.velocity;
  Vector3 torque_world = Vector3::Zero();
  for (int i = 0; i < kNumCables; ++i) {
    const Vector3 pull = -loads.geometry.directions[i] * loads.tensions[i];
    force += pull;
    torque_world += loads.geometry.anchor_offsets[i].cross(pull);
  }

  const Matrix3 rotation = state.orientation.toRotationMatrix();
  const Vector3& omega = state.angular_velocity;
  const Vector3 torque_body = rotation.transpose() * torque_world;
  const Vector3 gyroscopic = omega.cross(payload.inertia * omega);

  StateDerivative d;
  d.velocity = state.velocity;
  d.acceleration = force / payload.mass;
  d.orientation_rate = quaternion_rate(state.orientation, omega);
  d.angular_acceleration = payload.inertia.ldlt().solve(torque_body - gyroscopic);
  return d;
}

double max_stable_dt(const CableSpec& cable, const PayloadSpec& payload) {
  return 0.05 * 2.0 * std::numbers::pi /
         std::sqrt(cable.stiffness / payload.mass);
}

SimTrace integrate(const PayloadState& initial_state,
                   const WinchProfile& winch, const RobotGeometry& geometry,
                   const PayloadSpec& payload, const CableSpec& cable,
                   const SimParams& params) {
  if (!(params.dt > 0.0) || !std::isfinite(params.dt)) {
    throw ValidationError("dt must be positive");
  }
  if (!(params.duration >= 0.0) || !std::isfinite(params.duration)) {
    throw ValidationError("duration must be non-negative");
  }
  if (!(params.damping >= 0.0)) {
    throw ValidationError("damping must be non-negative");
  }
  if (params.decimation == 0) {
    throw ValidationError("decimation must be at least 1");
  }
  const double dt_limit = max_stable_dt(cable, payload);
  if (params.dt > dt_limit) {
    throw ValidationError(fmt::format(
        "dt = {} s is too large for cable stiffness (limit {:.3g} s)",
        params.dt, dt_limit));
  }
  if (winch.size() == 0 || winch.end_time() < params.duration - 1e-9) {
    throw ValidationError(fmt::format(
        "winch profile ends at {} s, before the simulation end {} s",
        winch.end_time(), params.duration));
  }

  const auto steps = static_cast<std::size_t>(
      std::ceil(params.duration / params.dt - 1e-9));

  SimTrace trace;
  trace.reserve(steps / params.decimation + 2);

  auto record = [&](double t, const PayloadState& state) {
    const PerCable<double> natural = winch.at(t);
    const CableLoads loads =
        evaluate_cables(state, natural, geometry, payload, cable);
    trace.push_back({t, state, loads.tensions, loads.geometry.lengths,
                     natural});
  };

  auto rhs = [&](double t, const FlatState& x) {
    return flatten(dynamics_rhs(unflatten(x), winch.at(t), geometry, payload,
                                cable, params));
  };

  PayloadState state = initial_state;
  state.orientation.normalize();
  double t = 0.0;
  try {
    record(t, state);
    FlatState x = flatten(state);
    for (std::size_t n = 1; n <= steps; ++n) {
      const double h = params.dt;
      const FlatState k1 = rhs(t, x);
      const FlatState k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
      const FlatState k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
      const FlatState k4 = rhs(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      x.segment<4>(6).normalize();
      t = static_cast<double>(n) * h;
      if (n % params.decimation == 0 || n == steps) record(t, unflatten(x));
    }
  } catch (const DegenerateCableError& e) {
    throw DegenerateCableError(
        e.cable_index(), fmt::format("{} at t = {:.6f} s", e.what(), t));
  }
  return trace;
}

double energy(const PayloadState& state, const RobotGeometry& geometry,
              const PayloadSpec& payload, const CableSpec& cable,
              const PerCable<double>& natural_lengths, double gravity) {
  const Vector3& omega = state.angular_velocity;
  double e = 0.5 * payload.mass * state.velocity.squaredNorm() +
             0.5 * omega.dot(payload.inertia * omega) +
             payload.mass * gravity * state.position.z();
  const CableGeometry cables = cable_geometry(state, geometry, payload);
  for (int i = 0; i < kNumCables; ++i) {
    const double stretch = std::max(cables.lengths[i] - natural_lengths[i], 0.0);
    e += 0.5 * cable.stiffness * stretch * stretch;
  }
  return e;
}

double residual_oscillation(const SimTrace& trace, double t_settle) {
  // Deviations are taken from the first window sample so a constant signal
  // yields exactly zero.
  const TraceSample* origin = nullptr;
  Vector3 sum = Vector3::Zero();
  std::size_t count = 0;
  for (const TraceSample& s : trace) {
    if (s.t >= t_settle) {
      if (origin == nullptr) origin = &s;
      sum += s.state.position - origin->state.position;
      ++count;
    }
  }
  if (count == 0) {
    throw ValidationError(
        fmt::format("no trace samples at or after t = {} s", t_settle));
  }
  const Vector3 mean = sum / static_cast<double>(count);
  double amplitude = 0.0;
  for (const TraceSample& s : trace) {
    if (s.t >= t_settle) {
      amplitude = std::max(
          amplitude, (s.state.position - origin->state.position - mean).norm());
    }
  }
  return amplitude;
}

}  // namespace cdpr
