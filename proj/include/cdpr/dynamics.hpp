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

// Rigid payload hanging from three unilateral elastic cables.
//
//   m a      = -sum_i s_i T_i + (0, 0, -m g) - c v
//   J w_dot  = -w x J w + R^T sum_i b_i x (-s_i T_i)
//   T_i      = k (l_i - lN_i) if l_i >= lN_i, else 0
//
// s_i points from the pulley toward the payload, b_i is the world-frame
// anchor offset, w and J are body-frame quantities and R rotates body to
// world. Natural lengths lN_i come from a sampled winch profile.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "cdpr/types.hpp"

namespace cdpr {

// Natural cable lengths on a uniform time grid starting at t = 0, linearly
// interpolated between samples and held constant past the last sample.
class WinchProfile {
 public:
  WinchProfile() = default;
  // Throws ValidationError on period <= 0, empty samples, or a non-positive
  // length.
  WinchProfile(double sample_period, std::vector<PerCable<double>> samples);

  // A profile that holds `lengths` for `duration`.
  static WinchProfile constant(const PerCable<double>& lengths,
                               double duration, double sample_period);

  double sample_period() const { return sample_period_; }
  const std::vector<PerCable<double>>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double end_time() const;

  PerCable<double> at(double t) const;

  // Copy extended by holding the final sample until at least `duration`.
  WinchProfile extended_to(double duration) const;

 private:
  double sample_period_ = 0.0;
  std::vector<PerCable<double>> samples_;
};

struct SimParams {
  double dt = 1e-4;        // s
  double duration = 0.0;   // s
  double damping = 0.0;    // N s/m
  double gravity = kStandardGravity;
  std::size_t decimation = 1;  // record every n-th step (final step always)
};

struct TraceSample {
  double t = 0.0;
  PayloadState state;
  PerCable<double> tensions{};
  PerCable<double> lengths{};
  PerCable<double> natural_lengths{};
};

using SimTrace = std::vector<TraceSample>;

struct StateDerivative {
  Vector3 velocity = Vector3::Zero();
  Vector3 acceleration = Vector3::Zero();
  Eigen::Vector4d orientation_rate = Eigen::Vector4d::Zero();  // (w, x, y, z)
  Vector3 angular_acceleration = Vector3::Zero();
};

// Unilateral spring: k (l - lN) when taut, 0 when slack.
double cable_tension(double length, double natural_length, double stiffness);

StateDerivative dynamics_rhs(const PayloadState& state,
                             const PerCable<double>& natural_lengths,
                             const RobotGeometry& geometry,
                             const PayloadSpec& payload,
                             const CableSpec& cable, const SimParams& params);

// Largest step accepted by integrate: 0.05 * 2 pi / sqrt(k / m).
double max_stable_dt(const CableSpec& cable, const PayloadSpec& payload);

// Fixed-step classical RK4 from t = 0 to params.duration. The quaternion is
// renormalized after every step. Throws ValidationError for bad parameters
// (including dt above max_stable_dt or a winch profile shorter than the
// run) and DegenerateCableError with the failing time in its message.
SimTrace integrate(const PayloadState& initial_state,
                   const WinchProfile& winch, const RobotGeometry& geometry,
                   const PayloadSpec& payload, const CableSpec& cable,
                   const SimParams& params);

// Kinetic + gravitational (datum z = 0) + stored elastic energy, J.
double energy(const PayloadState& state, const RobotGeometry& geometry,
              const PayloadSpec& payload, const CableSpec& cable,
              const PerCable<double>& natural_lengths, double gravity);

// Largest distance of the payload position from its mean over samples with
// t >= t_settle. Throws ValidationError if no samples fall in the window.
double residual_oscillation(const SimTrace& trace, double t_settle);

}  // namespace cdpr
