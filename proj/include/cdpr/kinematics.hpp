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

#pragma once

#include <Eigen/Core>

#include "cdpr/types.hpp"

namespace cdpr {

// Per-cable geometry at one payload pose.
//   directions[i]: unit vector from proximal anchor i toward the payload.
//   anchor_offsets[i]: distal anchor offset rotated into the world frame.
struct CableGeometry {
  PerCable<double> lengths{};
  PerCable<Vector3> directions;
  PerCable<Vector3> anchor_offsets;
};

// Columns are [s_i; b_i x s_i]: force rows on top, moment rows below.
using Jacobian = Eigen::Matrix<double, 6, 3>;

// Throws DegenerateCableError when a distal anchor coincides with its
// proximal anchor.
CableGeometry cable_geometry(const Pose& pose, const RobotGeometry& geometry,
                             const PayloadSpec& payload);
inline CableGeometry cable_geometry(const PayloadState& state,
                                    const RobotGeometry& geometry,
                                    const PayloadSpec& payload) {
  return cable_geometry(state.pose(), geometry, payload);
}

Jacobian jacobian(const CableGeometry& cables);
Jacobian jacobian(const Pose& pose, const RobotGeometry& geometry,
                  const PayloadSpec& payload);

// Unit normal of the anchor plane, oriented upward (positive z component).
Vector3 anchor_plane_normal(const RobotGeometry& geometry);

// Signed height of a point above the anchor plane (negative below).
double height_above_anchor_plane(const Vector3& point,
                                 const RobotGeometry& geometry);

// Cable lengths at a pose. Throws DegenerateCableError, then WorkspaceError
// if any distal anchor is at or above the anchor plane.
PerCable<double> inverse_kinematics(const Pose& pose,
                                    const RobotGeometry& geometry,
                                    const PayloadSpec& payload);

struct ForwardKinematicsOptions {
  double tolerance = 1e-10;  // m, max |distance - length|
  int max_iterations = 100;
};

// Position of the common attachment point of a variant-B payload given its
// three cable lengths. Newton iteration from `initial_guess`; the solution
// below the anchor plane is returned.
// Throws ValidationError (variant A, non-positive lengths), SolverError
// (spheres do not intersect, or no convergence).
Vector3 forward_kinematics_point(const PerCable<double>& lengths,
                                 const RobotGeometry& geometry,
                                 const Vector3& initial_guess,
                                 const ForwardKinematicsOptions& options = {});

struct StaticTensions {
  PerCable<double> tensions{};  // N
  bool feasible = false;        // all tensions non-negative
  double residual = 0.0;        // wrench residual norm (least squares, A)
};

// Cable tensions holding the payload at rest under gravity:
// [S; B x S] T = [(0, 0, -m g); 0]. Variant B solves the 3x3 force balance,
// variant A the 6x3 system in the least-squares sense.
// Throws SolverError if the cable directions are (nearly) coplanar.
StaticTensions static_tensions(const Pose& pose, const RobotGeometry& geometry,
                               const PayloadSpec& payload,
                               double gravity = kStandardGravity);

}  // namespace cdpr
