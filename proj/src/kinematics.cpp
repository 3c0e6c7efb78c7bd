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

#include "cdpr/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cdpr/errors.hpp"

namespace cdpr {
namespace {

// Cables shorter than this are treated as collapsed.
constexpr double kMinCableLength = 1e-12;

// Relative pivot threshold for declaring the cable directions coplanar.
constexpr double kSingularityThreshold = 1e-9;

// Below this the spheres are taken to touch rather than miss.
constexpr double kIntersectionSlack = 1e-12;

}  // namespace

CableGeometry cable_geometry(const Pose& pose, const RobotGeometry& geometry,
                             const PayloadSpec& payload) {
  const Matrix3 rotation = pose.orientation.normalized().toRotationMatrix();
  CableGeometry out;
  for (int i = 0; i < kNumCables; ++i) {
    const Vector3 offset = rotation * payload.distal_anchors[i];
    const Vector3 span = pose.position + offset - geometry.proximal_anchors[i];
    const double length = span.norm();
    if (!(length > kMinCableLength)) {
      throw DegenerateCableError(
          i + 1, "cable " + std::to_string(i + 1) + " has zero length");
    }
    out.lengths[i] = length;
    out.directions[i] = span / length;
    out.anchor_offsets[i] = offset;
  }
  return out;
}

Jacobian jacobian(const CableGeometry& cables) {
  Jacobian h;
  for (int i = 0; i < kNumCables; ++i) {
    h.col(i).head<3>() = cables.directions[i];
    h.col(i).tail<3>() = cables.anchor_offsets[i].cross(cables.directions[i]);
  }
  return h;
}

Jacobian jacobian(const Pose& pose, const RobotGeometry& geometry,
                  const PayloadSpec& payload) {
  return jacobian(cable_geometry(pose, geometry, payload));
}

Vector3 anchor_plane_normal(const RobotGeometry& geometry) {
  const auto& a = geometry.proximal_anchors;
  Vector3 normal = (a[1] - a[0]).cross(a[2] - a[0]);
  const double norm = normal.norm();
  if (norm <= 0.0) throw ValidationError("proximal anchors are collinear");
  normal /= norm;
  return normal.z() < 0.0 ? Vector3(-normal) : normal;
}

double height_above_anchor_plane(const Vector3& point,
                                 const RobotGeometry& geometry) {
  return anchor_plane_normal(geometry).dot(point -
                                           geometry.proximal_anchors[0]);
}

PerCable<double> inverse_kinematics(const Pose& pose,
                                    const RobotGeometry& geometry,
                                    const PayloadSpec& payload) {
  const CableGeometry cables = cable_geometry(pose, geometry, payload);
  for (int i = 0; i < kNumCables; ++i) {
    const Vector3 distal = pose.position + cables.anchor_offsets[i];
    if (height_above_anchor_plane(distal, geometry) >= 0.0) {
      throw WorkspaceError("distal anchor " + std::to_string(i + 1) +
                           " is not below the anchor plane");
    }
  }
  return cables.lengths;
}

namespace {

// Closed-form sphere intersection; returns false when the spheres miss.
// On success `below` is the intersection point under the anchor plane.
bool trilaterate(const PerCable<Vector3>& anchors,
                 const PerCable<double>& radii, const Vector3& up,
                 Vector3* below) {
  const Vector3 d21 = anchors[1] - anchors[0];
  const double d = d21.norm();
  const Vector3 ex = d21 / d;
  const Vector3 d31 = anchors[2] - anchors[0];
  const double i = ex.dot(d31);
  const Vector3 ey = (d31 - i * ex).normalized();
  const double j = ey.dot(d31);
  const Vector3 ez = ex.cross(ey);

  const double r1 = radii[0] * radii[0];
  const double x = (r1 - radii[1] * radii[1] + d * d) / (2.0 * d);
  const double y =
      (r1 - radii[2] * radii[2] + i * i + j * j) / (2.0 * j) - i * x / j;
  const double z2 = r1 - x * x - y * y;
  const double scale = std::max(r1, d * d);
  if (z2 < -kIntersectionSlack * scale) return false;
  const double z = std::sqrt(std::max(z2, 0.0));
  const Vector3 base = anchors[0] + x * ex + y * ey;
  const Vector3 normal = ez.dot(up) >= 0.0 ? ez : Vector3(-ez);
  *below = base - z * normal;
  return true;
}

}  // namespace

Vector3 forward_kinematics_point(const PerCable<double>& lengths,
                                 const RobotGeometry& geometry,
                                 const Vector3& initial_guess,
                                 const ForwardKinematicsOptions& options) {
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ValidationError("cable lengths must be positive and finite");
    }
  }
  const auto& anchors = geometry.proximal_anchors;
  const Vector3 up = anchor_plane_normal(geometry);

  Vector3 closed_form;
  if (!trilaterate(anchors, lengths, up, &closed_form)) {
    throw SolverError("infeasible cable lengths: spheres do not intersect");
  }

  auto residuals = [&](const Vector3& x) {
    Vector3 r;
    for (int i = 0; i < kNumCables; ++i) {
      r[i] = (x - anchors[i]).norm() - lengths[i];
    }
    return r;
  };

  // Start strictly below the plane so Newton stays on the suspended branch.
  Vector3 x = initial_guess;
  const double guess_height = up.dot(x - anchors[0]);
  if (guess_height >= 0.0) {
    x -= (guess_height + 0.5 * lengths[0]) * up;
  }

  Vector3 r = residuals(x);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (r.cwiseAbs().maxCoeff() < options.tolerance) {
      if (up.dot(x - anchors[0]) > 0.0) {
        // Converged on the mirror solution; reflect and polish.
        x -= 2.0 * up.dot(x - anchors[0]) * up;
        r = residuals(x);
        continue;
      }
      return x;
    }
    Matrix3 jac;
    for (int i = 0; i < kNumCables; ++i) {
      const Vector3 span = x - anchors[i];
      const double n = span.norm();
      if (n <= 0.0) throw SolverError("forward kinematics hit an anchor point");
      jac.row(i) = span.transpose() / n;
    }
    const Eigen::FullPivLU<Matrix3> lu(jac);
    if (!lu.isInvertible()) {
      // Flat Jacobian (iterate in the anchor plane): push it down and retry.
      x -= 0.1 * lengths[0] * up;
      r = residuals(x);
      continue;
    }
    const Vector3 step = lu.solve(r);
    // Backtrack until the residual decreases.
    double alpha = 1.0;
    Vector3 candidate = x - step;
    Vector3 r_candidate = residuals(candidate);
    while (r_candidate.norm() >= r.norm() && alpha > 1e-6) {
      alpha *= 0.5;
      candidate = x - alpha * step;
      r_candidate = residuals(candidate);
    }
    x = candidate;
    r = r_candidate;
  }
  throw SolverError("forward kinematics did not converge in " +
                    std::to_string(options.max_iterations) + " iterations");
}

StaticTensions static_tensions(const Pose& pose, const RobotGeometry& geometry,
                               const PayloadSpec& payload, double gravity) {
  const CableGeometry cables = cable_geometry(pose, geometry, payload);
  const Jacobian h = jacobian(cables);
  const Vector3 weight(0.0, 0.0, -payload.mass * gravity);

  StaticTensions out;
  Vector3 t;
  if (payload.variant == PayloadVariant::kB) {
    const Matrix3 s = h.topRows<3>();
    Eigen::FullPivLU<Matrix3> lu(s);
    lu.setThreshold(kSingularityThreshold);
    if (!lu.isInvertible()) {
      throw SolverError("cable directions are coplanar; static balance is "
                        "singular");
    }
    t = lu.solve(weight);
    out.residual = (s * t - weight).norm();
  } else {
    Eigen::Matrix<double, 6, 1> wrench;
    wrench << weight, Vector3::Zero();
    Eigen::ColPivHouseholderQR<Jacobian> qr(h);
    qr.setThreshold(kSingularityThreshold);
    if (qr.rank() < kNumCables) {
      throw SolverError("cable wrench matrix is rank deficient; static "
                        "balance is singular");
    }
    t = qr.solve(wrench);
    out.residual = (h * t - wrench).norm();
  }
  // Round-off on a boundary pose (a cable exactly unloaded) stays feasible.
  const double zero_band = 1e-12 * std::max(1.0, weight.norm());
  out.feasible = true;
  for (int i = 0; i < kNumCables; ++i) {
    out.tensions[i] = t[i];
    if (t[i] < -zero_band) out.feasible = false;
  }
  return out;
}

}  // namespace cdpr
