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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cdpr/config.hpp"
#include "cdpr/errors.hpp"
#include "oracles.hpp"

namespace cdpr {
namespace {

constexpr double kG = 9.8;

const RigConfig& RigA() {
  static const RigConfig rig = default_rig(PayloadVariant::kA);
  return rig;
}
const RigConfig& RigB() {
  static const RigConfig rig = default_rig(PayloadVariant::kB);
  return rig;
}

Pose CentroidPose(double depth) {
  return {Vector3(0.0, 0.0, kAnchorHeight - depth), Orientation::Identity()};
}

// Uniform sample inside the anchor triangle shrunk by `margin`, 0.1 to 0.9 m
// below the anchor plane.
Vector3 RandomWorkspacePoint(std::mt19937& rng, double margin = 0.8) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& a = RigB().geometry.proximal_anchors;
  double s = u(rng), t = u(rng);
  if (s + t > 1.0) {
    s = 1.0 - s;
    t = 1.0 - t;
  }
  const Vector3 centroid = (a[0] + a[1] + a[2]) / 3.0;
  Vector3 p = a[0] + s * (a[1] - a[0]) + t * (a[2] - a[0]);
  p = centroid + margin * (p - centroid);
  p.z() = kAnchorHeight - (0.1 + 0.8 * u(rng));
  return p;
}

Orientation RandomTilt(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  return Orientation(Eigen::AngleAxisd(u(rng), Vector3::UnitX()) *
                     Eigen::AngleAxisd(u(rng), Vector3::UnitY()) *
                     Eigen::AngleAxisd(u(rng), Vector3::UnitZ()));
}

TEST(CableGeometry, CentroidPoseLengthsMatchPythagoras) {
  const CableGeometry c =
      cable_geometry(CentroidPose(0.5), RigB().geometry, RigB().payload);
  const double expected = std::sqrt(0.45 * 0.45 + 0.5 * 0.5);
  EXPECT_NEAR(expected, 0.67268120235368, 1e-12);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(c.lengths[i], expected, 1e-12);
    EXPECT_NEAR(c.directions[i].norm(), 1.0, 1e-12);
    // Toward the payload: downward.
    EXPECT_LT(c.directions[i].z(), 0.0);
  }
}

TEST(CableGeometry, PointDirectlyBelowAnchor) {
  const Vector3 anchor = RigB().geometry.proximal_anchors[0];
  const double d = 0.37;
  const Pose pose{anchor - Vector3(0, 0, d), Orientation::Identity()};
  const CableGeometry c = cable_geometry(pose, RigB().geometry, RigB().payload);
  EXPECT_NEAR(c.lengths[0], d, 1e-15);
  EXPECT_NEAR((c.directions[0] - Vector3(0, 0, -1)).norm(), 0.0, 1e-15);
}

TEST(CableGeometry, VariantAReducesToBWithZeroOffsets) {
  PayloadSpec flat = RigA().payload;
  flat.distal_anchors.fill(Vector3::Zero());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Pose pose{RandomWorkspacePoint(rng), RandomTilt(rng)};
    const CableGeometry a = cable_geometry(pose, RigA().geometry, RigA().payload);
    const CableGeometry zero = cable_geometry(pose, RigA().geometry, flat);
    const CableGeometry b = cable_geometry(pose, RigB().geometry, RigB().payload);
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(zero.lengths[i], b.lengths[i]);
      // Offsets change the length by at most |b_i|.
      const double offset = RigA().payload.distal_anchors[i].norm();
      EXPECT_LE(std::abs(a.lengths[i] - b.lengths[i]), offset + 1e-12);
      EXPECT_GT(std::abs(a.lengths[i] - b.lengths[i]), 0.0);
    }
  }
}

TEST(CableGeometry, DegenerateCableNamesIndex) {
  const Pose pose{RigB().geometry.proximal_anchors[1], Orientation::Identity()};
  try {
    cable_geometry(pose, RigB().geometry, RigB().payload);
    FAIL();
  } catch (const DegenerateCableError& e) {
    EXPECT_EQ(e.cable_index(), 2);
    EXPECT_NE(std::string(e.what()).find("cable 2"), std::string::npos);
  }
}

TEST(CableGeometry, PropertiesOverRandomPoses) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Pose pose{RandomWorkspacePoint(rng), RandomTilt(rng)};
    const CableGeometry c = cable_geometry(pose, RigA().geometry, RigA().payload);
    const PerCable<double> l =
        inverse_kinematics(pose, RigA().geometry, RigA().payload);
    const Matrix3 r = pose.orientation.toRotationMatrix();
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(c.directions[i].norm(), 1.0, 1e-12);
      const Vector3 distal = pose.position + r * RigA().payload.distal_anchors[i];
      EXPECT_NEAR(l[i], (RigA().geometry.proximal_anchors[i] - distal).norm(),
                  1e-12);
    }
  }
}

TEST(Jacobian, VariantBHasNoMomentRows) {
  const Jacobian h = jacobian(CentroidPose(0.4), RigB().geometry, RigB().payload);
  EXPECT_TRUE(h.bottomRows<3>().isZero(0.0));
}

TEST(Jacobian, SymmetricPoseForcesHaveNoHorizontalSum) {
  const CableGeometry c =
      cable_geometry(CentroidPose(0.5), RigB().geometry, RigB().payload);
  // Oracle: sum the computed unit vectors directly.
  const Vector3 sum = c.directions[0] + c.directions[1] + c.directions[2];
  EXPECT_NEAR(sum.x(), 0.0, 1e-15);
  EXPECT_NEAR(sum.y(), 0.0, 1e-15);
  const Jacobian h = jacobian(c);
  EXPECT_NEAR(h.topRows<3>().rowwise().sum().head<2>().norm(), 0.0, 1e-15);
}

TEST(Jacobian, ColumnsReproduceCableGeometry) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose pose{RandomWorkspacePoint(rng), RandomTilt(rng)};
    const CableGeometry c = cable_geometry(pose, RigA().geometry, RigA().payload);
    const Jacobian h = jacobian(pose, RigA().geometry, RigA().payload);
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(Vector3(h.col(i).head<3>()), c.directions[i]);
      EXPECT_EQ(Vector3(h.col(i).tail<3>()),
                c.anchor_offsets[i].cross(c.directions[i]));
      EXPECT_NEAR(h.col(i).head<3>().norm(), 1.0, 1e-12);
    }
  }
}

TEST(InverseKinematics, CentroidPoseEqualLengths) {
  const PerCable<double> l =
      inverse_kinematics(CentroidPose(0.5), RigB().geometry, RigB().payload);
  EXPECT_NEAR(l[0], l[1], 1e-15);
  EXPECT_NEAR(l[1], l[2], 1e-15);
}

TEST(InverseKinematics, RaisingShortensEveryCable) {
  for (const RigConfig* rig : {&RigA(), &RigB()}) {
    const PerCable<double> low =
        inverse_kinematics(CentroidPose(0.5), rig->geometry, rig->payload);
    const PerCable<double> high =
        inverse_kinematics(CentroidPose(0.4), rig->geometry, rig->payload);
    for (int i = 0; i < 3; ++i) {
      // Direct evaluation oracle.
      const Vector3 b = rig->payload.distal_anchors[i];
      const Vector3 a = rig->geometry.proximal_anchors[i];
      EXPECT_NEAR(high[i], (a - (CentroidPose(0.4).position + b)).norm(), 1e-15);
      EXPECT_LT(high[i], low[i]);
    }
  }
}

TEST(InverseKinematics, WorkspaceAndDegenerateErrors) {
  EXPECT_THROW(inverse_kinematics(CentroidPose(-0.1), RigB().geometry,
                                  RigB().payload),
               WorkspaceError);
  EXPECT_THROW(inverse_kinematics(CentroidPose(0.0), RigB().geometry,
                                  RigB().payload),
               WorkspaceError);
  // Payload A's rim anchors sit 0.05 m above its centre.
  EXPECT_THROW(inverse_kinematics(CentroidPose(0.04), RigA().geometry,
                                  RigA().payload),
               WorkspaceError);
  const Pose at_anchor{RigB().geometry.proximal_anchors[0],
                       Orientation::Identity()};
  EXPECT_THROW(inverse_kinematics(at_anchor, RigB().geometry, RigB().payload),
               DegenerateCableError);
}

TEST(ForwardKinematics, EqualLengthsGiveCentroid) {
  const double l = std::sqrt(0.45 * 0.45 + 0.5 * 0.5);
  const Vector3 x = forward_kinematics_point({l, l, l}, RigB().geometry,
                                             Vector3(0.1, -0.1, 0.2));
  EXPECT_NEAR((x - Vector3(0, 0, 0.5)).norm(), 0.0, 1e-10);
}

TEST(ForwardKinematics, RoundTripOverRandomPoses) {
  std::mt19937 rng(2024);
  const Vector3 guess(0.0, 0.0, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Pose pose{RandomWorkspacePoint(rng), Orientation::Identity()};
    const PerCable<double> l =
        inverse_kinematics(pose, RigB().geometry, RigB().payload);
    const Vector3 x = forward_kinematics_point(l, RigB().geometry, guess);
    worst = std::max(worst, (x - pose.position).norm());
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(ForwardKinematics, GuessAbovePlaneStillSelectsSuspendedBranch) {
  const Vector3 target(0.1, 0.05, 0.6);
  const PerCable<double> l = inverse_kinematics(
      {target, Orientation::Identity()}, RigB().geometry, RigB().payload);
  // Mirror image of the target across the anchor plane.
  const Vector3 mirror(0.1, 0.05, 1.4);
  for (const Vector3& guess : {mirror, Vector3(0.0, 0.0, 1.0)}) {
    const Vector3 x = forward_kinematics_point(l, RigB().geometry, guess);
    EXPECT_NEAR((x - target).norm(), 0.0, 1e-9);
  }
}

TEST(ForwardKinematics, ShortCablesAreInfeasible) {
  const auto& g = RigB().geometry;
  EXPECT_NEAR((g.proximal_anchors[0] - g.proximal_anchors[1]).norm(), 0.779,
              1e-3);
  // Oracle: a refined grid search finds no point within 0.1 m of the best
  // candidate of all three spheres.
  const double best = testing::best_sphere_residual<Vector3>(
      g.proximal_anchors, {0.1, 0.1, 0.1}, Vector3(-0.6, -0.6, 0.0),
      Vector3(0.6, 0.6, 2.0));
  EXPECT_GT(best, 0.1);
  EXPECT_THROW(forward_kinematics_point({0.1, 0.1, 0.1}, g, Vector3(0, 0, 0.5)),
               SolverError);
}

TEST(ForwardKinematics, RejectsVariantAInputsAndBadLengths) {
  EXPECT_THROW(forward_kinematics_point({0.5, -0.5, 0.5}, RigB().geometry,
                                        Vector3(0, 0, 0.5)),
               ValidationError);
}

TEST(StaticTensions, SymmetricPoseMatchesClosedForm) {
  const double depth = 0.5;
  const StaticTensions s =
      static_tensions(CentroidPose(depth), RigB().geometry, RigB().payload, kG);
  const double cos_alpha = depth / std::hypot(0.45, depth);
  const double expected = (2.7 * kG / 3.0) / cos_alpha;
  for (double t : s.tensions) EXPECT_NEAR(t, expected, 1e-9);
  EXPECT_TRUE(s.feasible);
}

TEST(StaticTensions, ForceBalanceHoldsForFeasiblePoses) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const Pose pose{RandomWorkspacePoint(rng), Orientation::Identity()};
    const StaticTensions s =
        static_tensions(pose, RigB().geometry, RigB().payload, kG);
    ASSERT_TRUE(s.feasible);
    const CableGeometry c = cable_geometry(pose, RigB().geometry, RigB().payload);
    Vector3 balance(0.0, 0.0, 2.7 * kG);  // S T + F with F = -weight
    for (int i = 0; i < 3; ++i) balance += c.directions[i] * s.tensions[i];
    EXPECT_LT(balance.norm(), 1e-9);
  }
}

TEST(StaticTensions, OutsideTriangleFlagsNegativeTension) {
  // Just beyond anchor 1: cables 2 and 3 would have to push.
  const Pose pose{Vector3(0.5, 0.0, 0.5), Orientation::Identity()};
  const StaticTensions s =
      static_tensions(pose, RigB().geometry, RigB().payload, kG);
  EXPECT_FALSE(s.feasible);
  // Oracle: independent 3x3 solve with Cramer's rule.
  const CableGeometry c = cable_geometry(pose, RigB().geometry, RigB().payload);
  Matrix3 m;
  for (int i = 0; i < 3; ++i) m.col(i) = c.directions[i];
  const Vector3 rhs(0, 0, -2.7 * kG);
  const double det = m.determinant();
  for (int i = 0; i < 3; ++i) {
    Matrix3 mi = m;
    mi.col(i) = rhs;
    EXPECT_NEAR(s.tensions[i], mi.determinant() / det, 1e-9);
  }
  EXPECT_LT(std::min(s.tensions[1], s.tensions[2]), 0.0);
}

TEST(StaticTensions, DirectlyUnderAnchorCarriesFullWeightOnOneCable) {
  const Vector3 anchor = RigB().geometry.proximal_anchors[0];
  const Pose pose{anchor - Vector3(0, 0, 0.5), Orientation::Identity()};
  const StaticTensions s =
      static_tensions(pose, RigB().geometry, RigB().payload, kG);
  EXPECT_NEAR(s.tensions[0], 2.7 * kG, 1e-9);
  EXPECT_NEAR(s.tensions[1], 0.0, 1e-9);
  EXPECT_NEAR(s.tensions[2], 0.0, 1e-9);
}

TEST(StaticTensions, ZeroGravityZeroTension) {
  for (const RigConfig* rig : {&RigA(), &RigB()}) {
    const StaticTensions s =
        static_tensions(CentroidPose(0.4), rig->geometry, rig->payload, 0.0);
    for (double t : s.tensions) EXPECT_EQ(t, 0.0);
  }
}

TEST(StaticTensions, VariantASymmetricPoseHasZeroResidual) {
  const StaticTensions s =
      static_tensions(CentroidPose(0.5), RigA().geometry, RigA().payload, kG);
  EXPECT_TRUE(s.feasible);
  EXPECT_LT(s.residual, 1e-9);
  // Rim anchors: cables meet the payload at 0.45 m - 0.05 m horizontal offset
  // and 0.5 m - 0.05 m vertical drop.
  const double cos_alpha = 0.45 / std::hypot(0.40, 0.45);
  for (double t : s.tensions) {
    EXPECT_NEAR(t, (1.5 * kG / 3.0) / cos_alpha, 1e-9);
  }
}

TEST(StaticTensions, VariantATiltedPoseReportsResidual) {
  const Pose pose{Vector3(0.05, 0.02, 0.5),
                  Orientation(Eigen::AngleAxisd(0.3, Vector3::UnitX()))};
  const StaticTensions s =
      static_tensions(pose, RigA().geometry, RigA().payload, kG);
  EXPECT_GT(s.residual, 1e-3);
}

TEST(StaticTensions, CoplanarCablesAreSingular) {
  // In the anchor plane all cable directions are horizontal.
  const Pose pose{Vector3(0.0, 0.0, kAnchorHeight), Orientation::Identity()};
  EXPECT_THROW(static_tensions(pose, RigB().geometry, RigB().payload, kG),
               SolverError);
}

}  // namespace
}  // namespace cdpr
