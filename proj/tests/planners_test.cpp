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
#include <random>

#include <gtest/gtest.h>

#include "cdpr/config.hpp"
#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"
#include "oracles.hpp"

namespace cdpr {
namespace {

using std::numbers::pi;
constexpr double kG = 9.8;
constexpr double kDeg = pi / 180.0;

const Vector3 kStart(0.0, 0.0, 0.3);
const Vector3 kX = Vector3::UnitX();

TEST(VerticalConstant, NominalSpeed) {
  const MotionPlan plan = plan_vertical_constant(0.5, 1.0, kStart);
  ASSERT_EQ(plan.size(), 1001u);
  EXPECT_EQ(plan.velocities.front(), Vector3::Zero());
  EXPECT_EQ(plan.velocities.back(), Vector3::Zero());
  for (std::size_t k = 1; k + 1 < plan.size(); ++k) {
    EXPECT_NEAR(plan.velocities[k].z(), 0.5, 1e-15);
    EXPECT_NEAR(plan.positions[k].z(), 0.3 + 0.5 * plan.time(k), 1e-12);
  }
  EXPECT_NEAR(plan.positions.back().z(), 0.8, 1e-15);
}

TEST(HorizontalConstant, NominalSpeed) {
  const Vector3 dir = Vector3(1.0, 1.0, 0.0).normalized();
  const MotionPlan plan =
      plan_horizontal_constant(0.3, 2.0, Vector3(0, 0, 0.5), dir);
  EXPECT_EQ(plan.reference, ReferencePoint::kCableAnchor);
  EXPECT_NEAR(plan.velocities[500].norm(), 0.15, 1e-15);
  EXPECT_NEAR((plan.positions.back() - Vector3(0, 0, 0.5) - 0.3 * dir).norm(),
              0.0, 1e-15);
  EXPECT_THROW(plan_horizontal_constant(0.3, 2.0, kStart, Vector3(1, 0, 0.1)),
               ValidationError);
  EXPECT_THROW(plan_horizontal_constant(0.3, 2.0, kStart, Vector3(2, 0, 0)),
               ValidationError);
}

TEST(Planners, ZeroDistanceIsStationary) {
  const PendulumParams params;
  const std::vector<MotionPlan> plans = {
      plan_vertical_constant(0.0, 1.0, kStart),
      plan_vertical_sinusoidal(0.0, 1.0, kStart),
      plan_horizontal_constant(0.0, 2.0, kStart, kX),
      plan_horizontal_pendulum(0.0, 2.0, params, kStart, kX),
  };
  for (const MotionPlan& plan : plans) {
    for (std::size_t k = 0; k < plan.size(); ++k) {
      EXPECT_EQ(plan.positions[k], kStart);
      EXPECT_EQ(plan.velocities[k], Vector3::Zero());
    }
  }
}

TEST(Planners, RejectNonPositiveDuration) {
  EXPECT_THROW(plan_vertical_constant(0.5, 0.0, kStart), ValidationError);
  EXPECT_THROW(plan_vertical_sinusoidal(0.5, -1.0, kStart), ValidationError);
  EXPECT_THROW(plan_vertical_sinusoidal(0.5, 1.0, kStart, 0.0),
               ValidationError);
}

TEST(VerticalSinusoidal, RaisedCosineProfile) {
  EXPECT_NEAR(sinusoidal_acceleration(0.25, 0.5, 1.0), 4.0, 1e-15);
  EXPECT_NEAR(sinusoidal_acceleration(0.0, 0.5, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(sinusoidal_acceleration(1.0, 0.5, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(sinusoidal_acceleration(0.75, 0.5, 1.0), -4.0, 1e-14);
  const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
  EXPECT_NEAR(plan.positions.back().z() - kStart.z(), 0.5, 1e-12);
  EXPECT_NEAR(plan.velocities.back().z(), 0.0, 1e-12);
  EXPECT_NEAR(plan.velocities[500].z(), 1.0, 1e-12);
  EXPECT_EQ(plan.velocities.front(), Vector3::Zero());
  EXPECT_EQ(plan.accelerations.front(), Vector3::Zero());
  EXPECT_NEAR(plan.accelerations.back().z(), 0.0, 1e-12);
}

TEST(VerticalSinusoidal, MatchesAccelerationLawPointwise) {
  const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const double t = plan.time(k);
    const double law = 2.0 - 2.0 * std::cos(4.0 * pi * t);
    EXPECT_NEAR(plan.accelerations[k].z(), t <= 0.5 ? law : -law, 1e-12) << t;
  }
}

TEST(VerticalSinusoidal, RandomTargetsAgreeWithQuadrature) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0), t(0.2, 5.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double distance = d(rng), duration = t(rng);
    const MotionPlan plan = plan_vertical_sinusoidal(distance, duration, kStart);
    EXPECT_NEAR(plan.positions.back().z() - kStart.z(), distance, 1e-9);
    EXPECT_LT(std::abs(plan.velocities.back().z()), 1e-9);
    // Oracle: integrate the acceleration from rest to a few interior times.
    for (double frac : {0.2, 0.5, 0.77, 1.0}) {
      const std::size_t k = static_cast<std::size_t>(
          std::llround(frac * static_cast<double>(plan.size() - 1)));
      const double tk = plan.time(k);
      const testing::RestStart ref = testing::double_integral(
          [&](double s) { return sinusoidal_acceleration(s, distance, duration); },
          tk);
      EXPECT_NEAR(plan.positions[k].z() - kStart.z(), ref.position, 1e-9);
      EXPECT_NEAR(plan.velocities[k].z(), ref.velocity, 1e-9);
    }
  }
}

TEST(VerticalSinusoidal, VelocityIsDerivativeOfPosition) {
  const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
  const double h = plan.sample_period;
  for (std::size_t k = 1; k + 1 < plan.size(); ++k) {
    const double fd =
        (plan.positions[k + 1].z() - plan.positions[k - 1].z()) / (2.0 * h);
    EXPECT_NEAR(fd, plan.velocities[k].z(), 20.0 * h * h);
  }
}

TEST(PendulumTheta, Examples) {
  const double p = 0.05;
  EXPECT_EQ(pendulum_theta(0.0, p, 2.0).angle, 0.0);
  const SwingAngle end = pendulum_theta(2.0, p, 2.0);
  EXPECT_NEAR(end.angle, 0.0, 1e-15);
  EXPECT_NEAR(end.rate, 0.0, 1e-15);
  EXPECT_NEAR(pendulum_theta(0.5, p, 2.0).angle, -2.0 * p, 1e-15);
  // Rescaled duration keeps the rest-to-rest conditions.
  const SwingAngle scaled = pendulum_theta(3.0, p, 3.0);
  EXPECT_NEAR(scaled.angle, 0.0, 1e-15);
  EXPECT_NEAR(scaled.rate, 0.0, 1e-15);
  EXPECT_THROW(pendulum_theta(2.1, p, 2.0), ValidationError);
  EXPECT_THROW(pendulum_theta(-0.1, p, 2.0), ValidationError);
}

TEST(PendulumTheta, DerivativesMatchFiniteDifferences) {
  const double p = 0.04, T = 2.5, h = 1e-5;
  for (double t = 0.1; t < T - 0.1; t += 0.173) {
    const SwingAngle s = pendulum_theta(t, p, T);
    const double a0 = pendulum_theta(t - h, p, T).angle;
    const double a1 = pendulum_theta(t + h, p, T).angle;
    EXPECT_NEAR(s.rate, (a1 - a0) / (2 * h), 1e-8);
    EXPECT_NEAR(s.acceleration, (a1 - 2 * s.angle + a0) / (h * h), 1e-4);
  }
}

TEST(PendulumAmplitude, FrozenValues) {
  // x(T) = 3 g p T^2 / (4 pi), independent of l.
  EXPECT_NEAR(solve_pendulum_amplitude(0.3, 2.0, 0.129, kG),
              0.032057067893773, 1e-14);
  EXPECT_NEAR(solve_pendulum_amplitude(0.2, 2.0, 0.0, kG), 0.2 * pi / (3 * kG),
              1e-15);
  EXPECT_EQ(solve_pendulum_amplitude(0.0, 2.0, 0.129, kG), 0.0);
  EXPECT_NEAR(fixed_pendulum_amplitude(kG), 0.2 * pi / kG, 1e-15);
}

// Oracle: double integration of  x'' = -l theta'' - g theta  by quadrature.
testing::RestStart AnchorByQuadrature(double p, double l, double g, double T,
                                      double t) {
  return testing::double_integral(
      [&](double s) {
        const SwingAngle th = pendulum_theta(s, p, T);
        return -l * th.acceleration - g * th.angle;
      },
      t);
}

TEST(PendulumAmplitude, SolverAgreesWithQuadratureForRandomInputs) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> d(-0.6, 0.6), l(0.0, 0.5),
      t(0.5, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double distance = d(rng), length = l(rng), duration = t(rng);
    const double p = solve_pendulum_amplitude(distance, duration, length, kG);
    const testing::RestStart x =
        AnchorByQuadrature(p, length, kG, duration, duration);
    EXPECT_NEAR(x.position, distance, 1e-9);
    EXPECT_NEAR(x.velocity, 0.0, 1e-9);
  }
}

TEST(PendulumAmplitude, FixedAmplitudeTravelsSixtyCentimetres) {
  const double p = fixed_pendulum_amplitude(kG);
  for (double l : {0.0, 0.129, 0.4}) {
    EXPECT_NEAR(AnchorByQuadrature(p, l, kG, 2.0, 2.0).position, 0.6, 1e-9);
  }
  double used = 0.0;
  const MotionPlan plan = plan_horizontal_pendulum(
      0.3, 2.0, PendulumParams{}, Vector3(0, 0, 0.5), kX, AmplitudeMode::kFixed,
      1e-3, &used);
  EXPECT_EQ(used, p);
  EXPECT_NEAR(plan.positions.back().x(), 0.6, 1e-12);
}

TEST(HorizontalPendulum, MatchesQuadratureAndEndsAtRest) {
  const PendulumParams params;  // 2.7 kg, 0.129 m, 9.8 m/s^2
  double p = 0.0;
  const MotionPlan plan = plan_horizontal_pendulum(
      0.3, 2.0, params, Vector3(0, 0, 0.5), kX, AmplitudeMode::kSolved, 1e-3,
      &p);
  EXPECT_EQ(plan.reference, ReferencePoint::kCableAnchor);
  EXPECT_NEAR(p, 0.032057067893773, 1e-14);
  EXPECT_LT(plan.velocities.back().norm(), 1e-9);
  EXPECT_NEAR(plan.positions.back().x(), 0.3, 1e-12);
  for (std::size_t k = 0; k < plan.size(); k += 137) {
    const testing::RestStart ref =
        AnchorByQuadrature(p, params.length, kG, 2.0, plan.time(k));
    EXPECT_NEAR(plan.positions[k].x(), ref.position, 1e-9);
    EXPECT_NEAR(plan.velocities[k].x(), ref.velocity, 1e-9);
    EXPECT_EQ(plan.positions[k].y(), 0.0);
    EXPECT_EQ(plan.positions[k].z(), 0.5);
  }
}

TEST(HorizontalPendulum, SatisfiesLinearisedSwingEquation) {
  const PendulumParams params;
  double p = 0.0;
  const MotionPlan plan = plan_horizontal_pendulum(
      0.3, 2.0, params, Vector3::Zero(), kX, AmplitudeMode::kSolved, 1e-3, &p);
  const double h = plan.sample_period;
  const double m = params.mass, l = params.length;
  for (std::size_t k = 1; k + 1 < plan.size(); ++k) {
    const double xdd = (plan.positions[k + 1].x() - 2 * plan.positions[k].x() +
                        plan.positions[k - 1].x()) /
                       (h * h);
    const SwingAngle th = pendulum_theta(plan.time(k), p, 2.0);
    const double residual =
        m * l * xdd + m * l * l * th.acceleration + m * kG * l * th.angle;
    EXPECT_NEAR(residual, 0.0, 1e-5) << plan.time(k);
  }
}

// Anchor acceleration of the constant-speed law on the interior; the start
// and stop impulses are applied as jumps in swing rate.
testing::SwingState ConstantSpeedSwing(double speed, double duration,
                                       double length, double t_end) {
  testing::SwingState s{0.0, -speed / length};
  s = testing::simulate_nonlinear_pendulum([](double) { return 0.0; }, length,
                                           kG, duration, 1e-4, s);
  s.rate += speed * std::cos(s.angle) / length;
  return testing::simulate_nonlinear_pendulum([](double) { return 0.0; },
                                              length, kG, t_end - duration,
                                              1e-4, s);
}

TEST(HorizontalPendulum, NonlinearSwingEndsAtRest) {
  const PendulumParams params;
  const double T = 2.0;
  PendulumParams solved = params;
  solved.amplitude = solve_pendulum_amplitude(0.3, T, params.length, kG);
  double peak = 0.0, tracking = 0.0;
  const testing::SwingState end = testing::simulate_nonlinear_pendulum(
      [&](double t) {
        return pendulum_anchor_motion(std::min(t, T), solved, T).acceleration;
      },
      params.length, kG, T, 1e-4, {},
      [&](double t, const testing::SwingState& s) {
        peak = std::max(peak, std::abs(s.angle));
        tracking = std::max(
            tracking,
            std::abs(s.angle - pendulum_theta(std::min(t, T), solved.amplitude, T)
                                   .angle));
      });
  EXPECT_LT(std::abs(end.angle), 0.1 * kDeg);
  EXPECT_LT(std::abs(end.rate), 0.1 * kDeg);
  // The swing follows the planned angle, peaking at 2.598 p.
  EXPECT_NEAR(peak / kDeg, 4.77, 0.05);
  EXPECT_LT(tracking, 0.05 * kDeg);

  const double left_pendulum =
      testing::swing_amplitude(end, params.length, kG);
  const double left_constant = testing::swing_amplitude(
      ConstantSpeedSwing(0.15, T, params.length, T), params.length, kG);
  EXPECT_GT(left_constant, 5.0 * left_pendulum);
  EXPECT_GT(left_constant, 5.0 * kDeg);
}

class PlanToWinch : public ::testing::Test {
 protected:
  RigConfig rig_a_ = default_rig(PayloadVariant::kA);
  RigConfig rig_b_ = default_rig(PayloadVariant::kB);
};

TEST_F(PlanToWinch, StationaryPlanGivesConstantLengths) {
  const MotionPlan plan = plan_vertical_sinusoidal(0.0, 1.0, kStart);
  const WinchProfile w =
      plan_to_winch(plan, rig_a_.geometry, rig_a_.payload, rig_a_.cable);
  for (const auto& sample : w.samples()) EXPECT_EQ(sample, w.samples().front());
}

TEST_F(PlanToWinch, SymmetricVerticalPlanGivesIdenticalProfiles) {
  for (const RigConfig* rig : {&rig_a_, &rig_b_}) {
    const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
    const WinchProfile w =
        plan_to_winch(plan, rig->geometry, rig->payload, rig->cable);
    ASSERT_EQ(w.size(), plan.size());
    for (const auto& s : w.samples()) {
      EXPECT_NEAR(s[0], s[1], 1e-12);
      EXPECT_NEAR(s[0], s[2], 1e-12);
    }
    EXPECT_LT(w.samples().back()[0], w.samples().front()[0]);
  }
}

TEST_F(PlanToWinch, InverseRecoversPretension) {
  const MotionPlan plan =
      plan_horizontal_pendulum(0.3, 2.0, PendulumParams{}, Vector3(0, 0, 0.5), kX);
  const PerCable<double> pretension{30.0, 12.0, 12.5};
  const WinchProfile w = plan_to_winch(plan, rig_b_.geometry, rig_b_.payload,
                                       rig_b_.cable, pretension);
  for (std::size_t k = 0; k < plan.size(); k += 50) {
    const PerCable<double> l = inverse_kinematics(
        {plan.positions[k], Orientation::Identity()}, rig_b_.geometry,
        rig_b_.payload);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(l[i], w.samples()[k][i] + pretension[i] / 7e4, 1e-15);
    }
  }
}

TEST_F(PlanToWinch, DefaultPretensionIsStartEquilibrium) {
  const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
  const WinchProfile w =
      plan_to_winch(plan, rig_a_.geometry, rig_a_.payload, rig_a_.cable);
  const Pose start{kStart, Orientation::Identity()};
  const StaticTensions s = static_tensions(start, rig_a_.geometry,
                                           rig_a_.payload, kG);
  const PerCable<double> l =
      inverse_kinematics(start, rig_a_.geometry, rig_a_.payload);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(w.samples().front()[i], l[i] - s.tensions[i] / 7e4, 1e-15);
  }
}

TEST_F(PlanToWinch, WorkspaceErrorsCarryTime) {
  // Rises through the anchor plane half way through.
  const MotionPlan plan = plan_vertical_constant(1.2, 1.0, kStart);
  try {
    plan_to_winch(plan, rig_b_.geometry, rig_b_.payload, rig_b_.cable);
    FAIL();
  } catch (const WorkspaceError& e) {
    EXPECT_NE(std::string(e.what()).find("t = 0.58"), std::string::npos)
        << e.what();
  }
  // Start pose beyond anchor 1 cannot be held by pulling cables.
  const MotionPlan outside =
      plan_vertical_constant(0.0, 1.0, Vector3(0.5, 0.0, 0.5));
  EXPECT_THROW(
      plan_to_winch(outside, rig_b_.geometry, rig_b_.payload, rig_b_.cable),
      WorkspaceError);
}

TEST_F(PlanToWinch, SinusoidalPlanReachesTargetInSimulation) {
  const MotionPlan plan = plan_vertical_sinusoidal(0.5, 1.0, kStart);
  const WinchProfile w =
      plan_to_winch(plan, rig_a_.geometry, rig_a_.payload, rig_a_.cable)
          .extended_to(2.0);
  PayloadState s0;
  s0.position = kStart;
  SimParams params;
  params.duration = 2.0;
  params.decimation = 10;
  const SimTrace trace =
      integrate(s0, w, rig_a_.geometry, rig_a_.payload, rig_a_.cable, params);
  EXPECT_LT((trace.back().state.position - plan.positions.back()).norm(), 5e-3);
  EXPECT_LT(residual_oscillation(trace, 1.0), 5e-3);
}

}  // namespace
}  // namespace cdpr
