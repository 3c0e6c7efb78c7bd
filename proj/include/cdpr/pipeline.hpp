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

// Orchestration used by the command-line tool: trajectory -> cable lengths
// -> simulation -> shaft speeds -> pulse schedules -> limit checks.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "cdpr/actuation.hpp"
#include "cdpr/config.hpp"
#include "cdpr/dynamics.hpp"
#include "cdpr/planners.hpp"

namespace cdpr {

enum class Maneuver {
  kVerticalConstant,
  kVerticalSinusoidal,
  kHorizontalConstant,
  kHorizontalPendulum,
};

std::string_view to_string(Maneuver maneuver);
// Throws ValidationError for an unknown name.
Maneuver parse_maneuver(std::string_view name);
AmplitudeMode parse_amplitude_mode(std::string_view name);

bool is_vertical(Maneuver maneuver);

struct ManeuverRequest {
  Maneuver maneuver = Maneuver::kVerticalSinusoidal;
  std::optional<double> distance;  // default 0.5 m vertical, 0.3 m horizontal
  std::optional<double> duration;  // default 1 s vertical, 2 s horizontal
  std::optional<PayloadVariant> payload;  // default A vertical, B horizontal
  AmplitudeMode amplitude_mode = AmplitudeMode::kSolved;
};

struct PreparedManeuver {
  ManeuverRequest request;
  RigConfig rig;  // payload resolved for this maneuver
  double distance = 0.0;
  double duration = 0.0;
  MotionPlan plan;
  WinchProfile winch;
  PayloadState initial_state;
  Vector3 target = Vector3::Zero();
  double pendulum_amplitude = 0.0;  // pendulum law only
};

PreparedManeuver prepare_maneuver(const RigConfig& base,
                                  const ManeuverRequest& request);

struct SimulationSummary {
  double final_position_error = 0.0;  // m, last trace sample vs target
  double residual_oscillation = 0.0;  // m, after the maneuver ends
  double peak_tension = 0.0;          // N
  double peak_shaft_speed = 0.0;      // rad/s
};

struct SimulationResult {
  SimTrace trace;
  SimulationSummary summary;
};

// Simulates the maneuver plus sim.settle_time of hold. `decimation`
// overrides sim.decimation when given.
SimulationResult simulate_maneuver(const PreparedManeuver& prepared,
                                   std::optional<std::size_t> decimation = {});

struct CompiledManeuver {
  ShaftProfile shaft;
  PulseSchedule schedule;
};

CompiledManeuver compile_maneuver(const PreparedManeuver& prepared);

enum class Subcommand { kPlan, kSimulate, kCompile, kValidate, kDemo };

struct Command {
  Subcommand subcommand = Subcommand::kDemo;
  std::optional<std::filesystem::path> config_path;
  std::optional<Maneuver> maneuver;
  std::optional<double> distance;
  std::optional<double> duration;
  std::optional<PayloadVariant> payload;
  AmplitudeMode amplitude_mode = AmplitudeMode::kSolved;
  std::filesystem::path out_dir = ".";
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitWorkspace = 3;
inline constexpr int kExitLimits = 4;
inline constexpr int kExitSolver = 5;
inline constexpr int kExitIo = 6;

// Runs one subcommand. Writes result files into command.out_dir, a short
// summary to `out` and a single-line diagnostic to `err` on failure.
int run(const Command& command, std::ostream& out, std::ostream& err);

}  // namespace cdpr
