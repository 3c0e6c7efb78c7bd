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

#include "cdpr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "cdpr/csv_io.hpp"
#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"

namespace cdpr {
namespace {

constexpr Maneuver kAllManeuvers[] = {
    Maneuver::kVerticalConstant,
    Maneuver::kVerticalSinusoidal,
    Maneuver::kHorizontalConstant,
    Maneuver::kHorizontalPendulum,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string name_of(Maneuver m) { return std::string(to_string(m)); }

nlohmann::json summary_json(const PreparedManeuver& prepared,
                            const SimulationSummary& s) {
  return {
      {"maneuver", name_of(prepared.request.maneuver)},
      {"payload", std::string(to_string(prepared.rig.payload.variant))},
      {"distance", prepared.distance},
      {"duration", prepared.duration},
      {"final_position_error", s.final_position_error},
      {"residual_oscillation", s.residual_oscillation},
      {"peak_tension", s.peak_tension},
      {"peak_shaft_speed", s.peak_shaft_speed},
  };
}

nlohmann::json report_json(const PreparedManeuver& prepared,
                           const LimitsReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const LimitViolation& v : r.violations) {
    violations.push_back({{"kind", to_string(v.kind)},
                          {"motor", v.motor + 1},
                          {"t_start", v.t_start},
                          {"t_end", v.t_end},
                          {"peak", v.peak},
                          {"limit", v.limit}});
  }
  return {
      {"maneuver", name_of(prepared.request.maneuver)},
      {"ok", r.ok()},
      {"max_speed_rpm", r.max_speed_rpm},
      {"speed_limit_rpm", r.speed_limit_rpm},
      {"max_frequency_hz", r.max_frequency_hz},
      {"frequency_limit_hz", r.frequency_limit_hz},
      {"max_torque", r.max_torque},
      {"torque_limit", r.torque_limit},
      {"violations", violations},
  };
}

std::string report_text(const PreparedManeuver& prepared,
                        const LimitsReport& r) {
  std::string text = fmt::format(
      "maneuver {}: {}\n"
      "  shaft speed  {:10.3f} RPM   limit {:10.3f} RPM\n"
      "  pulse rate   {:10.1f} Hz    limit {:10.1f} Hz\n"
      "  drum torque  {:10.4f} N m   limit {:10.4f} N m\n",
      name_of(prepared.request.maneuver), r.ok() ? "within limits" : "VIOLATION",
      r.max_speed_rpm, r.speed_limit_rpm, r.max_frequency_hz,
      r.frequency_limit_hz, r.max_torque, r.torque_limit);
  for (const LimitViolation& v : r.violations) {
    text += fmt::format("  {} motor {}: t = [{:.4f}, {:.4f}] s peak {:.4g} > {:.4g}\n",
                        to_string(v.kind), v.motor + 1, v.t_start, v.t_end,
                        v.peak, v.limit);
  }
  return text;
}

ManeuverRequest request_for(const Command& command, Maneuver maneuver) {
  ManeuverRequest request;
  request.maneuver = maneuver;
  request.distance = command.distance;
  request.duration = command.duration;
  request.payload = command.payload;
  request.amplitude_mode = command.amplitude_mode;
  return request;
}

Maneuver required_maneuver(const Command& command, const char* subcommand) {
  if (!command.maneuver) {
    throw ValidationError(fmt::format("--maneuver is required for {}",
                                      subcommand));
  }
  return *command.maneuver;
}

void write_trace(const std::filesystem::path& path, const SimTrace& trace) {
  std::ofstream out = open_output(path);
  write_trace_csv(out, trace);
}

int run_plan(const RigConfig& rig, const Command& command, std::ostream& out) {
  const Maneuver maneuver = required_maneuver(command, "plan");
  const PreparedManeuver prepared =
      prepare_maneuver(rig, request_for(command, maneuver));
  const auto path = command.out_dir / ("plan_" + name_of(maneuver) + ".csv");
  std::ofstream file = open_output(path);
  write_plan_csv(file, prepared.plan);
  out << fmt::format("plan {}: {} samples over {} s, displacement {:.6f} m -> {}\n",
                     name_of(maneuver), prepared.plan.size(), prepared.duration,
                     (prepared.plan.positions.back() -
                      prepared.plan.positions.front())
                         .norm(),
                     path.string());
  return kExitOk;
}

int run_simulate(const RigConfig& rig, const Command& command,
                 std::ostream& out) {
  const Maneuver maneuver = required_maneuver(command, "simulate");
  const PreparedManeuver prepared =
      prepare_maneuver(rig, request_for(command, maneuver));
  const SimulationResult result = simulate_maneuver(prepared);
  const auto trace_path =
      command.out_dir / ("trace_" + name_of(maneuver) + ".csv");
  write_trace(trace_path, result.trace);
  const nlohmann::json summary = summary_json(prepared, result.summary);
  {
    std::ofstream file = open_output(command.out_dir /
                                     ("summary_" + name_of(maneuver) + ".json"));
    file << summary.dump(2) << "\n";
  }
  out << fmt::format(
      "simulate {}: final position error {:.6f} m, residual oscillation "
      "{:.6f} m, peak tension {:.3f} N, peak shaft speed {:.3f} rad/s -> {}\n",
      name_of(maneuver), result.summary.final_position_error,
      result.summary.residual_oscillation, result.summary.peak_tension,
      result.summary.peak_shaft_speed, trace_path.string());
  return kExitOk;
}

int run_compile(const RigConfig& rig, const Command& command,
                std::ostream& out) {
  const Maneuver maneuver = required_maneuver(command, "compile");
  const PreparedManeuver prepared =
      prepare_maneuver(rig, request_for(command, maneuver));
  const CompiledManeuver compiled = compile_maneuver(prepared);
  for (int m = 0; m < kNumCables; ++m) {
    const auto path = command.out_dir / fmt::format("pulses_{}_motor{}.csv",
                                                    name_of(maneuver), m + 1);
    std::ofstream file = open_output(path);
    write_pulse_csv(file, compiled.schedule, m, prepared.rig.geometry.drum_radius);
    out << fmt::format("compile {} motor {}: {} segments, net {} steps -> {}\n",
                       name_of(maneuver), m + 1,
                       compiled.schedule.motors[m].size(),
                       compiled.schedule.net_steps(m), path.string());
  }
  return kExitOk;
}

int run_validate(const RigConfig& rig, const Command& command,
                 std::ostream& out) {
  std::vector<Maneuver> maneuvers;
  if (command.maneuver) {
    maneuvers.push_back(*command.maneuver);
  } else {
    maneuvers = {Maneuver::kVerticalSinusoidal, Maneuver::kHorizontalPendulum};
  }
  bool ok = true;
  for (Maneuver maneuver : maneuvers) {
    const PreparedManeuver prepared =
        prepare_maneuver(rig, request_for(command, maneuver));
    const SimulationResult sim = simulate_maneuver(prepared);
    const CompiledManeuver compiled = compile_maneuver(prepared);
    const LimitsReport report =
        validate_limits(compiled.schedule, compiled.shaft, sim.trace,
                        prepared.rig.motor, prepared.rig.geometry.drum_radius);
    const std::string text = report_text(prepared, report);
    {
      std::ofstream file = open_output(command.out_dir /
                                       ("limits_" + name_of(maneuver) + ".txt"));
      file << text;
    }
    {
      std::ofstream file = open_output(command.out_dir /
                                       ("limits_" + name_of(maneuver) + ".json"));
      file << report_json(prepared, report).dump(2) << "\n";
    }
    out << text;
    ok = ok && report.ok();
  }
  return ok ? kExitOk : kExitLimits;
}

int run_demo(const RigConfig& rig, const Command& command, std::ostream& out) {
  struct DemoRun {
    PreparedManeuver prepared;
    SimulationResult result;
  };
  std::vector<std::future<DemoRun>> jobs;
  for (Maneuver maneuver : kAllManeuvers) {
    ManeuverRequest request;
    request.maneuver = maneuver;
    request.amplitude_mode = command.amplitude_mode;
    jobs.push_back(std::async(std::launch::async, [&rig, request] {
      DemoRun run{prepare_maneuver(rig, request), {}};
      run.result = simulate_maneuver(run.prepared);
      return run;
    }));
  }
  std::vector<DemoRun> runs;
  for (auto& job : jobs) runs.push_back(job.get());

  std::ofstream table = open_output(command.out_dir / "comparison.csv");
  table << "maneuver,payload,distance,duration,final_position_error,"
           "residual_oscillation,peak_tension,peak_shaft_speed\n";
  out << fmt::format("{:<22} {:>7} {:>14} {:>14} {:>11} {:>13}\n", "maneuver",
                     "payload", "final err [m]", "residual [m]", "peak T [N]",
                     "peak w [r/s]");
  for (const DemoRun& run : runs) {
    const Maneuver m = run.prepared.request.maneuver;
    write_trace(command.out_dir / ("trace_" + name_of(m) + ".csv"),
                run.result.trace);
    const SimulationSummary& s = run.result.summary;
    table << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                         name_of(m), to_string(run.prepared.rig.payload.variant),
                         run.prepared.distance, run.prepared.duration,
                         s.final_position_error, s.residual_oscillation,
                         s.peak_tension, s.peak_shaft_speed);
    out << fmt::format("{:<22} {:>7} {:>14.6f} {:>14.6f} {:>11.3f} {:>13.3f}\n",
                       name_of(m), to_string(run.prepared.rig.payload.variant),
                       s.final_position_error, s.residual_oscillation,
                       s.peak_tension, s.peak_shaft_speed);
  }
  const double vertical_ratio = runs[0].result.summary.residual_oscillation /
                                runs[1].result.summary.residual_oscillation;
  const double horizontal_ratio = runs[2].result.summary.residual_oscillation /
                                  runs[3].result.summary.residual_oscillation;
  out << fmt::format(
      "residual oscillation, discontinuous / smooth: vertical {:.1f}x, "
      "horizontal {:.1f}x\n",
      vertical_ratio, horizontal_ratio);
  return kExitOk;
}

}  // namespace

std::string_view to_string(Maneuver maneuver) {
  switch (maneuver) {
    case Maneuver::kVerticalConstant:
      return "vertical-constant";
    case Maneuver::kVerticalSinusoidal:
      return "vertical-sinusoidal";
    case Maneuver::kHorizontalConstant:
      return "horizontal-constant";
    case Maneuver::kHorizontalPendulum:
      return "horizontal-pendulum";
  }
  return "unknown";
}

Maneuver parse_maneuver(std::string_view name) {
  for (Maneuver m : kAllManeuvers) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown maneuver '" + std::string(name) + "'");
}

AmplitudeMode parse_amplitude_mode(std::string_view name) {
  if (name == "solved") return AmplitudeMode::kSolved;
  if (name == "fixed") return AmplitudeMode::kFixed;
  throw ValidationError("pendulum mode must be 'fixed' or 'solved', got '" +
                        std::string(name) + "'");
}

bool is_vertical(Maneuver maneuver) {
  return maneuver == Maneuver::kVerticalConstant ||
         maneuver == Maneuver::kVerticalSinusoidal;
}

PreparedManeuver prepare_maneuver(const RigConfig& base,
                                  const ManeuverRequest& request) {
  const bool vertical = is_vertical(request.maneuver);
  PreparedManeuver prepared;
  prepared.request = request;
  prepared.rig = base;
  prepared.distance = request.distance.value_or(vertical ? 0.5 : 0.3);
  prepared.duration = request.duration.value_or(vertical ? 1.0 : 2.0);

  const PayloadVariant variant = request.payload.value_or(
      vertical ? PayloadVariant::kA : PayloadVariant::kB);
  if (base.payload.variant != variant) {
    prepared.rig.payload =
        variant == PayloadVariant::kA ? payload_a() : payload_b();
  }
  const RigConfig& rig = prepared.rig;
  const SimSettings& sim = rig.sim;

  switch (request.maneuver) {
    case Maneuver::kVerticalConstant:
      prepared.plan = plan_vertical_constant(prepared.distance,
                                             prepared.duration,
                                             sim.vertical_start,
                                             sim.plan_sample_period);
      break;
    case Maneuver::kVerticalSinusoidal:
      prepared.plan = plan_vertical_sinusoidal(prepared.distance,
                                               prepared.duration,
                                               sim.vertical_start,
                                               sim.plan_sample_period);
      break;
    case Maneuver::kHorizontalConstant:
      prepared.plan = plan_horizontal_constant(
          prepared.distance, prepared.duration, sim.horizontal_start,
          sim.horizontal_direction, sim.plan_sample_period);
      break;
    case Maneuver::kHorizontalPendulum: {
      PendulumParams params;
      params.mass = rig.payload.mass;
      params.length = sim.pendulum_length;
      params.gravity = sim.gravity;
      prepared.plan = plan_horizontal_pendulum(
          prepared.distance, prepared.duration, params, sim.horizontal_start,
          sim.horizontal_direction, request.amplitude_mode,
          sim.plan_sample_period, &prepared.pendulum_amplitude);
      break;
    }
  }
  prepared.target = prepared.plan.positions.back();
  prepared.winch = plan_to_winch(prepared.plan, rig.geometry, rig.payload,
                                 rig.cable, {}, sim.gravity);
  prepared.initial_state.position = prepared.plan.positions.front();
  return prepared;
}

SimulationResult simulate_maneuver(const PreparedManeuver& prepared,
                                   std::optional<std::size_t> decimation) {
  const RigConfig& rig = prepared.rig;
  SimParams params;
  params.dt = rig.sim.dt;
  params.duration = prepared.duration + rig.sim.settle_time;
  params.damping = rig.sim.damping;
  params.gravity = rig.sim.gravity;
  params.decimation =
      decimation.value_or(static_cast<std::size_t>(rig.sim.decimation));

  SimulationResult result;
  result.trace = integrate(prepared.initial_state,
                           prepared.winch.extended_to(params.duration),
                           rig.geometry, rig.payload, rig.cable, params);

  SimulationSummary& s = result.summary;
  s.final_position_error =
      (result.trace.back().state.position - prepared.target).norm();
  s.residual_oscillation =
      residual_oscillation(result.trace, std::min(prepared.duration,
                                                  result.trace.back().t));
  for (const TraceSample& sample : result.trace) {
    for (double tension : sample.tensions) {
      s.peak_tension = std::max(s.peak_tension, tension);
    }
  }
  const ShaftProfile shaft =
      winch_to_shaft(prepared.winch, rig.geometry.drum_radius);
  for (const auto& speeds : shaft.speeds) {
    for (double w : speeds) {
      s.peak_shaft_speed = std::max(s.peak_shaft_speed, std::abs(w));
    }
  }
  return result;
}

CompiledManeuver compile_maneuver(const PreparedManeuver& prepared) {
  CompiledManeuver compiled;
  compiled.shaft =
      winch_to_shaft(prepared.winch, prepared.rig.geometry.drum_radius);
  compiled.schedule = shaft_to_pulses(compiled.shaft, prepared.rig.motor.ppr,
                                      prepared.rig.sim.control_period);
  return compiled;
}

int run(const Command& command, std::ostream& out, std::ostream& err) {
  try {
    const RigConfig rig = command.config_path
                              ? load_config(*command.config_path)
                              : default_rig(PayloadVariant::kA);
    ensure_directory(command.out_dir);
    switch (command.subcommand) {
      case Subcommand::kPlan:
        return run_plan(rig, command, out);
      case Subcommand::kSimulate:
        return run_simulate(rig, command, out);
      case Subcommand::kCompile:
        return run_compile(rig, command, out);
      case Subcommand::kValidate: {
        const int status = run_validate(rig, command, out);
        if (status == kExitLimits) {
          err << "limits error: motor ratings exceeded, see limits_*.txt in "
              << command.out_dir.string() << "\n";
        }
        return status;
      }
      case Subcommand::kDemo:
        return run_demo(rig, command, out);
    }
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const WorkspaceError& e) {
    err << "workspace error: " << e.what() << "\n";
    return kExitWorkspace;
  } catch (const DegenerateCableError& e) {
    err << "workspace error: " << e.what() << "\n";
    return kExitWorkspace;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace cdpr
