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

// cdpr: plan, simulate, compile and validate cable-robot maneuvers.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdpr/errors.hpp"
#include "cdpr/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string maneuver;
  double distance = 0.0;
  double duration = 0.0;
  std::string payload;
  std::string pendulum_mode = "solved";
  std::string out = ".";
};

void add_common(CLI::App* sub, Flags* flags, bool with_maneuver) {
  sub->add_option("--config", flags->config, "Rig configuration (JSON)");
  if (with_maneuver) {
    sub->add_option("--maneuver", flags->maneuver,
                    "vertical-constant | vertical-sinusoidal | "
                    "horizontal-constant | horizontal-pendulum");
    sub->add_option("--distance", flags->distance, "Travel distance, m");
    sub->add_option("--duration", flags->duration, "Maneuver duration, s");
    sub->add_option("--payload", flags->payload, "Payload variant A or B");
  }
  sub->add_option("--pendulum-mode", flags->pendulum_mode,
                  "Pendulum amplitude: solved (default) or fixed");
  sub->add_option("--out", flags->out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-cable suspended robot: maneuver planning, simulation "
               "and stepper pulse compilation"};
  app.require_subcommand(1);

  Flags flags;
  struct Entry {
    const char* name;
    const char* help;
    cdpr::Subcommand subcommand;
    bool with_maneuver;
  };
  const Entry entries[] = {
      {"plan", "Write the sampled payload trajectory", cdpr::Subcommand::kPlan,
       true},
      {"simulate", "Simulate a maneuver and write the trace",
       cdpr::Subcommand::kSimulate, true},
      {"compile", "Compile a maneuver into per-motor pulse schedules",
       cdpr::Subcommand::kCompile, true},
      {"validate", "Check a maneuver against the motor ratings",
       cdpr::Subcommand::kValidate, true},
      {"demo", "Run all four maneuvers and compare the control laws",
       cdpr::Subcommand::kDemo, false},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, &flags, e.with_maneuver);
    subs.emplace_back(sub, &e);
  }

  CLI11_PARSE(app, argc, argv);

  cdpr::Command command;
  CLI::App* chosen = nullptr;
  for (auto& [sub, entry] : subs) {
    if (sub->parsed()) {
      chosen = sub;
      command.subcommand = entry->subcommand;
    }
  }
  try {
    if (!flags.config.empty()) command.config_path = flags.config;
    if (!flags.maneuver.empty()) {
      command.maneuver = cdpr::parse_maneuver(flags.maneuver);
    }
    auto given = [chosen](const char* name) {
      const CLI::Option* option = chosen->get_option_no_throw(name);
      return option != nullptr && option->count() > 0;
    };
    if (given("--distance")) command.distance = flags.distance;
    if (given("--duration")) command.duration = flags.duration;
    if (!flags.payload.empty()) {
      command.payload = cdpr::parse_payload_variant(flags.payload);
    }
    command.amplitude_mode = cdpr::parse_amplitude_mode(flags.pendulum_mode);
  } catch (const cdpr::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cdpr::kExitConfig;
  }
  command.out_dir = flags.out;
  return cdpr::run(command, std::cout, std::cerr);
}
