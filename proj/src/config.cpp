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

#include "cdpr/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"

namespace cdpr {
namespace {

using nlohmann::json;

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

void require_finite(double value, const std::string& name) {
  require(std::isfinite(value), name + " must be finite");
}

void require_finite(const Vector3& value, const std::string& name) {
  require(value.allFinite(), name + " must be finite");
}

// Natural lengths that hold the payload in static equilibrium at `position`.
PerCable<double> equilibrium_natural_lengths(const RobotGeometry& geometry,
                                             const PayloadSpec& payload,
                                             double stiffness,
                                             const Vector3& position,
                                             double gravity) {
  const Pose pose{position, Orientation::Identity()};
  const PerCable<double> lengths = inverse_kinematics(pose, geometry, payload);
  const StaticTensions statics =
      static_tensions(pose, geometry, payload, gravity);
  PerCable<double> natural{};
  for (int i = 0; i < kNumCables; ++i) {
    natural[i] = lengths[i] - std::max(statics.tensions[i], 0.0) / stiffness;
  }
  return natural;
}

// --- JSON helpers -----------------------------------------------------------

double get_number(const json& section, const char* key, double fallback,
                  const std::string& path) {
  if (!section.contains(key)) return fallback;
  const json& value = section.at(key);
  if (!value.is_number()) {
    throw ParseError(path + "." + key + " must be a number");
  }
  return value.get<double>();
}

Vector3 to_vector(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) {
    throw ParseError(path + " must be an array of 3 numbers");
  }
  Vector3 out;
  for (int i = 0; i < 3; ++i) {
    if (!value[i].is_number()) {
      throw ParseError(path + " must be an array of 3 numbers");
    }
    out[i] = value[i].get<double>();
  }
  return out;
}

Vector3 get_vector(const json& section, const char* key,
                   const Vector3& fallback, const std::string& path) {
  if (!section.contains(key)) return fallback;
  return to_vector(section.at(key), path + "." + key);
}

PerCable<Vector3> get_vectors(const json& section, const char* key,
                              const PerCable<Vector3>& fallback,
                              const std::string& path) {
  if (!section.contains(key)) return fallback;
  const json& value = section.at(key);
  const std::string name = path + "." + key;
  if (!value.is_array() || value.size() != kNumCables) {
    throw ParseError(name + " must hold 3 vectors");
  }
  PerCable<Vector3> out;
  for (int i = 0; i < kNumCables; ++i) {
    out[i] = to_vector(value[i], name + "[" + std::to_string(i) + "]");
  }
  return out;
}

json vector_json(const Vector3& v) { return json::array({v.x(), v.y(), v.z()}); }

json vectors_json(const PerCable<Vector3>& vs) {
  json out = json::array();
  for (const Vector3& v : vs) out.push_back(vector_json(v));
  return out;
}

const json& section_or_empty(const json& root, const char* name) {
  static const json kEmpty = json::object();
  if (!root.contains(name)) return kEmpty;
  const json& section = root.at(name);
  if (!section.is_object()) {
    throw ParseError(std::string(name) + " must be an object");
  }
  return section;
}

}  // namespace

std::string_view to_string(PayloadVariant variant) {
  return variant == PayloadVariant::kA ? "A" : "B";
}

PayloadVariant parse_payload_variant(std::string_view text) {
  if (text == "A" || text == "a") return PayloadVariant::kA;
  if (text == "B" || text == "b") return PayloadVariant::kB;
  throw ValidationError("payload variant must be A or B, got '" +
                        std::string(text) + "'");
}

Matrix3 solid_cylinder_inertia(double mass, double radius, double height) {
  const double transverse =
      mass * (3.0 * radius * radius + height * height) / 12.0;
  const double axial = 0.5 * mass * radius * radius;
  return Eigen::Vector3d(transverse, transverse, axial).asDiagonal();
}

PayloadSpec payload_a(double mass, double radius, double height) {
  PayloadSpec payload;
  payload.variant = PayloadVariant::kA;
  payload.mass = mass;
  payload.inertia = solid_cylinder_inertia(mass, radius, height);
  // Rim of the top face, aligned with the pulleys above.
  for (int i = 0; i < kNumCables; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / kNumCables;
    payload.distal_anchors[i] = Vector3(radius * std::cos(angle),
                                        radius * std::sin(angle), 0.5 * height);
  }
  return payload;
}

PayloadSpec payload_b(double mass, double radius, double height) {
  PayloadSpec payload;
  payload.variant = PayloadVariant::kB;
  payload.mass = mass;
  payload.inertia = solid_cylinder_inertia(mass, radius, height);
  payload.distal_anchors.fill(Vector3::Zero());
  return payload;
}

RigConfig default_rig(PayloadVariant variant) {
  RigConfig rig;
  for (int i = 0; i < kNumCables; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / kNumCables;
    rig.geometry.proximal_anchors[i] =
        Vector3(kAnchorCircumradius * std::cos(angle),
                kAnchorCircumradius * std::sin(angle), kAnchorHeight);
  }
  rig.geometry.drum_radius = 0.02;
  rig.geometry.frame_side = 1.0;

  rig.payload = variant == PayloadVariant::kA ? payload_a() : payload_b();

  rig.cable.stiffness = 7e4;
  rig.cable.diameter_mm = 0.9;
  rig.cable.initial_natural_lengths = equilibrium_natural_lengths(
      rig.geometry, rig.payload, rig.cable.stiffness, rig.sim.vertical_start,
      rig.sim.gravity);

  rig.motor.max_torque = 3.0;
  rig.motor.max_speed_rpm = 1200.0;
  rig.motor.ppr = 800;
  return rig;
}

// --- validation ---------------------------------------------------------------

void validate(const RobotGeometry& geometry) {
  for (int i = 0; i < kNumCables; ++i) {
    require_finite(geometry.proximal_anchors[i],
                   "geometry.proximal_anchors[" + std::to_string(i) + "]");
  }
  require_finite(geometry.drum_radius, "geometry.drum_radius");
  require_finite(geometry.frame_side, "geometry.frame_side");
  require(geometry.drum_radius > 0.0, "drum_radius must be positive");
  const Vector3 normal =
      (geometry.proximal_anchors[1] - geometry.proximal_anchors[0])
          .cross(geometry.proximal_anchors[2] - geometry.proximal_anchors[0]);
  require(normal.norm() > 1e-12, "proximal anchors must not be collinear");
}

void validate(const PayloadSpec& payload) {
  require_finite(payload.mass, "payload.mass");
  require(payload.mass > 0.0, "mass must be positive");
  require(payload.inertia.allFinite(), "payload.inertia must be finite");
  require(payload.inertia.isApprox(payload.inertia.transpose(), 1e-12),
          "inertia must be symmetric");
  const Eigen::LLT<Matrix3> llt(payload.inertia);
  require(llt.info() == Eigen::Success, "inertia must be positive definite");
  for (int i = 0; i < kNumCables; ++i) {
    require_finite(payload.distal_anchors[i],
                   "payload.distal_anchors[" + std::to_string(i) + "]");
  }
  if (payload.variant == PayloadVariant::kB) {
    for (const Vector3& b : payload.distal_anchors) {
      require(b.isZero(0.0), "payload variant B requires all distal anchors "
                             "at the centre of mass");
    }
  }
}

void validate(const CableSpec& cable) {
  require_finite(cable.stiffness, "cable.stiffness");
  require_finite(cable.diameter_mm, "cable.diameter_mm");
  require(cable.stiffness > 0.0, "cable stiffness must be positive");
  for (double length : cable.initial_natural_lengths) {
    require_finite(length, "cable.natural_lengths");
    require(length > 0.0, "cable natural lengths must be positive");
  }
}

void validate(const MotorSpec& motor) {
  require_finite(motor.max_torque, "motor.max_torque");
  require_finite(motor.max_speed_rpm, "motor.max_speed_rpm");
  require(motor.max_torque > 0.0, "motor max_torque must be positive");
  require(motor.max_speed_rpm > 0.0, "motor max_speed_rpm must be positive");
  require(motor.ppr >= kMinPpr && motor.ppr <= kMaxPpr,
          "motor ppr must be between 800 and 40000, got " +
              std::to_string(motor.ppr));
}

void validate(const SimSettings& sim) {
  require_finite(sim.dt, "sim.dt");
  require_finite(sim.damping, "sim.damping");
  require_finite(sim.gravity, "sim.gravity");
  require_finite(sim.settle_time, "sim.settle_time");
  require_finite(sim.plan_sample_period, "sim.plan_sample_period");
  require_finite(sim.control_period, "sim.control_period");
  require_finite(sim.pendulum_length, "sim.pendulum_length");
  require_finite(sim.vertical_start, "sim.vertical_start");
  require_finite(sim.horizontal_start, "sim.horizontal_start");
  require_finite(sim.horizontal_direction, "sim.horizontal_direction");
  require(sim.dt > 0.0, "dt must be positive");
  require(sim.damping >= 0.0, "damping must be non-negative");
  require(sim.gravity >= 0.0, "gravity must be non-negative");
  require(sim.settle_time >= 0.0, "settle_time must be non-negative");
  require(sim.decimation >= 1, "decimation must be at least 1");
  require(sim.plan_sample_period > 0.0, "plan_sample_period must be positive");
  require(sim.control_period > 0.0, "control_period must be positive");
  require(sim.pendulum_length > 0.0, "pendulum_length must be positive");
}

void validate(const RigConfig& config) {
  validate(config.geometry);
  validate(config.payload);
  validate(config.cable);
  validate(config.motor);
  validate(config.sim);
}

// --- parse / serialize -----------------------------------------------------

RigConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config root must be an object");

  const json& geometry = section_or_empty(root, "geometry");
  const json& payload = section_or_empty(root, "payload");
  const json& cable = section_or_empty(root, "cable");
  const json& motor = section_or_empty(root, "motor");
  const json& sim = section_or_empty(root, "sim");

  PayloadVariant variant = PayloadVariant::kA;
  if (payload.contains("variant")) {
    if (!payload.at("variant").is_string()) {
      throw ParseError("payload.variant must be a string");
    }
    variant = parse_payload_variant(payload.at("variant").get<std::string>());
  }
  RigConfig config = default_rig(variant);

  config.geometry.proximal_anchors = get_vectors(
      geometry, "proximal_anchors", config.geometry.proximal_anchors,
      "geometry");
  config.geometry.drum_radius = get_number(
      geometry, "drum_radius", config.geometry.drum_radius, "geometry");
  config.geometry.frame_side = get_number(
      geometry, "frame_side", config.geometry.frame_side, "geometry");

  const double default_mass = config.payload.mass;
  const double mass = get_number(payload, "mass", default_mass, "payload");
  const double radius = get_number(payload, "cylinder_radius", 0.05, "payload");
  const double height = get_number(payload, "cylinder_height", 0.1, "payload");
  config.payload = variant == PayloadVariant::kA
                       ? payload_a(mass, radius, height)
                       : payload_b(mass, radius, height);
  if (payload.contains("inertia")) {
    const PerCable<Vector3> rows =
        get_vectors(payload, "inertia", {}, "payload");
    for (int r = 0; r < 3; ++r) config.payload.inertia.row(r) = rows[r];
  }
  config.payload.distal_anchors = get_vectors(
      payload, "distal_anchors", config.payload.distal_anchors, "payload");

  config.cable.stiffness =
      get_number(cable, "stiffness", config.cable.stiffness, "cable");
  config.cable.diameter_mm =
      get_number(cable, "diameter_mm", config.cable.diameter_mm, "cable");

  config.motor.max_torque =
      get_number(motor, "max_torque", config.motor.max_torque, "motor");
  config.motor.max_speed_rpm =
      get_number(motor, "max_speed_rpm", config.motor.max_speed_rpm, "motor");
  if (motor.contains("ppr")) {
    if (!motor.at("ppr").is_number_integer()) {
      throw ParseError("motor.ppr must be an integer");
    }
    config.motor.ppr = motor.at("ppr").get<std::int32_t>();
  }

  SimSettings& s = config.sim;
  s.dt = get_number(sim, "dt", s.dt, "sim");
  s.damping = get_number(sim, "damping", s.damping, "sim");
  s.gravity = get_number(sim, "gravity", s.gravity, "sim");
  s.settle_time = get_number(sim, "settle_time", s.settle_time, "sim");
  if (sim.contains("decimation")) {
    if (!sim.at("decimation").is_number_integer()) {
      throw ParseError("sim.decimation must be an integer");
    }
    s.decimation = sim.at("decimation").get<std::int32_t>();
  }
  s.plan_sample_period =
      get_number(sim, "plan_sample_period", s.plan_sample_period, "sim");
  s.control_period = get_number(sim, "control_period", s.control_period, "sim");
  s.vertical_start = get_vector(sim, "vertical_start", s.vertical_start, "sim");
  s.horizontal_start =
      get_vector(sim, "horizontal_start", s.horizontal_start, "sim");
  s.horizontal_direction =
      get_vector(sim, "horizontal_direction", s.horizontal_direction, "sim");
  s.pendulum_length =
      get_number(sim, "pendulum_length", s.pendulum_length, "sim");

  validate(config.geometry);
  validate(config.payload);
  validate(config.motor);
  validate(config.sim);

  if (cable.contains("natural_lengths")) {
    const json& value = cable.at("natural_lengths");
    if (!value.is_array() || value.size() != kNumCables) {
      throw ParseError("cable.natural_lengths must hold 3 numbers");
    }
    for (int i = 0; i < kNumCables; ++i) {
      if (!value[i].is_number()) {
        throw ParseError("cable.natural_lengths must hold 3 numbers");
      }
      config.cable.initial_natural_lengths[i] = value[i].get<double>();
    }
  } else {
    require(config.cable.stiffness > 0.0, "cable stiffness must be positive");
    config.cable.initial_natural_lengths = equilibrium_natural_lengths(
        config.geometry, config.payload, config.cable.stiffness,
        s.vertical_start, s.gravity);
  }
  validate(config.cable);
  return config;
}

RigConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RigConfig& config) {
  json root;
  root["geometry"] = {
      {"proximal_anchors", vectors_json(config.geometry.proximal_anchors)},
      {"drum_radius", config.geometry.drum_radius},
      {"frame_side", config.geometry.frame_side},
  };
  json inertia = json::array();
  for (int r = 0; r < 3; ++r) {
    inertia.push_back(vector_json(config.payload.inertia.row(r).transpose()));
  }
  root["payload"] = {
      {"variant", std::string(to_string(config.payload.variant))},
      {"mass", config.payload.mass},
      {"inertia", inertia},
      {"distal_anchors", vectors_json(config.payload.distal_anchors)},
  };
  root["cable"] = {
      {"stiffness", config.cable.stiffness},
      {"diameter_mm", config.cable.diameter_mm},
      {"natural_lengths", config.cable.initial_natural_lengths},
  };
  root["motor"] = {
      {"max_torque", config.motor.max_torque},
      {"max_speed_rpm", config.motor.max_speed_rpm},
      {"ppr", config.motor.ppr},
  };
  const SimSettings& s = config.sim;
  root["sim"] = {
      {"dt", s.dt},
      {"damping", s.damping},
      {"gravity", s.gravity},
      {"settle_time", s.settle_time},
      {"decimation", s.decimation},
      {"plan_sample_period", s.plan_sample_period},
      {"control_period", s.control_period},
      {"vertical_start", vector_json(s.vertical_start)},
      {"horizontal_start", vector_json(s.horizontal_start)},
      {"horizontal_direction", vector_json(s.horizontal_direction)},
      {"pendulum_length", s.pendulum_length},
  };
  return root.dump(2) + "\n";
}

}  // namespace cdpr
