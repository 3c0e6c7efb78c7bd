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

#include "cdpr/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "cdpr/errors.hpp"

namespace cdpr {
namespace {

using std::numbers::pi;

// Cumulative rotation of one motor at every sample of the speed grid.
class RotationIntegral {
 public:
  RotationIntegral(const ShaftProfile& shaft, int motor)
      : shaft_(shaft), motor_(motor) {
    cumulative_.reserve(shaft.speeds.size());
    cumulative_.push_back(0.0);
    const double h = shaft.sample_period;
    for (std::size_t j = 0; j + 1 < shaft.speeds.size(); ++j) {
      cumulative_.push_back(cumulative_.back() +
                            0.5 * h * (speed(j) + speed(j + 1)));
    }
  }

  double speed(std::size_t j) const { return shaft_.speeds[j][motor_]; }

  // Integral of the piecewise-linear speed over [0, t].
  double at(double t) const {
    const double h = shaft_.sample_period;
    if (t <= 0.0 || cumulative_.size() < 2) return 0.0;
    auto j = static_cast<std::size_t>(std::floor(t / h));
    if (j + 1 >= cumulative_.size()) return cumulative_.back();
    const double tau = t - static_cast<double>(j) * h;
    return cumulative_[j] + speed(j) * tau +
           (speed(j + 1) - speed(j)) * tau * tau / (2.0 * h);
  }

  // Times in (a, b) where the speed changes sign or touches zero.
  std::vector<double> sign_changes(double a, double b) const {
    std::vector<double> out;
    const double h = shaft_.sample_period;
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(a / h)));
    for (std::size_t j = first; j + 1 < shaft_.speeds.size(); ++j) {
      const double tj = static_cast<double>(j) * h;
      if (tj >= b) break;
      const double w0 = speed(j);
      const double w1 = speed(j + 1);
      double crossing = -1.0;
      if (w0 == 0.0) {
        crossing = tj;
      } else if (w0 * w1 < 0.0) {
        crossing = tj + h * w0 / (w0 - w1);
      }
      if (crossing > a && crossing < b) out.push_back(crossing);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const ShaftProfile& shaft_;
  int motor_;
  std::vector<double> cumulative_;
};

// Tracks contiguous runs above a limit.
class EpisodeTracker {
 public:
  EpisodeTracker(LimitKind kind, int motor, double limit,
                 std::vector<LimitViolation>* sink)
      : kind_(kind), motor_(motor), limit_(limit), sink_(sink) {}

  void observe(double t_start, double t_end, double value) {
    if (value > limit_) {
      if (!open_) {
        open_ = LimitViolation{kind_, motor_, t_start, t_end, value, limit_};
      } else {
        open_->t_end = t_end;
        open_->peak = std::max(open_->peak, value);
      }
    } else {
      close();
    }
  }

  void close() {
    if (open_) {
      sink_->push_back(*open_);
      open_.reset();
    }
  }

 private:
  LimitKind kind_;
  int motor_;
  double limit_;
  std::vector<LimitViolation>* sink_;
  std::optional<LimitViolation> open_;
};

constexpr double kRadPerSecToRpm = 60.0 / (2.0 * pi);

}  // namespace

double ShaftProfile::end_time() const {
  return speeds.empty() ? 0.0
                        : static_cast<double>(speeds.size() - 1) * sample_period;
}

double ShaftProfile::rotation(int motor, double t) const {
  return RotationIntegral(*this, motor).at(t);
}

std::int64_t PulseSchedule::net_steps(int motor) const {
  std::int64_t total = 0;
  for (const PulseSegment& s : motors[motor]) {
    total += s.pay_out ? s.steps : -s.steps;
  }
  return total;
}

ShaftProfile winch_to_shaft(const WinchProfile& winch, double drum_radius) {
  if (!(drum_radius > 0.0) || !std::isfinite(drum_radius)) {
    throw ValidationError("drum_radius must be positive");
  }
  ShaftProfile shaft;
  shaft.sample_period = winch.sample_period();
  const auto& l = winch.samples();
  const std::size_t n = l.size();
  const double h = winch.sample_period();
  shaft.speeds.assign(n, PerCable<double>{});
  if (n < 2) return shaft;
  for (int i = 0; i < kNumCables; ++i) {
    shaft.speeds[0][i] = (l[1][i] - l[0][i]) / h / drum_radius;
    shaft.speeds[n - 1][i] = (l[n - 1][i] - l[n - 2][i]) / h / drum_radius;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      shaft.speeds[j][i] = (l[j + 1][i] - l[j - 1][i]) / (2.0 * h) / drum_radius;
    }
  }
  return shaft;
}

PulseSchedule shaft_to_pulses(const ShaftProfile& shaft, std::int32_t ppr,
                              double control_period) {
  if (ppr < kMinPpr || ppr > kMaxPpr) {
    throw ValidationError(
        fmt::format("ppr must be between {} and {}, got {}", kMinPpr, kMaxPpr,
                    ppr));
  }
  if (!(control_period > 0.0) || !std::isfinite(control_period)) {
    throw ValidationError("control_period must be positive");
  }
  PulseSchedule schedule;
  schedule.ppr = ppr;
  schedule.control_period = control_period;

  const double end = shaft.end_time();
  const double steps_per_rad = static_cast<double>(ppr) / (2.0 * pi);
  const auto intervals = static_cast<std::size_t>(
      std::ceil(end / control_period - 1e-9));

  for (int motor = 0; motor < kNumCables; ++motor) {
    const RotationIntegral rotation(shaft, motor);
    std::vector<PulseSegment>& segments = schedule.motors[motor];
    std::int64_t emitted = 0;  // signed, equals llround(phase) at boundaries
    bool pay_out = true;
    double theta_prev = 0.0;

    auto emit = [&](double a, double b) {
      const double theta = rotation.at(b);
      const double delta = theta - theta_prev;
      const std::int64_t target = std::llround(theta * steps_per_rad);
      if (delta > 0.0) pay_out = true;
      if (delta < 0.0) pay_out = false;
      PulseSegment s;
      s.t_start = a;
      s.duration = b - a;
      s.frequency_hz = std::abs(delta) * static_cast<double>(ppr) /
                       (2.0 * pi) / s.duration;
      s.pay_out = pay_out;
      s.steps = pay_out ? target - emitted : emitted - target;
      segments.push_back(s);
      emitted = target;
      theta_prev = theta;
    };

    for (std::size_t k = 0; k < intervals; ++k) {
      const double a = static_cast<double>(k) * control_period;
      const double b =
          k + 1 == intervals ? end : static_cast<double>(k + 1) * control_period;
      double cursor = a;
      for (double split : rotation.sign_changes(a, b)) {
        if (split - cursor > 1e-12) {
          emit(cursor, split);
          cursor = split;
        }
      }
      if (b - cursor > 1e-12) emit(cursor, b);
    }
  }
  return schedule;
}

PerCable<std::vector<LengthSample>> pulses_to_length(
    const PulseSchedule& schedule, double drum_radius,
    const PerCable<double>& initial_lengths) {
  PerCable<std::vector<LengthSample>> out;
  const double step_length =
      drum_radius * 2.0 * pi / static_cast<double>(schedule.ppr);
  for (int motor = 0; motor < kNumCables; ++motor) {
    auto& samples = out[motor];
    samples.reserve(schedule.motors[motor].size() + 1);
    samples.push_back({0.0, initial_lengths[motor]});
    std::int64_t net = 0;
    for (const PulseSegment& s : schedule.motors[motor]) {
      net += s.pay_out ? s.steps : -s.steps;
      samples.push_back({s.t_start + s.duration,
                         initial_lengths[motor] +
                             step_length * static_cast<double>(net)});
    }
  }
  return out;
}

std::string to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::kSpeed:
      return "speed";
    case LimitKind::kPulseFrequency:
      return "pulse_frequency";
    case LimitKind::kTorque:
      return "torque";
  }
  return "unknown";
}

LimitsReport validate_limits(const PulseSchedule& schedule,
                             const ShaftProfile& shaft, const SimTrace& trace,
                             const MotorSpec& motor, double drum_radius) {
  LimitsReport report;
  report.speed_limit_rpm = motor.max_speed_rpm;
  report.frequency_limit_hz =
      motor.max_speed_rpm / 60.0 * static_cast<double>(schedule.ppr);
  report.torque_limit = motor.max_torque;

  for (int m = 0; m < kNumCables; ++m) {
    EpisodeTracker speed(LimitKind::kSpeed, m, report.speed_limit_rpm,
                         &report.violations);
    for (std::size_t j = 0; j < shaft.speeds.size(); ++j) {
      const double rpm = std::abs(shaft.speeds[j][m]) * kRadPerSecToRpm;
      const double t = static_cast<double>(j) * shaft.sample_period;
      report.max_speed_rpm = std::max(report.max_speed_rpm, rpm);
      speed.observe(t, t, rpm);
    }
    speed.close();

    EpisodeTracker frequency(LimitKind::kPulseFrequency, m,
                             report.frequency_limit_hz, &report.violations);
    for (const PulseSegment& s : schedule.motors[m]) {
      report.max_frequency_hz = std::max(report.max_frequency_hz, s.frequency_hz);
      frequency.observe(s.t_start, s.t_start + s.duration, s.frequency_hz);
    }
    frequency.close();

    EpisodeTracker torque(LimitKind::kTorque, m, report.torque_limit,
                          &report.violations);
    for (const TraceSample& sample : trace) {
      const double required = sample.tensions[m] * drum_radius;
      report.max_torque = std::max(report.max_torque, required);
      torque.observe(sample.t, sample.t, required);
    }
    torque.close();
  }
  return report;
}

}  // namespace cdpr
