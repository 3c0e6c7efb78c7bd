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

#include "cdpr/csv_io.hpp"

#include <ostream>

#include <fmt/format.h>

namespace cdpr {

// Adding +0.0 folds -0 into 0 so stationary columns print as "0".
std::string format_number(double value) {
  return fmt::format("{:.17g}", value + 0.0);
}

namespace {

using Row = fmt::memory_buffer;

void put(Row& row, double value) {
  if (row.size() != 0) row.push_back(',');
  fmt::format_to(std::back_inserter(row), "{:.17g}", value + 0.0);
}

void put(Row& row, const Vector3& v) {
  for (int i = 0; i < 3; ++i) put(row, v[i]);
}

void flush(std::ostream& out, Row& row) {
  row.push_back('\n');
  out.write(row.data(), static_cast<std::streamsize>(row.size()));
  row.clear();
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,T1,T2,T3,l1,l2,l3,"
         "lN1,lN2,lN3\n";
  Row row;
  for (const TraceSample& s : trace) {
    put(row, s.t);
    put(row, s.state.position);
    put(row, s.state.velocity);
    const Orientation& q = s.state.orientation;
    for (double c : {q.w(), q.x(), q.y(), q.z()}) put(row, c);
    put(row, s.state.angular_velocity);
    for (double v : s.tensions) put(row, v);
    for (double v : s.lengths) put(row, v);
    for (double v : s.natural_lengths) put(row, v);
    flush(out, row);
  }
}

void write_plan_csv(std::ostream& out, const MotionPlan& plan) {
  out << "t,x,y,z,vx,vy,vz,ax,ay,az\n";
  Row row;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    put(row, plan.time(i));
    put(row, plan.positions[i]);
    put(row, plan.velocities[i]);
    put(row, plan.accelerations[i]);
    flush(out, row);
  }
}

void write_pulse_csv(std::ostream& out, const PulseSchedule& schedule,
                     int motor, double drum_radius) {
  out << "# ppr=" << schedule.ppr << "\n";
  out << "# drum_radius=" << format_number(drum_radius) << "\n";
  out << "t_start,duration,frequency_hz,direction,steps\n";
  for (const PulseSegment& s : schedule.motors[motor]) {
    out << format_number(s.t_start) << ',' << format_number(s.duration) << ','
        << format_number(s.frequency_hz) << ',' << (s.pay_out ? 1 : 0) << ','
        << s.steps << '\n';
  }
}

}  // namespace cdpr
