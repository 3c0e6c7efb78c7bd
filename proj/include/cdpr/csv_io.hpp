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

// CSV exports. Comma separated, '.' decimal point, numbers written with 17
// significant digits so values round-trip exactly.
//
//   trace:  t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,T1,T2,T3,l1,l2,l3,
//           lN1,lN2,lN3
//   plan:   t,x,y,z,vx,vy,vz,ax,ay,az
//   pulses: '# ppr=<n>' and '# drum_radius=<r>' comment lines, then
//           t_start,duration,frequency_hz,direction,steps

#pragma once

#include <iosfwd>
#include <string>

#include "cdpr/actuation.hpp"
#include "cdpr/dynamics.hpp"
#include "cdpr/planners.hpp"

namespace cdpr {

std::string format_number(double value);

void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_plan_csv(std::ostream& out, const MotionPlan& plan);
void write_pulse_csv(std::ostream& out, const PulseSchedule& schedule,
                     int motor, double drum_radius);

}  // namespace cdpr
