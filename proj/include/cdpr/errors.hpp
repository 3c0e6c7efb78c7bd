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

#pragma once

#include <stdexcept>
#include <string>

namespace cdpr {

// Malformed configuration text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a type invariant or an operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cable has collapsed to zero length. Carries the 1-based cable index.
class DegenerateCableError : public std::runtime_error {
 public:
  DegenerateCableError(int cable_index, const std::string& what)
      : std::runtime_error(what), cable_index_(cable_index) {}

  int cable_index() const { return cable_index_; }

 private:
  int cable_index_;
};

// A pose lies outside the suspended workspace (at or above the anchor plane,
// or statically infeasible where feasibility is required).
class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular system, infeasible intersection, no convergence.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdpr
