// Copyright 2025-2026 The weylcc developers
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
#include <vector>

namespace weylcc {

struct Error : std::runtime_error {
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct DecompositionFailure : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  ConvergenceFailure(const std::string &msg, double residual,
                     std::vector<double> angles)
      : Error(msg), best_residual(residual), best_angles(std::move(angles)) {}
  double best_residual;
  std::vector<double> best_angles;
};

struct NotLocallyEquivalent : Error {
  using Error::Error;
};

struct FrameMismatch : Error {
  using Error::Error;
};

struct Infeasible : Error {
  using Error::Error;
};

struct NotSingleAxis : Error {
  using Error::Error;
};

struct SynthesisExhausted : Error {
  using Error::Error;
};

struct CoverageIncomplete : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

struct AmbiguousFit : Error {
  using Error::Error;
};

struct TooLarge : Error {
  using Error::Error;
};

struct BadBitstring : Error {
  using Error::Error;
};

struct MissingGateSet : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

}  // namespace weylcc
