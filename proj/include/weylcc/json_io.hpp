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

#include <json.hpp>

#include "weylcc/characterize.hpp"
#include "weylcc/circuit.hpp"
#include "weylcc/coverage.hpp"
#include "weylcc/synth_numeric.hpp"

namespace weylcc {

using ordered_json = nlohmann::ordered_json;

/// Matrices are encoded repo-wide as row-major arrays of [re, im] pairs.
ordered_json matrix_to_json(const Unitary4 &m);
ordered_json matrix_to_json(const Unitary2 &m);
Unitary4 matrix4_from_json(const ordered_json &j);
Unitary2 matrix2_from_json(const ordered_json &j);

/// {pair: [q0, q1], one_qubit_layer_duration, gates: [{label, duration,
///  unitary}]}
ordered_json gateset_to_json(const GateSet &gs);
GateSet gateset_from_json(const ordered_json &j);

/// {num_qubits, gates: [{name, qubits, params?, matrix?, label?}]}
ordered_json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const ordered_json &j);

ordered_json compiled_to_json(const CompiledCircuit &cc);

ordered_json coverage_to_json(const CoverageSet &cov, const GateSet &gs);

ordered_json optimizer_config_to_json(const OptimizerConfig &c);
OptimizerConfig optimizer_config_from_json(const ordered_json &j);

ordered_json model_to_json(const ControlledPulseModel &m);
ControlledPulseModel model_from_json(const ordered_json &j);

ordered_json cr_to_json(const CrCoefficients &nu);
CrCoefficients cr_from_json(const ordered_json &j);

}  // namespace weylcc
