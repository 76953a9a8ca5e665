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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylcc/coverage.hpp"
#include "weylcc/linalg.hpp"
#include "weylcc/synth_numeric.hpp"

namespace weylcc {

/// Supported gate names: x, sx, rz, ry, rx, h, s, cx, cz, cp, rzz, ecr,
/// unitary4 (explicit matrix), pulse_ref (label into a pulse library).
struct Gate {
  std::string name;
  std::vector<int> qubits;
  std::vector<double> params;
  std::optional<Unitary4> matrix;
  std::string label;  // pulse_ref only
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
};

/// Characterized pulse lookup for simulation of compiled circuits.
struct PulseInfo {
  Unitary4 unitary;
  double duration = 0;
};
using PulseLibrary = std::map<std::string, PulseInfo>;

struct TwoQubitBlock {
  std::pair<int, int> pair;        // qubit order fixing the 4x4 basis
  Unitary4 unitary;                // ordered product of member gates
  std::vector<int> gate_indices;   // ascending positions in the source
  int anchor = 0;  // position of the opening two-qubit gate; absorbed leading
                   // single-qubit gates commute forward to this point
};

struct BlockDecomposition {
  std::vector<TwoQubitBlock> blocks;
  std::vector<int> residual_gates;  // single-qubit gates outside any block
};

struct BlockReport {
  std::pair<int, int> pair;
  std::vector<std::string> pulse_labels;
  double cost = 0;
  double residual = 0;
  bool closed_form = false;
};

struct CompiledCircuit {
  Circuit circuit;  // named 1q rotations + pulse_ref gates
  double total_two_qubit_duration = 0;
  std::vector<BlockReport> block_reports;
};

struct BenchNoiseModel {
  double two_qubit_depolarizing_per_reference_duration = 1e-2;
  double reference_duration = 320;
};

enum class CompileMode { Extended, SpeOnly };

struct CompileOptions {
  CompileMode mode = CompileMode::Extended;
  OptimizerConfig optimizer;
  CoverageConfig coverage;
};

Unitary2 resolve_1q(const Gate &g);
Unitary4 resolve_2q(const Gate &g, const PulseLibrary &lib);
bool is_two_qubit(const Gate &g);

/// Greedy left-to-right aggregation of maximal contiguous two-qubit runs;
/// single-qubit gates adjacent to an open block are absorbed into it.
BlockDecomposition collect_blocks(const Circuit &c,
                                  const PulseLibrary &lib = {});

/// Re-synthesizes every two-qubit block into characterized pulses from the
/// per-pair gate sets. In SpeOnly mode each gate set is filtered down to its
/// special perfect entanglers first (the baseline arm).
CompiledCircuit compile_circuit(
    const Circuit &c,
    const std::map<std::pair<int, int>, GateSet> &gatesets,
    const CompileOptions &options = {});

PulseLibrary pulse_library(
    const std::map<std::pair<int, int>, GateSet> &gatesets);

/// Dense unitary of the circuit (<= 6 qubits). Qubit 0 is the most
/// significant bit of the basis index.
Eigen::MatrixXcd circuit_unitary(const Circuit &c, const PulseLibrary &lib = {});

/// Ideal statevector (<= 20 qubits) from |0...0>.
Eigen::VectorXcd circuit_statevector(const Circuit &c,
                                     const PulseLibrary &lib = {});

/// Seeded sampling of measurement outcomes. With a noise model, trajectories
/// insert a random two-qubit Pauli after each two-qubit gate with
/// probability scaled by (duration / reference_duration).
std::map<std::string, int> simulate_counts(
    const Circuit &c, int shots, const std::optional<BenchNoiseModel> &noise,
    std::uint64_t seed, const PulseLibrary &lib = {});

/// Inverse-QFT benchmark instance: a single-qubit preparation layer chosen
/// so the ideal output is exactly the target bitstring, followed by the
/// inverse QFT (controlled phases + Hadamards; swaps as index relabeling).
Circuit qft_circuit(int n, const std::string &target_bitstring);

/// Second-order Trotter circuit for the 1-D transverse-field Ising model on
/// a line: per step, half-angle X layers sandwiching nearest-neighbor
/// ZZ rotations.
Circuit trotter_tfim_circuit(int n_qubits, int steps, double coupling,
                             double field, double dt);

/// Mean single-qubit <Z> from sampled counts.
double magnetization(const std::map<std::string, int> &counts, int n_qubits);

/// Exact mean single-qubit expectation from a statevector, axis 'y' or 'z'.
double magnetization(const Eigen::VectorXcd &state, char axis);

/// Basis-change layer turning Y-axis readout into computational readout.
Circuit with_y_measurement_layer(const Circuit &c);

}  // namespace weylcc
