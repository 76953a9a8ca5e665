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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "weylcc/coverage.hpp"
#include "weylcc/linalg.hpp"
#include "weylcc/weyl.hpp"

namespace weylcc {

/// Z(alpha) Y(beta) Z(gamma) angles for the inner single-qubit unitaries of
/// an ansatz; 2 * (|k| - 1) triples.
struct LocalAngles {
  std::vector<std::array<double, 3>> zyz;

  std::size_t count() const { return zyz.size(); }
};

struct OptimizerConfig {
  int max_steps = 100;
  int n_starts = 5;
  double threshold = 1e-10;
  std::uint64_t seed = 0;
};

struct SynthesisResult {
  AnsatzKey key;
  LocalAngles inner;
  std::array<Unitary2, 4> outer;  // v1..v4
  double residual = 0;            // invariant-space loss achieved
  Unitary4 reconstruction;        // equals the target up to global phase
  double global_phase = 0;        // target = e^{i phase} * assembled circuit
  double cost = 0;
  bool closed_form = false;
};

Unitary2 zyz(double alpha, double beta, double gamma);

/// U_pulse^(k1) (u1 x u2) U_pulse^(k2) (u3 x u4) U_pulse^(k3), truncated to
/// the key length.
Unitary4 build_ansatz_unitary(const AnsatzKey &key, const GateSet &gs,
                              const LocalAngles &inner);

/// |g(v) - g(target)|^2 in invariant space; zero iff locally equivalent.
double invariant_loss(const Unitary4 &v, const Unitary4 &target);

struct OptimizeOutcome {
  LocalAngles angles;
  double residual = 0;
  bool success = false;
  int total_steps = 0;       // summed over retries until success (or all)
  int steps_in_success = 0;  // steps used by the winning start
};

/// Multi-start quasi-Newton minimization of the invariant loss over the
/// inner Z-Y-Z angles. First start is all-zeros; the rest are uniform in
/// [-pi, pi). Deterministic for a fixed (seed, start index) pairing.
OptimizeOutcome optimize_inner_locals_detail(const AnsatzKey &key,
                                             const GateSet &gs,
                                             const Unitary4 &target,
                                             const OptimizerConfig &config);

/// Contract wrapper: returns the best angles and achieved loss; throws
/// ConvergenceFailure (carrying both) if the threshold was not reached.
std::pair<LocalAngles, double> optimize_inner_locals(
    const AnsatzKey &key, const GateSet &gs, const Unitary4 &target,
    const OptimizerConfig &config);

struct OuterLocals {
  std::array<Unitary2, 4> v;  // v1..v4
  double phase = 0;           // target = e^{i phase} (v1 x v2) mid (v3 x v4)
};

/// Given locally equivalent target and v, Cartan-decomposes both against a
/// common canonical frame and returns the outer corrections.
OuterLocals compute_outer_locals(const Unitary4 &target, const Unitary4 &v,
                                 std::uint64_t seed = 0);

/// Numeric synthesis against one fixed key: invariant matching for the
/// inner locals, outer locals from the Cartan frames, then a matrix-level
/// least-squares refinement of all angles. The refinement closes the gap
/// left by the invariants' flat directions near high-symmetry points.
SynthesisResult synthesize_with_key_numeric(const Unitary4 &target,
                                            const AnsatzKey &key,
                                            const GateSet &gs,
                                            const OptimizerConfig &config);

/// Full block synthesis: walks the coverage set in ascending cost, uses the
/// closed-form single-axis path where available and numeric invariant
/// matching otherwise.
SynthesisResult synthesize_block(const Unitary4 &target,
                                 const CoverageSet &coverage,
                                 const GateSet &gs,
                                 const OptimizerConfig &config = {});

}  // namespace weylcc
