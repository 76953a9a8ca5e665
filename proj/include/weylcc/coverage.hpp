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

#include <cstdint>
#include <string>
#include <vector>

#include "weylcc/linalg.hpp"
#include "weylcc/weyl.hpp"

namespace weylcc {

/// A characterized entangling pulse together with its duration cost and the
/// cached Cartan data used during synthesis.
struct PulseGate {
  std::string label;
  Unitary4 unitary;
  double duration = 0;  // config-defined time units
  CanonicalCoords coords;
  CartanFactors frame;
  bool single_axis = false;  // c2, c3 below 1e-9
};

/// Extended two-qubit gate set for one physical qubit pair. Must contain at
/// least one gate locally equivalent to CX/ECR (coords (pi/2, 0, 0)).
struct GateSet {
  std::pair<int, int> pair{0, 1};
  std::vector<PulseGate> gates;
  double one_qubit_layer_duration = 0;
};

/// Ordered list of gate indices forming a synthesis ansatz. Kept sorted
/// descending by per-gate duration; ordering does not change what the
/// ansatz can synthesize.
struct AnsatzKey {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool operator==(const AnsatzKey &o) const { return indices == o.indices; }
};

/// Region of the chamber synthesizable by one ansatz. Closed-form keys carry
/// half-space inequalities (or exact points for single-pulse keys); keys with
/// a non-single-axis pulse carry a probed hull of numerically feasible
/// lattice points with an inner (shrunk) hull for definite membership.
struct Polytope {
  struct HalfSpace {
    double a1, a2, a3, b;  // a . (c1,c2,c3) <= b
  };
  enum class Kind { HalfSpaces, Points, Probed, FullChamber };
  Kind kind = Kind::HalfSpaces;
  std::vector<HalfSpace> inequalities;
  std::vector<CanonicalCoords> special_points;
  std::vector<CanonicalCoords> probe_hull;        // probed kind only
  std::vector<CanonicalCoords> probe_hull_inner;  // shrunk hull
};

struct CoverageEntry {
  AnsatzKey key;
  Polytope polytope;
  double cost = 0;
};

/// Precomputed ansatz -> polytope table, sorted ascending by cost.
struct CoverageSet {
  std::vector<CoverageEntry> entries;
};

/// Caches canonical coordinates and the Cartan frame of a pulse.
PulseGate make_pulse_gate(const std::string &label, const Unitary4 &unitary,
                          double duration);

/// Validates the special-perfect-entangler invariant of a gate set.
void validate_gateset(const GateSet &gs);

/// Pulse durations plus |k| single-qubit layers (|k|-1 inner, 1 trailing).
double sequence_cost(const AnsatzKey &key, const GateSet &gs);

struct CoverageConfig {
  double probe_lattice_step = kPi / 20;
  double probe_threshold = 1e-8;
  int probe_starts = 3;
  int probe_max_steps = 60;
  double hull_shrink = kPi / 40;
  std::uint64_t seed = 0;
};

CoverageSet build_coverage_set(const GateSet &gs,
                               const CoverageConfig &config = {});

/// Membership with tolerance 1e-9. For points on the c3 = 0 base plane the
/// mirror representative (pi - c1, c2, 0) is checked as well.
bool polytope_contains(const Polytope &q, const CanonicalCoords &c);

/// Membership against the probed outer hull only (the fall-through band for
/// numerically probed polytopes). Identical to polytope_contains for other
/// kinds.
bool polytope_contains_outer(const Polytope &q, const CanonicalCoords &c);

/// First (cheapest) coverage entry containing c.
const CoverageEntry &select_ansatz(const CoverageSet &coverage,
                                   const CanonicalCoords &c);

}  // namespace weylcc
