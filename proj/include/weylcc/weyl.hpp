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

#include "weylcc/linalg.hpp"

namespace weylcc {

/// Canonical coordinates (c1, c2, c3) of a two-qubit gate. The canonical
/// region ("Weyl chamber") is c1 >= c2 >= c3 >= 0 with c1 + c2 <= pi.
struct CanonicalCoords {
  double c1 = 0, c2 = 0, c3 = 0;

  bool in_chamber(double tol = 1e-9) const {
    return c1 >= c2 - tol && c2 >= c3 - tol && c3 >= -tol &&
           c1 + c2 <= kPi + tol;
  }
  double max_abs_diff(const CanonicalCoords &o) const {
    return std::max({std::abs(c1 - o.c1), std::abs(c2 - o.c2),
                     std::abs(c3 - o.c3)});
  }
};

/// Makhlin local invariants (g1 complex, g2 real). Two gates with equal
/// invariants differ only by single-qubit unitaries.
struct MakhlinInvariants {
  c64 g1{0, 0};
  double g2 = 0;

  /// sqrt(|dg1|^2 + dg2^2)
  double distance(const MakhlinInvariants &o) const {
    return std::sqrt(std::norm(g1 - o.g1) + (g2 - o.g2) * (g2 - o.g2));
  }
  /// Distance modulo the global-phase pairing (g1, g2) ~ (-g1, g2).
  double distance_mod_phase(const MakhlinInvariants &o) const {
    const MakhlinInvariants flipped{-o.g1, o.g2};
    return std::min(distance(o), distance(flipped));
  }
};

/// Result of a Cartan (KAK) decomposition:
///   input = e^{i global_phase} (w1 x w2) can(coords) (w3 x w4),
/// with coords in the canonical chamber and each w_i in SU(2).
struct CartanFactors {
  Unitary2 w1, w2, w3, w4;
  CanonicalCoords coords;
  double global_phase = 0;

  Unitary4 reconstruct() const;
};

/// can(c1,c2,c3) = exp(-i/2 (c1 XX + c2 YY + c3 ZZ)). The three terms
/// commute, so the result is the product of three single-axis exponentials.
Unitary4 canonical_gate(const CanonicalCoords &c);

/// Invariants via the magic-basis construction: U_B = Q^dag U Q,
/// m = U_B^T U_B, g1 = tr(m)/4, g2 = (tr^2(m) - tr(m^2))/4. The input is
/// su-normalized first.
MakhlinInvariants makhlin_invariants(const Unitary4 &u);

/// Closed form for the canonical gate:
///   g1 = cos c1 cos c2 cos c3 - i sin c1 sin c2 sin c3,
///   g2 = cos 2c1 + cos 2c2 + cos 2c3.
MakhlinInvariants canonical_invariants(const CanonicalCoords &c);

/// Maps an arbitrary real triple to its chamber representative: reduce each
/// coordinate mod pi, sort descending, and reflect c1 -> pi - c1 (re-sorting)
/// while c1 + c2 > pi. On the base plane c3 = 0 the representative with
/// c1 + c2 <= pi is returned; both mirror images represent the same
/// equivalence class there.
CanonicalCoords canonicalize_coords(const CanonicalCoords &raw);

/// Mirror representative on the c3 = 0 plane: (pi - c1, c2, 0), re-sorted.
/// Exposed because the chamber holds both images of a base-plane class.
CanonicalCoords base_plane_mirror(const CanonicalCoords &c);

/// Full Cartan decomposition via simultaneous orthogonal diagonalization in
/// the magic basis. Degenerate spectra are handled by re-drawing the random
/// mixing angle, up to 10 attempts.
CartanFactors cartan_decompose(const Unitary4 &u, std::uint64_t seed = 0);

/// As cartan_decompose, but on the c3 = 0 base plane (where the chamber holds
/// two images of each class) picks the representative matching `prefer` when
/// both are reachable. Used to align two decompositions on one frame.
CartanFactors cartan_decompose_matching(const Unitary4 &u,
                                        const CanonicalCoords &prefer,
                                        std::uint64_t seed = 0);

/// True iff the invariant-space distance between u and v is within tol.
bool locally_equivalent(const Unitary4 &u, const Unitary4 &v, double tol);

/// Analytic gradient of (g1, g2) with respect to one complex entry of a
/// det-one unitary: given dU (a direction in matrix space), returns
/// (dg1, dg2). Used by the synthesis optimizer and verified against central
/// finite differences.
struct InvariantGradient {
  c64 dg1;
  double dg2;
};
InvariantGradient invariant_directional_derivative(const Unitary4 &u,
                                                   const Unitary4 &du);

}  // namespace weylcc
