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

#include "weylcc/coverage.hpp"
#include "weylcc/synth_numeric.hpp"
#include "weylcc/weyl.hpp"

namespace weylcc {

/// Closed-form angles for synthesizing can(c1, c2, 0) from two single-axis
/// canonical gates can(ceff1, 0, 0), can(ceff2, 0, 0):
///
///   can(c1,c2,0) = (Z(t1) x Z(t2)) can(ceff1) (Z(phi1) x Z(phi2))
///                  can(ceff2) (Z(t3) x Z(t4)),
///
/// with Z(t) = exp(-i t Z / 2). The intermediate quantities are retained so
/// the angle identities can be tested directly.
struct TwoPulseAngles {
  double phi1 = 0, phi2 = 0;
  double theta1 = 0, theta2 = 0, theta3 = 0, theta4 = 0;
  double phi_sigma = 0, phi_delta = 0;
  double gamma_d1 = 0, gamma_d2 = 0;  // gamma_{Delta,1}, gamma_{Delta,2}
  double gamma_s1 = 0, gamma_s2 = 0;  // gamma_{Sigma,1}, gamma_{Sigma,2}
};

/// Three-pulse construction: two stacked two-pulse motifs joined through an
/// intermediate interaction strength delta in [lower, upper].
struct ThreePulsePlan {
  double delta = 0;
  double lower = 0, upper = 0;
  TwoPulseAngles first_motif;   // can(c1, c2, 0) from (ceff_k1, delta)
  TwoPulseAngles second_motif;  // can(delta, c3, 0) from (ceff_k2, ceff_k3)
};

/// Realness conditions for the two-pulse angles: ceff1 + ceff2 >= c1 + c2 and
/// ceff1 - ceff2 <= c1 - c2 (with the effective sum wrapped at pi), or the
/// same for the mirror representative (pi - c1, c2, 0).
bool two_pulse_feasible(const CanonicalCoords &c_block, double ceff1,
                        double ceff2);

/// Closed-form angle solution. Throws Infeasible when |cos 2 phi_a| exceeds
/// one beyond tolerance.
TwoPulseAngles two_pulse_angles(double c1, double c2, double ceff1,
                                double ceff2);

/// Assembles the two-pulse motif circuit for the given angles.
Unitary4 assemble_two_pulse(double ceff1, double ceff2,
                            const TwoPulseAngles &a);

/// Builds the delta-interval and both motifs for synthesizing
/// can(c1, c2, c3) from three single-axis strengths, using the fixed
/// assignment (ceff[0] -> first motif, ceff[1], ceff[2] -> second). Callers
/// permute assignments. delta defaults to the upper bound but is moved
/// inside the interval when the motif angle conditions require it.
ThreePulsePlan three_pulse_plan(const CanonicalCoords &c,
                                const std::array<double, 3> &ceff);

/// Assembles the full three-pulse circuit for a plan (canonical-gate level).
Unitary4 assemble_three_pulse(const CanonicalCoords &c,
                              const std::array<double, 3> &ceff,
                              const ThreePulsePlan &plan);

/// Case 1-3 dispatcher for an explicit key of single-axis pulses. Maps each
/// canonical single-axis gate back to its physical pulse through the cached
/// Cartan frame and finishes with outer locals from the Cartan decomposition.
SynthesisResult synthesize_single_axis_with_key(const Unitary4 &target,
                                                const AnsatzKey &key,
                                                const GateSet &gs,
                                                std::uint64_t seed = 0);

/// Ascending-cost dispatch over every single-axis key in the coverage set.
SynthesisResult synthesize_single_axis(const Unitary4 &target,
                                       const GateSet &gs,
                                       const CoverageSet &coverage,
                                       std::uint64_t seed = 0);

}  // namespace weylcc
