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

#include "weylcc/synth_closedform.hpp"

#include <algorithm>
#include <cmath>

#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"

namespace weylcc {

namespace {

constexpr double kDegenerateDen = 1e-10;

double wrap_sum(double s) { return s <= kPi ? s : 2 * kPi - s; }

/// cos(2 phi_a) for the motif, or a value of magnitude > 1 when infeasible.
double cos_two_phi(double a, double e1, double e2) {
  const double den = std::cos(e1 - e2) - std::cos(e1 + e2);
  const double num = std::cos(e1 + e2) + std::cos(e1 - e2) - 2 * std::cos(a);
  if (std::abs(den) < kDegenerateDen) {
    return std::abs(num) < kDegenerateDen ? 1.0 : 2.0;
  }
  return num / den;
}

bool motif_feasible(double c1, double c2, double e1, double e2) {
  return std::abs(cos_two_phi(c1 + c2, e1, e2)) <= 1 + 1e-12 &&
         std::abs(cos_two_phi(c1 - c2, e1, e2)) <= 1 + 1e-12;
}

/// Angles for the assembly order can(eFirst) ... can(eSecond); the algebra
/// does not require eFirst >= eSecond.
TwoPulseAngles angles_for_order(double c1, double c2, double e_first,
                                double e_second) {
  TwoPulseAngles out;
  const double se = e_first + e_second;
  const double de = e_first - e_second;
  const double den = std::cos(de) - std::cos(se);
  if (std::abs(den) < kDegenerateDen) {
    // One pulse is (nearly) trivial; only the exact single-pulse point works
    // and all angles vanish there.
    const double big = std::max(e_first, e_second);
    if (std::abs(c2) < 1e-9 &&
        (std::abs(c1 - big) < 1e-9 || std::abs(kPi - c1 - big) < 1e-9)) {
      return out;
    }
    throw Infeasible("two-pulse motif degenerate for target");
  }
  const auto solve_phi = [&](double a) {
    const double r = cos_two_phi(a, e_first, e_second);
    if (std::abs(r) > 1 + 1e-12) {
      throw Infeasible("two-pulse angle not real-valued");
    }
    return 0.5 * std::acos(std::clamp(r, -1.0, 1.0));
  };
  out.phi_sigma = solve_phi(c1 + c2);
  out.phi_delta = solve_phi(c1 - c2);
  out.phi1 = out.phi_delta + out.phi_sigma;
  out.phi2 = out.phi_delta - out.phi_sigma;
  // tan(2 gamma_{a,i}) = m_i tan(phi_a), evaluated in atan2 form to stay
  // finite at the Sigma_eff = pi boundary.
  const double ch = std::cos(se / 2), sh = std::sin(se / 2);
  const double cd = std::cos(de / 2), sd = std::sin(de / 2);
  const auto gam1 = [&](double phi) {
    return -0.5 * std::atan2(std::sin(phi) * cd, std::cos(phi) * ch);
  };
  const auto gam2 = [&](double phi) {
    return 0.5 * std::atan2(std::sin(phi) * sd, std::cos(phi) * sh);
  };
  out.gamma_d1 = gam1(out.phi_delta);
  out.gamma_d2 = gam2(out.phi_delta);
  out.gamma_s1 = gam1(out.phi_sigma);
  out.gamma_s2 = gam2(out.phi_sigma);
  out.theta1 = out.gamma_d1 + out.gamma_d2 + out.gamma_s1 + out.gamma_s2;
  out.theta2 = out.gamma_d1 + out.gamma_d2 - out.gamma_s1 - out.gamma_s2;
  out.theta3 = out.gamma_d1 - out.gamma_d2 + out.gamma_s1 - out.gamma_s2;
  out.theta4 = out.gamma_d1 - out.gamma_d2 - out.gamma_s1 + out.gamma_s2;
  return out;
}

Unitary4 can1(double e) { return canonical_gate({e, 0, 0}); }

}  // namespace

bool two_pulse_feasible(const CanonicalCoords &c_block, double ceff1,
                        double ceff2) {
  const double e1 = std::max(ceff1, ceff2);
  const double e2 = std::min(ceff1, ceff2);
  const double sum = wrap_sum(e1 + e2);
  const double dif = e1 - e2;
  const double tol = 1e-12;
  const auto ok = [&](double s, double d) {
    return s <= sum + tol && d >= dif - tol;
  };
  if (ok(c_block.c1 + c_block.c2, c_block.c1 - c_block.c2)) return true;
  // base-plane mirror representative
  return ok(kPi - c_block.c1 + c_block.c2, kPi - c_block.c1 - c_block.c2);
}

TwoPulseAngles two_pulse_angles(double c1, double c2, double ceff1,
                                double ceff2) {
  return angles_for_order(c1, c2, ceff1, ceff2);
}

Unitary4 assemble_two_pulse(double ceff1, double ceff2,
                            const TwoPulseAngles &a) {
  return kron(gates::rz(a.theta1), gates::rz(a.theta2)) * can1(ceff1) *
         kron(gates::rz(a.phi1), gates::rz(a.phi2)) * can1(ceff2) *
         kron(gates::rz(a.theta3), gates::rz(a.theta4));
}

namespace {

/// Both motifs of a three-pulse plan must have real angles for a candidate
/// delta; checked in the clamped cosine form.
bool delta_valid(double d, const CanonicalCoords &c,
                 const std::array<double, 3> &e) {
  return motif_feasible(c.c1, c.c2, e[0], d) &&
         motif_feasible(d, c.c3, e[1], e[2]);
}

}  // namespace

ThreePulsePlan three_pulse_plan(const CanonicalCoords &c,
                                const std::array<double, 3> &ceff) {
  const double e1 = ceff[0], e2 = ceff[1], e3 = ceff[2];
  ThreePulsePlan plan;
  plan.lower = std::max({c.c1 + c.c2 - e1, e1 - c.c1 + c.c2,
                         std::abs(e2 - e3) + c.c3});
  plan.upper = e2 + e3 - c.c3;
  if (plan.lower > plan.upper + 1e-12) {
    throw Infeasible("no intermediate strength satisfies the interval");
  }
  // Prefer the upper end as suggested by the interval analysis, but keep the
  // choice inside the band where both motif angle sets stay real.
  std::vector<double> cands = {std::min({plan.upper, e1 + (c.c1 - c.c2)}),
                               plan.upper, plan.lower,
                               0.5 * (plan.lower + plan.upper)};
  double delta = -1;
  for (double d : cands) {
    if (d >= plan.lower - 1e-12 && d <= plan.upper + 1e-12 &&
        delta_valid(d, c, ceff)) {
      delta = d;
      break;
    }
  }
  if (delta < 0) {
    for (int i = 0; i <= 64; ++i) {
      const double d = plan.lower + (plan.upper - plan.lower) * i / 64.0;
      if (delta_valid(d, c, ceff)) {
        delta = d;
        break;
      }
    }
  }
  if (delta < 0) {
    throw Infeasible("no valid intermediate strength in [lower, upper]");
  }
  plan.delta = std::clamp(delta, plan.lower, plan.upper);
  plan.first_motif = angles_for_order(c.c1, c.c2, e1, plan.delta);
  plan.second_motif = angles_for_order(plan.delta, c.c3, e2, e3);
  return plan;
}

Unitary4 assemble_three_pulse(const CanonicalCoords & /*target*/,
                              const std::array<double, 3> &ceff,
                              const ThreePulsePlan &plan) {
  const TwoPulseAngles &m1 = plan.first_motif;
  const TwoPulseAngles &m2 = plan.second_motif;
  const Unitary4 k = kron(gates::rx(kPi / 2), gates::rx(kPi / 2));
  const Unitary4 v2 = assemble_two_pulse(ceff[1], ceff[2], m2);
  // can(delta,0,0) can(0,0,c3) = K^dag can(delta,c3,0) K, and the ZZ factor
  // commutes through the trailing Z rotations of the first motif.
  return kron(gates::rz(m1.theta1), gates::rz(m1.theta2)) * can1(ceff[0]) *
         kron(gates::rz(m1.phi1), gates::rz(m1.phi2)) *
         (k.adjoint() * v2 * k) *
         kron(gates::rz(m1.theta3), gates::rz(m1.theta4));
}

namespace {

struct LocalPair {
  Unitary2 a = Unitary2::Identity();
  Unitary2 b = Unitary2::Identity();

  LocalPair &rmul(const Unitary2 &ta, const Unitary2 &tb) {
    a = a * ta;
    b = b * tb;
    return *this;
  }
};

std::array<double, 3> zyz_angles(const Unitary2 &u) {
  // u = rz(alpha) ry(beta) rz(gamma), det u = 1.
  const double beta = 2 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
  double sum = 0, dif = 0;
  if (std::abs(u(0, 0)) > 1e-12) sum = -2 * std::arg(u(0, 0));
  if (std::abs(u(1, 0)) > 1e-12) dif = 2 * std::arg(u(1, 0));
  return {0.5 * (sum + dif), beta, 0.5 * (sum - dif)};
}

/// Canonical-level circuit: OL can(E0) I0 can(E1) I1 can(E2) OR, with every
/// local a tensor pair.
struct CanonicalCircuit {
  std::vector<double> strengths;  // circuit order
  LocalPair outer_left;
  std::vector<LocalPair> inner;
  LocalPair outer_right;

  Unitary4 assemble() const {
    Unitary4 v = kron(outer_left.a, outer_left.b);
    for (std::size_t i = 0; i < strengths.size(); ++i) {
      v = v * can1(strengths[i]);
      if (i < inner.size()) v = v * kron(inner[i].a, inner[i].b);
    }
    return v * kron(outer_right.a, outer_right.b);
  }
};

CanonicalCircuit circuit_from_two_pulse(double eFirst, double eSecond,
                                        const TwoPulseAngles &m) {
  CanonicalCircuit c;
  c.strengths = {eFirst, eSecond};
  c.outer_left.rmul(gates::rz(m.theta1), gates::rz(m.theta2));
  c.inner.emplace_back();
  c.inner[0].rmul(gates::rz(m.phi1), gates::rz(m.phi2));
  c.outer_right.rmul(gates::rz(m.theta3), gates::rz(m.theta4));
  return c;
}

/// Three-pulse canonical circuit with the first-motif pulse placed either
/// first (delta trailing) or last (delta leading); both orders expose the
/// intermediate for replacement by the second motif.
CanonicalCircuit circuit_from_three_pulse(const CanonicalCoords &c,
                                          double ek1,
                                          const std::array<double, 2> &pair,
                                          double delta, bool k1_first,
                                          const TwoPulseAngles &m1,
                                          const TwoPulseAngles &m2) {
  (void)delta;
  (void)c;
  const Unitary2 kq = gates::rx(kPi / 2);
  CanonicalCircuit out;
  out.inner.resize(2);
  if (k1_first) {
    out.strengths = {ek1, pair[0], pair[1]};
    out.outer_left.rmul(gates::rz(m1.theta1), gates::rz(m1.theta2));
    out.inner[0]
        .rmul(gates::rz(m1.phi1), gates::rz(m1.phi2))
        .rmul(kq.adjoint(), kq.adjoint())
        .rmul(gates::rz(m2.theta1), gates::rz(m2.theta2));
    out.inner[1].rmul(gates::rz(m2.phi1), gates::rz(m2.phi2));
    out.outer_right.rmul(gates::rz(m2.theta3), gates::rz(m2.theta4))
        .rmul(kq, kq)
        .rmul(gates::rz(m1.theta3), gates::rz(m1.theta4));
  } else {
    out.strengths = {pair[0], pair[1], ek1};
    out.outer_left.rmul(gates::rz(m1.theta1), gates::rz(m1.theta2))
        .rmul(kq.adjoint(), kq.adjoint())
        .rmul(gates::rz(m2.theta1), gates::rz(m2.theta2));
    out.inner[0].rmul(gates::rz(m2.phi1), gates::rz(m2.phi2));
    out.inner[1]
        .rmul(gates::rz(m2.theta3), gates::rz(m2.theta4))
        .rmul(kq, kq)
        .rmul(gates::rz(m1.phi1), gates::rz(m1.phi2));
    out.outer_right.rmul(gates::rz(m1.theta3), gates::rz(m1.theta4));
  }
  return out;
}

/// Replaces each canonical factor by the physical pulse through its cached
/// frame, merging the frame locals into the neighbors, and extracts the
/// inner Z-Y-Z angles.
SynthesisResult realize_circuit(const Unitary4 &target,
                                const CanonicalCircuit &circ,
                                const std::vector<int> &gate_order,
                                const GateSet &gs, std::uint64_t seed) {
  std::vector<LocalPair> locals(circ.strengths.size() + 1);
  locals.front() = circ.outer_left;
  for (std::size_t i = 0; i < circ.inner.size(); ++i) {
    locals[i + 1] = circ.inner[i];
  }
  locals.back() = circ.outer_right;
  for (std::size_t i = 0; i < gate_order.size(); ++i) {
    const CartanFactors &f = gs.gates.at(gate_order[i]).frame;
    // can(e) = e^{-i phase} (w1 x w2)^dag U_pulse (w3 x w4)^dag
    locals[i].a = locals[i].a * f.w1.adjoint();
    locals[i].b = locals[i].b * f.w2.adjoint();
    locals[i + 1].a = f.w3.adjoint() * locals[i + 1].a;
    locals[i + 1].b = f.w4.adjoint() * locals[i + 1].b;
  }
  SynthesisResult r;
  r.closed_form = true;
  r.key.indices = gate_order;
  for (std::size_t i = 1; i + 1 < locals.size(); ++i) {
    r.inner.zyz.push_back(zyz_angles(locals[i].a));
    r.inner.zyz.push_back(zyz_angles(locals[i].b));
  }
  const Unitary4 v = build_ansatz_unitary(r.key, gs, r.inner);
  const OuterLocals outer = compute_outer_locals(target, v, seed);
  r.outer = outer.v;
  r.global_phase = outer.phase;
  r.reconstruction = std::polar(1.0, outer.phase) * kron(r.outer[0], r.outer[1]) *
                     v * kron(r.outer[2], r.outer[3]);
  const MakhlinInvariants gv = makhlin_invariants(v);
  const MakhlinInvariants gt = makhlin_invariants(target);
  const double d = gv.distance_mod_phase(gt);
  r.residual = d * d;
  return r;
}

}  // namespace

SynthesisResult synthesize_single_axis_with_key(const Unitary4 &target,
                                                const AnsatzKey &key,
                                                const GateSet &gs,
                                                std::uint64_t seed) {
  for (int idx : key.indices) {
    const PulseGate &g = gs.gates.at(idx);
    if (!g.single_axis) {
      throw NotSingleAxis("gate " + g.label + " has c2 or c3 above 1e-9");
    }
  }
  const CanonicalCoords c = cartan_decompose(target, seed).coords;
  const CanonicalCoords cm = base_plane_mirror(c);
  const bool on_base = c.c3 < 1e-9;

  if (key.size() == 1) {
    const PulseGate &g = gs.gates.at(key.indices[0]);
    const double e = g.coords.c1;
    const bool hit = on_base && c.c2 < 1e-9 &&
                     (std::abs(c.c1 - e) < 1e-9 ||
                      std::abs(kPi - c.c1 - e) < 1e-9);
    if (!hit) throw Infeasible("target is not the single-pulse point");
    SynthesisResult r;
    r.closed_form = true;
    r.key = key;
    const OuterLocals outer = compute_outer_locals(target, g.unitary, seed);
    r.outer = outer.v;
    r.global_phase = outer.phase;
    r.reconstruction = std::polar(1.0, outer.phase) *
                       kron(r.outer[0], r.outer[1]) * g.unitary *
                       kron(r.outer[2], r.outer[3]);
    const double d = makhlin_invariants(g.unitary)
                         .distance_mod_phase(makhlin_invariants(target));
    r.residual = d * d;
    return r;
  }

  if (key.size() == 2) {
    if (!on_base) {
      throw Infeasible("two pulses cannot leave the c3 = 0 plane");
    }
    const int i0 = key.indices[0], i1 = key.indices[1];
    const double e0 = gs.gates.at(i0).coords.c1;
    const double e1 = gs.gates.at(i1).coords.c1;
    for (const CanonicalCoords &tc : {c, cm}) {
      try {
        const TwoPulseAngles m = angles_for_order(tc.c1, tc.c2, e0, e1);
        const CanonicalCircuit circ = circuit_from_two_pulse(e0, e1, m);
        return realize_circuit(target, circ, {i0, i1}, gs, seed);
      } catch (const Infeasible &) {
        continue;
      }
    }
    throw Infeasible("two-pulse conditions fail for target and mirror");
  }

  if (key.size() == 3) {
    // Try assignments of the key's gates to the dedicated first-motif slot;
    // the remaining two feed the second motif in descending order. The
    // mirror image is a distinct class off the base plane, so it is only
    // tried for c3 = 0 targets.
    std::vector<CanonicalCoords> reps = {c};
    if (on_base) reps.push_back(cm);
    for (const CanonicalCoords &tc : reps) {
      for (int slot = 0; slot < 3; ++slot) {
        std::vector<int> rest;
        for (int j = 0; j < 3; ++j) {
          if (j != slot) rest.push_back(key.indices[j]);
        }
        const int ik1 = key.indices[slot];
        const double ek1 = gs.gates.at(ik1).coords.c1;
        if (gs.gates.at(rest[0]).coords.c1 < gs.gates.at(rest[1]).coords.c1) {
          std::swap(rest[0], rest[1]);
        }
        const std::array<double, 2> pr = {gs.gates.at(rest[0]).coords.c1,
                                          gs.gates.at(rest[1]).coords.c1};
        ThreePulsePlan plan;
        try {
          plan = three_pulse_plan(tc, {ek1, pr[0], pr[1]});
        } catch (const Infeasible &) {
          continue;
        }
        const bool k1_first = ek1 >= pr[0];
        TwoPulseAngles m1 = plan.first_motif;
        if (!k1_first) {
          // delta leads the first motif in this order
          m1 = angles_for_order(tc.c1, tc.c2, plan.delta, ek1);
        }
        const CanonicalCircuit circ = circuit_from_three_pulse(
            tc, ek1, pr, plan.delta, k1_first, m1, plan.second_motif);
        std::vector<int> order = k1_first
                                     ? std::vector<int>{ik1, rest[0], rest[1]}
                                     : std::vector<int>{rest[0], rest[1], ik1};
        return realize_circuit(target, circ, order, gs, seed);
      }
    }
    throw Infeasible("three-pulse construction failed for target and mirror");
  }
  throw Infeasible("unsupported key length");
}

SynthesisResult synthesize_single_axis(const Unitary4 &target,
                                       const GateSet &gs,
                                       const CoverageSet &coverage,
                                       std::uint64_t seed) {
  const CanonicalCoords c = cartan_decompose(target, seed).coords;
  bool any = false;
  for (const CoverageEntry &entry : coverage.entries) {
    if (entry.key.empty()) continue;
    bool single = true;
    for (int idx : entry.key.indices) {
      single = single && gs.gates.at(idx).single_axis;
    }
    if (!single || !polytope_contains(entry.polytope, c)) continue;
    any = true;
    try {
      SynthesisResult r =
          synthesize_single_axis_with_key(target, entry.key, gs, seed);
      r.cost = entry.cost;
      return r;
    } catch (const Infeasible &) {
      continue;
    }
  }
  throw Infeasible(any ? "selected single-axis keys all failed"
                       : "no single-axis coverage entry contains the target");
}

}  // namespace weylcc
