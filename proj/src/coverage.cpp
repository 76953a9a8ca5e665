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

#include "weylcc/coverage.hpp"

#include <algorithm>
#include <cmath>

#include "weylcc/errors.hpp"
#include "weylcc/synth_closedform.hpp"
#include "weylcc/synth_numeric.hpp"

namespace weylcc {

namespace {

constexpr double kMemberTol = 1e-9;

double wrap_sum(double s) { return s <= kPi ? s : 2 * kPi - s; }

bool satisfies(const std::vector<Polytope::HalfSpace> &hs,
               const CanonicalCoords &c, double tol) {
  for (const auto &h : hs) {
    if (h.a1 * c.c1 + h.a2 * c.c2 + h.a3 * c.c3 > h.b + tol) return false;
  }
  return true;
}

Eigen::Vector3d to_vec(const CanonicalCoords &c) {
  return {c.c1, c.c2, c.c3};
}

/// Distance from p to the convex hull of pts (Gilbert/Frank-Wolfe descent on
/// the vertex set; exact enough for membership tests at lattice scale).
double hull_distance(const std::vector<CanonicalCoords> &pts,
                     const Eigen::Vector3d &p) {
  if (pts.empty()) return std::numeric_limits<double>::infinity();
  Eigen::Vector3d x = to_vec(pts[0]);
  for (const auto &q : pts) {
    if ((to_vec(q) - p).norm() < (x - p).norm()) x = to_vec(q);
  }
  for (int it = 0; it < 200; ++it) {
    const Eigen::Vector3d g = x - p;
    if (g.norm() < 1e-12) return 0.0;
    // support point minimizing <g, s>
    Eigen::Vector3d s = to_vec(pts[0]);
    for (const auto &q : pts) {
      if (g.dot(to_vec(q)) < g.dot(s)) s = to_vec(q);
    }
    const Eigen::Vector3d d = s - x;
    const double gd = g.dot(d);
    if (gd >= -1e-14) break;  // no improving vertex
    const double t = std::clamp(-gd / d.squaredNorm(), 0.0, 1.0);
    x += t * d;
  }
  return (x - p).norm();
}

}  // namespace

PulseGate make_pulse_gate(const std::string &label, const Unitary4 &unitary,
                          double duration) {
  PulseGate g;
  g.label = label;
  g.unitary = unitary;
  g.duration = duration;
  g.frame = cartan_decompose(unitary);
  g.coords = g.frame.coords;
  g.single_axis = g.coords.c2 < 1e-9 && g.coords.c3 < 1e-9;
  return g;
}

void validate_gateset(const GateSet &gs) {
  if (gs.gates.empty()) {
    throw ValidationError("gate set is empty");
  }
  const MakhlinInvariants spe =
      canonical_invariants({kPi / 2, 0, 0});
  for (const PulseGate &g : gs.gates) {
    if (canonical_invariants(g.coords).distance_mod_phase(spe) < 1e-6) {
      return;
    }
  }
  throw ValidationError(
      "gate set lacks a special perfect entangler (CX/ECR class)");
}

double sequence_cost(const AnsatzKey &key, const GateSet &gs) {
  double c = gs.one_qubit_layer_duration;  // trailing outer layer
  for (std::size_t i = 0; i < key.size(); ++i) {
    c += gs.gates.at(key.indices[i]).duration;
    if (i + 1 < key.size()) c += gs.one_qubit_layer_duration;  // inner layer
  }
  return c;
}

bool polytope_contains(const Polytope &q, const CanonicalCoords &c) {
  const auto direct = [&](const CanonicalCoords &p) {
    switch (q.kind) {
      case Polytope::Kind::FullChamber:
        return p.in_chamber(kMemberTol);
      case Polytope::Kind::Points: {
        for (const auto &s : q.special_points) {
          if (p.max_abs_diff(s) < kMemberTol) return true;
        }
        return false;
      }
      case Polytope::Kind::HalfSpaces:
        return satisfies(q.inequalities, p, kMemberTol);
      case Polytope::Kind::Probed:
        return hull_distance(q.probe_hull_inner, to_vec(p)) < kMemberTol;
    }
    return false;
  };
  if (direct(c)) return true;
  if (c.c3 < kMemberTol) {
    return direct(base_plane_mirror(c));
  }
  return false;
}

bool polytope_contains_outer(const Polytope &q, const CanonicalCoords &c) {
  if (q.kind != Polytope::Kind::Probed) return polytope_contains(q, c);
  if (hull_distance(q.probe_hull, to_vec(c)) < kMemberTol) return true;
  return c.c3 < kMemberTol &&
         hull_distance(q.probe_hull, to_vec(base_plane_mirror(c))) < kMemberTol;
}

namespace {

Polytope empty_key_polytope() {
  Polytope q;
  q.kind = Polytope::Kind::Points;
  q.special_points = {{0, 0, 0}};
  return q;
}

Polytope one_pulse_polytope(const CanonicalCoords &c) {
  Polytope q;
  q.kind = Polytope::Kind::Points;
  q.special_points = {c};
  return q;
}

Polytope two_pulse_polytope(double e1, double e2) {
  // c1 + c2 <= wrapped effective sum, c1 - c2 >= |difference|, c3 = 0.
  Polytope q;
  q.kind = Polytope::Kind::HalfSpaces;
  const double sum = wrap_sum(e1 + e2);
  const double dif = std::abs(e1 - e2);
  q.inequalities = {{1, 1, 0, sum}, {-1, 1, 0, -dif}, {0, 0, 1, 0}};
  return q;
}

Polytope three_pulse_polytope(const std::array<double, 3> &e) {
  // Descending assignment conditions: sums over the multiset.
  Polytope q;
  q.kind = Polytope::Kind::HalfSpaces;
  const double s = e[0] + e[1] + e[2];
  q.inequalities = {{1, 1, 1, s},
                    {-1, 1, 1, -e[0] + e[1] + e[2]},
                    {0, 0, 1, e[2]}};
  return q;
}

/// Lattice over the chamber for numeric feasibility probing.
std::vector<CanonicalCoords> chamber_lattice(double step) {
  std::vector<CanonicalCoords> pts;
  for (double c1 = 0; c1 <= kPi + 1e-9; c1 += step) {
    for (double c2 = 0; c2 <= std::min(c1, kPi - c1) + 1e-9; c2 += step) {
      for (double c3 = 0; c3 <= c2 + 1e-9; c3 += step) {
        pts.push_back({std::min(c1, kPi), std::min(c2, kPi / 2), c3});
      }
    }
  }
  return pts;
}

Polytope probe_polytope(const AnsatzKey &key, const GateSet &gs,
                        const CoverageConfig &cfg) {
  Polytope q;
  q.kind = Polytope::Kind::Probed;
  OptimizerConfig oc;
  oc.threshold = cfg.probe_threshold;
  oc.n_starts = cfg.probe_starts;
  oc.max_steps = cfg.probe_max_steps;
  oc.seed = cfg.seed;
  for (const CanonicalCoords &p : chamber_lattice(cfg.probe_lattice_step)) {
    const Unitary4 target = canonical_gate(p);
    OptimizeOutcome o = optimize_inner_locals_detail(key, gs, target, oc);
    if (!o.success) {
      const Unitary4 flipped = c64(0, 1) * target;
      o = optimize_inner_locals_detail(key, gs, flipped, oc);
    }
    if (o.success) q.probe_hull.push_back(p);
  }
  if (!q.probe_hull.empty()) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto &p : q.probe_hull) centroid += to_vec(p);
    centroid /= static_cast<double>(q.probe_hull.size());
    for (const auto &p : q.probe_hull) {
      Eigen::Vector3d v = to_vec(p);
      const double n = (v - centroid).norm();
      if (n > cfg.hull_shrink) {
        v += (centroid - v) * (cfg.hull_shrink / n);
      } else {
        v = centroid;
      }
      q.probe_hull_inner.push_back({v.x(), v.y(), v.z()});
    }
  }
  return q;
}

bool contained_in(const Polytope &inner, const Polytope &outer) {
  // Conservative pairwise check: exact for the structured closed-form kinds,
  // never claims containment otherwise.
  if (outer.kind == Polytope::Kind::FullChamber) return true;
  if (inner.kind == Polytope::Kind::Points) {
    for (const auto &p : inner.special_points) {
      if (!polytope_contains(outer, p)) return false;
    }
    return true;
  }
  if (inner.kind == Polytope::Kind::HalfSpaces &&
      outer.kind == Polytope::Kind::HalfSpaces) {
    // Both are of the (sum, dif, c3-cap) family; compare bounds per row.
    if (inner.inequalities.size() != outer.inequalities.size()) return false;
    for (std::size_t i = 0; i < inner.inequalities.size(); ++i) {
      const auto &a = inner.inequalities[i];
      const auto &b = outer.inequalities[i];
      if (a.a1 != b.a1 || a.a2 != b.a2 || a.a3 != b.a3) return false;
      if (a.b > b.b + 1e-12) return false;
    }
    return true;
  }
  return false;
}

}  // namespace

CoverageSet build_coverage_set(const GateSet &gs, const CoverageConfig &cfg) {
  validate_gateset(gs);
  const int n = static_cast<int>(gs.gates.size());
  std::vector<AnsatzKey> keys;
  keys.push_back({});  // identity-class blocks need no pulse
  for (int i = 0; i < n; ++i) keys.push_back({{i}});
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) keys.push_back({{i, j}});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) keys.push_back({{i, j, k}});
    }
  }
  CoverageSet cov;
  for (AnsatzKey &key : keys) {
    // store keys descending by per-gate duration
    std::sort(key.indices.begin(), key.indices.end(), [&](int a, int b) {
      if (gs.gates[a].duration != gs.gates[b].duration) {
        return gs.gates[a].duration > gs.gates[b].duration;
      }
      return a < b;
    });
    bool single = true;
    for (int idx : key.indices) single = single && gs.gates[idx].single_axis;
    CoverageEntry entry;
    entry.cost = sequence_cost(key, gs);
    if (key.empty()) {
      entry.polytope = empty_key_polytope();
    } else if (key.size() == 1) {
      // a lone pulse reaches exactly its own equivalence class
      entry.polytope = one_pulse_polytope(gs.gates[key.indices[0]].coords);
    } else if (single) {
      std::vector<double> e;
      for (int idx : key.indices) e.push_back(gs.gates[idx].coords.c1);
      std::sort(e.begin(), e.end(), std::greater<double>());
      if (key.size() == 2) {
        entry.polytope = two_pulse_polytope(e[0], e[1]);
      } else {
        entry.polytope = three_pulse_polytope({e[0], e[1], e[2]});
      }
    } else {
      entry.polytope = probe_polytope(key, gs, cfg);
    }
    entry.key = std::move(key);
    cov.entries.push_back(std::move(entry));
  }
  // Guaranteed whole-chamber entry: three applications of the cheapest
  // special perfect entangler.
  {
    const MakhlinInvariants spe = canonical_invariants({kPi / 2, 0, 0});
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (canonical_invariants(gs.gates[i].coords).distance_mod_phase(spe) <
          1e-6) {
        if (best < 0 || gs.gates[i].duration < gs.gates[best].duration) {
          best = i;
        }
      }
    }
    CoverageEntry entry;
    entry.key = {{best, best, best}};
    entry.polytope.kind = Polytope::Kind::FullChamber;
    entry.cost = sequence_cost(entry.key, gs);
    cov.entries.push_back(std::move(entry));
  }
  std::stable_sort(cov.entries.begin(), cov.entries.end(),
                   [](const CoverageEntry &a, const CoverageEntry &b) {
                     if (a.cost != b.cost) return a.cost < b.cost;
                     return a.key.indices < b.key.indices;
                   });
  // pairwise irredundancy: drop entries contained in a single cheaper one
  std::vector<CoverageEntry> kept;
  for (const CoverageEntry &entry : cov.entries) {
    bool redundant = false;
    for (const CoverageEntry &prior : kept) {
      if (prior.key == entry.key ||
          (prior.cost <= entry.cost + 1e-12 &&
           contained_in(entry.polytope, prior.polytope))) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(entry);
  }
  cov.entries = std::move(kept);
  return cov;
}

const CoverageEntry &select_ansatz(const CoverageSet &coverage,
                                   const CanonicalCoords &c) {
  for (const CoverageEntry &entry : coverage.entries) {
    if (polytope_contains(entry.polytope, c)) return entry;
  }
  throw CoverageIncomplete("no coverage entry contains the target point");
}

}  // namespace weylcc
