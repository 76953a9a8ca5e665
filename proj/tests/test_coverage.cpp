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

#include <doctest.h>

#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/synth_numeric.hpp"
#include "weylcc/test_support.hpp"

using namespace weylcc;

TEST_CASE("make_pulse_gate caches frame data") {
  const PulseGate ecr = make_pulse_gate("ecr", gates::ecr(), 320);
  CHECK(ecr.coords.max_abs_diff({kPi / 2, 0, 0}) < 1e-9);
  CHECK(ecr.single_axis);
  CHECK(max_abs_diff(ecr.frame.reconstruct(), gates::ecr()) < 1e-9);

  const PulseGate p = make_pulse_gate(
      "p", canonical_gate({kPi / 4 + 0.05, 0, 0}), 100);
  CHECK(p.coords.max_abs_diff({kPi / 4 + 0.05, 0, 0}) < 1e-9);
  CHECK(p.single_axis);

  const PulseGate b =
      make_pulse_gate("b", canonical_gate({kPi / 2, kPi / 4, 0}), 200);
  CHECK_FALSE(b.single_axis);
  CHECK(b.coords.c2 == doctest::Approx(kPi / 4));
}

TEST_CASE("sequence_cost charges pulses plus layers") {
  const GateSet gs = test_support::benchmark_gateset();
  CHECK(sequence_cost({{1}}, gs) == doctest::Approx(380));
  CHECK(sequence_cost({{0, 0}}, gs) == doctest::Approx(320));
  CHECK(sequence_cost({}, gs) == doctest::Approx(60));
}

TEST_CASE("gateset validation requires a special perfect entangler") {
  GateSet gs;
  gs.pair = {0, 1};
  gs.one_qubit_layer_duration = 60;
  gs.gates.push_back(
      make_pulse_gate("weak", canonical_gate({kPi / 4, 0, 0}), 100));
  CHECK_THROWS_AS(validate_gateset(gs), ValidationError);
  gs.gates.push_back(make_pulse_gate("ecr", gates::ecr(), 320));
  CHECK_NOTHROW(validate_gateset(gs));
}

TEST_CASE("coverage polytopes for the benchmark gateset") {
  const GateSet gs = test_support::benchmark_gateset();
  const CoverageSet cov = build_coverage_set(gs);

  // ascending cost
  for (std::size_t i = 1; i < cov.entries.size(); ++i) {
    CHECK(cov.entries[i - 1].cost <= cov.entries[i].cost + 1e-12);
  }

  const auto find_key = [&](const std::vector<int> &k) -> const CoverageEntry * {
    for (const auto &e : cov.entries) {
      if (e.key.indices == k) return &e;
    }
    return nullptr;
  };

  const CoverageEntry *pp = find_key({0, 0});
  REQUIRE(pp != nullptr);
  // {(c1,c2,0): c1+c2 <= pi/2 + 0.1} plus the base-plane mirror
  CHECK(polytope_contains(pp->polytope, {kPi / 2, 0, 0}));
  CHECK(polytope_contains(pp->polytope, {kPi / 4, kPi / 4, 0}));
  CHECK_FALSE(polytope_contains(pp->polytope, {kPi / 2, 0.2, 0}));
  CHECK_FALSE(
      polytope_contains(pp->polytope, {kPi / 2, kPi / 2, kPi / 2}));
  CHECK(polytope_contains(pp->polytope, {kPi - 0.3, 0.2, 0}));  // mirror

  const CoverageEntry *ee = find_key({1, 1});
  REQUIRE(ee != nullptr);
  // the whole c3 = 0 plane
  CHECK(polytope_contains(ee->polytope, {2.8, 0.3, 0}));
  CHECK(polytope_contains(ee->polytope, {kPi / 2, kPi / 2, 0}));
  CHECK_FALSE(polytope_contains(ee->polytope, {kPi / 2, 0.4, 0.1}));

  const CoverageEntry *eee = find_key({1, 1, 1});
  REQUIRE(eee != nullptr);
  CHECK(polytope_contains(eee->polytope, {kPi / 2, kPi / 2, kPi / 2}));
  CHECK(polytope_contains(eee->polytope, {1.2, 0.9, 0.4}));
}

TEST_CASE("select_ansatz picks cheapest containing entry") {
  const GateSet gs = test_support::benchmark_gateset();
  const CoverageSet cov = build_coverage_set(gs);
  CHECK(select_ansatz(cov, {0, 0, 0}).key.empty());
  const CoverageEntry &cx = select_ansatz(cov, {kPi / 2, 0, 0});
  CHECK(cx.key.indices == std::vector<int>{0, 0});
  CHECK(cx.cost == doctest::Approx(320));
  const CoverageEntry &sw = select_ansatz(cov, {kPi / 2, kPi / 2, kPi / 2});
  CHECK(sw.key.size() == 3);
}

TEST_CASE("coverage completeness on random chamber points") {
  const GateSet gs = test_support::benchmark_gateset();
  const CoverageSet cov = build_coverage_set(gs);
  auto rng = make_rng(40, "complete");
  std::uniform_real_distribution<double> ud(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double c1 = ud(rng) * kPi;
    const double c2 = ud(rng) * std::min(c1, kPi - c1);
    const double c3 = ud(rng) * c2;
    CHECK_NOTHROW((void)select_ansatz(cov, {c1, c2, c3}));
  }
}

TEST_CASE("coverage monotonicity under gateset extension") {
  GateSet base;
  base.pair = {0, 1};
  base.one_qubit_layer_duration = 60;
  base.gates.push_back(make_pulse_gate("ecr", gates::ecr(), 320));
  GateSet ext = base;
  ext.gates.push_back(
      make_pulse_gate("p", canonical_gate({kPi / 4 + 0.05, 0, 0}), 100));
  const CoverageSet cb = build_coverage_set(base);
  const CoverageSet ce = build_coverage_set(ext);
  auto rng = make_rng(41, "monotone");
  std::uniform_real_distribution<double> ud(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double c1 = ud(rng) * kPi;
    const double c2 = ud(rng) * std::min(c1, kPi - c1);
    const double c3 = ud(rng) * c2;
    const CanonicalCoords c{c1, c2, c3};
    CHECK(select_ansatz(ce, c).cost <= select_ansatz(cb, c).cost + 1e-9);
  }
}

TEST_CASE("probed polytope for a non-single-axis gate") {
  GateSet gs;
  gs.pair = {0, 1};
  gs.one_qubit_layer_duration = 60;
  gs.gates.push_back(
      make_pulse_gate("b", canonical_gate({kPi / 2, kPi / 4, 0}), 200));
  gs.gates.push_back(make_pulse_gate("ecr", gates::ecr(), 320));
  CoverageConfig cfg;
  cfg.probe_lattice_step = kPi / 6;  // coarse; this is a smoke test
  cfg.probe_starts = 2;
  const CoverageSet cov = build_coverage_set(gs, cfg);
  bool saw_probed = false;
  for (const auto &e : cov.entries) {
    if (e.polytope.kind == Polytope::Kind::Probed) {
      saw_probed = true;
      CHECK_FALSE(e.polytope.probe_hull.empty());
    }
  }
  CHECK(saw_probed);
  // the B + B pair reaches CX-class points (B is one application short of
  // everything): synthesize a CX through the full pipeline
  const SynthesisResult r = synthesize_block(gates::cx(), cov, gs);
  CHECK(max_abs_diff(r.reconstruction, gates::cx()) < 1e-8);
}
