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

TEST_CASE("build_ansatz_unitary") {
  const GateSet gs = test_support::benchmark_gateset();
  LocalAngles none;
  const Unitary4 v1 = build_ansatz_unitary({{0}}, gs, none);
  CHECK(max_abs_diff(v1, gs.gates[0].unitary) < 1e-15);

  LocalAngles idl;
  idl.zyz = {{0, 0, 0}, {0, 0, 0}};
  const Unitary4 v2 = build_ansatz_unitary({{0, 1}}, gs, idl);
  CHECK(max_abs_diff(v2, Unitary4(gs.gates[0].unitary * gs.gates[1].unitary)) <
        1e-15);

  auto rng = make_rng(20, "ansatz");
  std::uniform_real_distribution<double> ud(-kPi, kPi);
  LocalAngles rnd;
  for (int i = 0; i < 4; ++i) rnd.zyz.push_back({ud(rng), ud(rng), ud(rng)});
  const Unitary4 v3 = build_ansatz_unitary({{0, 1, 1}}, gs, rnd);
  CHECK(is_unitary(v3, 1e-12));

  CHECK_THROWS_AS(build_ansatz_unitary({{0, 1}}, gs, none), ShapeMismatch);
}

TEST_CASE("invariant_loss") {
  auto rng = make_rng(21, "loss");
  const Unitary4 u = haar_random_su4(rng);
  CHECK(invariant_loss(u, u) < 1e-24);
  CHECK(invariant_loss(Unitary4::Identity(), gates::cx()) ==
        doctest::Approx(5.0).epsilon(1e-12));
  const Unitary4 v = kron(haar_random_su2(rng), haar_random_su2(rng)) * u *
                     kron(haar_random_su2(rng), haar_random_su2(rng));
  CHECK(invariant_loss(u, v) < 1e-10);
}

TEST_CASE("optimize_inner_locals construct-then-recover") {
  auto rng = make_rng(22, "recover");
  std::uniform_real_distribution<double> ud(-kPi, kPi);
  const GateSet gs = test_support::haar_gateset(3, 23);
  const AnsatzKey key{{0, 1, 2}};
  for (int trial = 0; trial < 5; ++trial) {
    LocalAngles inner;
    for (int i = 0; i < 4; ++i) {
      inner.zyz.push_back({ud(rng), ud(rng), ud(rng)});
    }
    const Unitary4 target = build_ansatz_unitary(key, gs, inner);
    OptimizerConfig cfg;
    cfg.seed = 100 + trial;
    const auto [angles, residual] = optimize_inner_locals(key, gs, target, cfg);
    CHECK(residual <= 1e-10);
    const Unitary4 v = build_ansatz_unitary(key, gs, angles);
    CHECK(invariant_loss(v, target) <= 1e-9);
  }
}

TEST_CASE("optimize_inner_locals degenerate single-gate ansatz") {
  const GateSet gs = test_support::benchmark_gateset();
  OptimizerConfig cfg;
  // target locally equivalent to the pulse itself
  const Unitary4 target = kron(gates::rz(0.3), gates::ry(0.4)) *
                          gs.gates[0].unitary *
                          kron(gates::ry(-0.2), gates::rz(0.9));
  const auto out = optimize_inner_locals_detail({{0}}, gs, target, cfg);
  CHECK(out.success);
  CHECK(out.total_steps == 0);
}

TEST_CASE("optimize_inner_locals infeasibility evidence") {
  // two quarter-pulses cannot reach SWAP
  const GateSet gs = test_support::benchmark_gateset();
  OptimizerConfig cfg;
  cfg.n_starts = 3;
  CHECK_THROWS_AS(
      (void)optimize_inner_locals({{0, 0}}, gs, gates::swap(), cfg),
      ConvergenceFailure);
  try {
    (void)optimize_inner_locals({{0, 0}}, gs, gates::swap(), cfg);
  } catch (const ConvergenceFailure &e) {
    CHECK(e.best_residual > 1e-6);
    CHECK(e.best_angles.size() == 6);
  }
}

TEST_CASE("compute_outer_locals") {
  auto rng = make_rng(24, "outer");
  const Unitary4 v = haar_random_su4(rng);
  const OuterLocals same = compute_outer_locals(v, v);
  const Unitary4 rec = std::polar(1.0, same.phase) *
                       kron(same.v[0], same.v[1]) * v *
                       kron(same.v[2], same.v[3]);
  CHECK(max_abs_diff(rec, v) < 1e-10);

  for (int i = 0; i < 20; ++i) {
    const Unitary4 base = haar_random_su4(rng);
    const Unitary4 target = kron(haar_random_su2(rng), haar_random_su2(rng)) *
                            base *
                            kron(haar_random_su2(rng), haar_random_su2(rng));
    const OuterLocals o = compute_outer_locals(target, base, i);
    const Unitary4 r = std::polar(1.0, o.phase) * kron(o.v[0], o.v[1]) * base *
                       kron(o.v[2], o.v[3]);
    CHECK(max_abs_diff(r, target) < 1e-9);
  }

  const Unitary4 a = haar_random_su4(rng);
  const Unitary4 b = haar_random_su4(rng);
  CHECK_THROWS_AS((void)compute_outer_locals(a, b), NotLocallyEquivalent);
}

TEST_CASE("synthesize_block routes by coverage") {
  const GateSet gs = test_support::benchmark_gateset();
  const CoverageSet cov = build_coverage_set(gs);

  // identity-class block: outer locals only
  auto rng = make_rng(25, "blocks");
  const Unitary4 local =
      kron(haar_random_su2(rng), haar_random_su2(rng));
  const SynthesisResult r0 = synthesize_block(local, cov, gs);
  CHECK(r0.key.empty());
  CHECK(max_abs_diff(r0.reconstruction, local) < 1e-9);

  // CX goes to two efficient pulses (cost 320 beats the 380 ECR route)
  const SynthesisResult r1 = synthesize_block(gates::cx(), cov, gs);
  CHECK(r1.key.size() == 2);
  CHECK(gs.gates[r1.key.indices[0]].label == "p0");
  CHECK(gs.gates[r1.key.indices[1]].label == "p0");
  CHECK(max_abs_diff(r1.reconstruction, gates::cx()) < 1e-8);

  // SWAP requires three pulses
  const SynthesisResult r2 = synthesize_block(gates::swap(), cov, gs);
  CHECK(r2.key.size() == 3);
  CHECK(max_abs_diff(r2.reconstruction, gates::swap()) < 1e-9);
}

TEST_CASE("synthesis success rate on the random-target protocol") {
  // Mini version of the acceptance run: targets are three Haar gates with
  // random interleaved locals, recovered with the same three gates.
  int ok = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    const GateSet gs = test_support::haar_gateset(3, 1000 + t);
    auto rng = make_rng(26, "figtwo", t);
    std::uniform_real_distribution<double> ud(-kPi, kPi);
    LocalAngles inner;
    for (int i = 0; i < 4; ++i) {
      inner.zyz.push_back({ud(rng), ud(rng), ud(rng)});
    }
    const AnsatzKey key{{0, 1, 2}};
    const Unitary4 target = build_ansatz_unitary(key, gs, inner);
    OptimizerConfig cfg;
    cfg.seed = t;
    const auto out = optimize_inner_locals_detail(key, gs, target, cfg);
    ok += out.success ? 1 : 0;
  }
  CHECK(ok >= trials - 1);
}

TEST_CASE("loss invariant under key permutation") {
  // the minimum achieved residual is order-independent
  for (int t = 0; t < 6; ++t) {
    const GateSet gs = test_support::haar_gateset(3, 50 + t);
    auto rng = make_rng(27, "perm", t);
    const Unitary4 target = haar_random_su4(rng);
    OptimizerConfig cfg;
    cfg.seed = t;
    const auto a = optimize_inner_locals_detail({{0, 1, 2}}, gs, target, cfg);
    const auto b = optimize_inner_locals_detail({{2, 0, 1}}, gs, target, cfg);
    CHECK(std::abs(a.residual - b.residual) < 1e-8);
  }
}
