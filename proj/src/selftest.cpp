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

#include "weylcc/selftest.hpp"

#include <cmath>
#include <sstream>

#include "weylcc/characterize.hpp"
#include "weylcc/circuit.hpp"
#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/synth_closedform.hpp"
#include "weylcc/synth_numeric.hpp"

namespace weylcc {

namespace {

CanonicalCoords random_chamber(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> ud(0, 1);
  const double c1 = ud(rng) * kPi;
  const double c2 = ud(rng) * std::min(c1, kPi - c1);
  return {c1, c2, ud(rng) * c2};
}

GateSet benchmark_gateset() {
  GateSet gs;
  gs.pair = {0, 1};
  gs.one_qubit_layer_duration = 60;
  gs.gates.push_back(
      make_pulse_gate("p", canonical_gate({kPi / 4 + 0.05, 0, 0}), 100));
  gs.gates.push_back(make_pulse_gate("ecr", gates::ecr(), 320));
  return gs;
}

}  // namespace

std::vector<SelfTestResult> run_selftests(
    bool quick, std::uint64_t seed,
    const std::function<void(const SelfTestResult &)> &report) {
  std::vector<SelfTestResult> results;
  const auto add = [&](const std::string &name, bool ok,
                       const std::string &detail) {
    results.push_back({name, ok, detail});
    if (report) report(results.back());
  };

  const int n_inv = quick ? 100 : 1000;
  {
    auto rng = make_rng(seed, "st-invariants");
    double worst = 0;
    for (int i = 0; i < n_inv; ++i) {
      const CanonicalCoords c = random_chamber(rng);
      worst = std::max(worst, canonical_invariants(c).distance(
                                  makhlin_invariants(canonical_gate(c))));
    }
    std::ostringstream os;
    os << "max deviation " << worst << " over " << n_inv << " points";
    add("canonical-invariant closed form", worst < 1e-12, os.str());
  }
  {
    auto rng = make_rng(seed, "st-kak");
    double worst = 0;
    const int n = quick ? 50 : 300;
    for (int i = 0; i < n; ++i) {
      const Unitary4 u = haar_random_su4(rng);
      worst = std::max(
          worst, max_abs_diff(cartan_decompose(u, i).reconstruct(), u));
    }
    std::ostringstream os;
    os << "max reconstruction residual " << worst;
    add("cartan decomposition round trip", worst < 1e-8, os.str());
  }
  {
    auto rng = make_rng(seed, "st-c1");
    double worst = 0;
    const int n = quick ? 50 : 300;
    for (int i = 0; i < n; ++i) {
      ControlledPulseModel m;
      std::normal_distribution<double> nd(0, 0.8);
      m.u = {nd(rng), nd(rng), nd(rng)};
      m.v = {nd(rng), nd(rng), nd(rng)};
      m.phi = nd(rng);
      const double kak = cartan_decompose(controlled_unitary(m), i).coords.c1;
      worst = std::max(worst, std::abs(controlled_c1(m) - kak));
    }
    std::ostringstream os;
    os << "max |closed form - KAK| " << worst;
    add("controlled-pulse c1 formula", worst < 1e-9, os.str());
  }
  {
    const GateSet gs = benchmark_gateset();
    const CoverageSet cov = build_coverage_set(gs);
    auto rng = make_rng(seed, "st-cover");
    const int n = quick ? 300 : 2000;
    int synth_fail = 0;
    double worst = 0;
    bool complete = true;
    for (int i = 0; i < n; ++i) {
      const CanonicalCoords c = random_chamber(rng);
      try {
        (void)select_ansatz(cov, c);
      } catch (const CoverageIncomplete &) {
        complete = false;
        break;
      }
      const Unitary4 target = kron(haar_random_su2(rng), haar_random_su2(rng)) *
                              canonical_gate(c) *
                              kron(haar_random_su2(rng), haar_random_su2(rng));
      try {
        const SynthesisResult r = synthesize_block(target, cov, gs, {});
        worst = std::max(worst, max_abs_diff(r.reconstruction, target));
      } catch (const Error &) {
        ++synth_fail;
      }
    }
    std::ostringstream os;
    os << n << " points, " << synth_fail << " synthesis failures, worst "
       << "reconstruction " << worst;
    add("coverage completeness and consistency",
        complete && synth_fail == 0 && worst < 1e-8, os.str());
  }
  {
    const GateSet gs = benchmark_gateset();
    const CoverageSet cov = build_coverage_set(gs);
    const SynthesisResult r = synthesize_block(gates::swap(), cov, gs, {});
    std::ostringstream os;
    os << "key length " << r.key.size() << ", residual "
       << max_abs_diff(r.reconstruction, gates::swap());
    add("three-pulse SWAP synthesis",
        r.key.size() == 3 &&
            max_abs_diff(r.reconstruction, gates::swap()) < 1e-9,
        os.str());
  }
  {
    auto rng = make_rng(seed, "st-fit");
    TomographyConfig cfg;
    cfg.seed = seed;
    NoiseSpec clean;
    clean.depolarizing_per_pulse = 0;
    FitConfig fc;
    fc.use_exact_probabilities = true;
    double worst = 0;
    const int n = quick ? 3 : 10;
    for (int i = 0; i < n; ++i) {
      ControlledPulseModel truth;
      std::normal_distribution<double> nd(0, 0.7);
      truth.u = {nd(rng), nd(rng), nd(rng)};
      truth.v = {nd(rng), nd(rng), nd(rng)};
      truth.phi = nd(rng);
      cfg.seed = seed + i;
      const auto recs = simulate_tomography(truth, cfg, clean);
      const auto [fit, diag] = fit_model(recs, fc);
      worst = std::max(worst,
                       process_infidelity(controlled_unitary(fit),
                                          controlled_unitary(truth)));
    }
    std::ostringstream os;
    os << "worst noiseless reconstruction infidelity " << worst;
    add("tomography fit (noiseless, exact)", worst < 1e-8, os.str());
  }
  {
    const auto make_gatesets = [&] {
      std::map<std::pair<int, int>, GateSet> out;
      for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
          GateSet gs = benchmark_gateset();
          gs.pair = {a, b};
          gs.gates[0].label = "p@" + std::to_string(a) + std::to_string(b);
          gs.gates[1].label = "e@" + std::to_string(a) + std::to_string(b);
          out[{a, b}] = std::move(gs);
        }
      }
      return out;
    };
    const auto gatesets = make_gatesets();
    const PulseLibrary lib = pulse_library(gatesets);
    auto rng = make_rng(seed, "st-compile");
    std::uniform_int_distribution<int> qd(0, 2);
    std::uniform_real_distribution<double> ad(-kPi, kPi);
    double worst = 0;
    bool dominated = true;
    const int n = quick ? 3 : 8;
    for (int t = 0; t < n; ++t) {
      Circuit c;
      c.num_qubits = 3;
      for (int i = 0; i < 10; ++i) {
        int a = qd(rng), b = qd(rng);
        while (b == a) b = qd(rng);
        if (i % 3 == 0) {
          c.gates.push_back({"ry", {a}, {ad(rng)}, {}, {}});
        } else {
          c.gates.push_back({"cp", {a, b}, {ad(rng)}, {}, {}});
        }
      }
      CompileOptions ext, spe;
      spe.mode = CompileMode::SpeOnly;
      ext.optimizer.seed = spe.optimizer.seed = seed + t;
      const CompiledCircuit ce = compile_circuit(c, gatesets, ext);
      const CompiledCircuit cs = compile_circuit(c, gatesets, spe);
      worst = std::max(
          worst, process_infidelity_dyn(circuit_unitary(c, lib),
                                        circuit_unitary(ce.circuit, lib)));
      worst = std::max(
          worst, process_infidelity_dyn(circuit_unitary(c, lib),
                                        circuit_unitary(cs.circuit, lib)));
      dominated = dominated && ce.total_two_qubit_duration <=
                                   cs.total_two_qubit_duration + 1e-9;
    }
    std::ostringstream os;
    os << "worst compile infidelity " << worst
       << (dominated ? ", durations dominated" : ", duration dominance lost");
    add("end-to-end compilation", worst < 1e-7 && dominated, os.str());
  }
  return results;
}

}  // namespace weylcc
