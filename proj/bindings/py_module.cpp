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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weylcc/characterize.hpp"
#include "weylcc/circuit.hpp"
#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/json_io.hpp"
#include "weylcc/selftest.hpp"
#include "weylcc/synth_closedform.hpp"
#include "weylcc/synth_numeric.hpp"

namespace py = pybind11;
using namespace weylcc;

namespace {

std::map<std::pair<int, int>, GateSet> gatesets_from_json_str(
    const std::string &text) {
  const ordered_json j = ordered_json::parse(text);
  std::map<std::pair<int, int>, GateSet> out;
  if (j.contains("gatesets")) {
    for (const auto &gj : j["gatesets"]) {
      GateSet gs = gateset_from_json(gj);
      out[gs.pair] = std::move(gs);
    }
  } else {
    GateSet gs = gateset_from_json(j);
    out[gs.pair] = std::move(gs);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_weylcc, m) {
  m.doc() = "two-qubit pulse characterization and compilation core";

  py::register_exception<Error>(m, "WeylccError");

  py::class_<CanonicalCoords>(m, "CanonicalCoords")
      .def(py::init<double, double, double>(), py::arg("c1"), py::arg("c2"),
           py::arg("c3"))
      .def_readonly("c1", &CanonicalCoords::c1)
      .def_readonly("c2", &CanonicalCoords::c2)
      .def_readonly("c3", &CanonicalCoords::c3)
      .def("in_chamber", &CanonicalCoords::in_chamber,
           py::arg("tol") = 1e-9)
      .def("__repr__", [](const CanonicalCoords &c) {
        return "CanonicalCoords(" + std::to_string(c.c1) + ", " +
               std::to_string(c.c2) + ", " + std::to_string(c.c3) + ")";
      });

  py::class_<MakhlinInvariants>(m, "MakhlinInvariants")
      .def_readonly("g1", &MakhlinInvariants::g1)
      .def_readonly("g2", &MakhlinInvariants::g2)
      .def("distance", &MakhlinInvariants::distance);

  py::class_<CartanFactors>(m, "CartanFactors")
      .def_readonly("w1", &CartanFactors::w1)
      .def_readonly("w2", &CartanFactors::w2)
      .def_readonly("w3", &CartanFactors::w3)
      .def_readonly("w4", &CartanFactors::w4)
      .def_readonly("coords", &CartanFactors::coords)
      .def_readonly("global_phase", &CartanFactors::global_phase)
      .def("reconstruct", &CartanFactors::reconstruct);

  m.def("canonical_gate",
        [](double c1, double c2, double c3) {
          return canonical_gate({c1, c2, c3});
        },
        py::arg("c1"), py::arg("c2"), py::arg("c3"));
  m.def("makhlin_invariants", &makhlin_invariants);
  m.def("canonical_invariants",
        [](double c1, double c2, double c3) {
          return canonical_invariants({c1, c2, c3});
        });
  m.def("canonicalize_coords", [](double c1, double c2, double c3) {
    return canonicalize_coords({c1, c2, c3});
  });
  m.def("cartan_decompose", &cartan_decompose, py::arg("u"),
        py::arg("seed") = 0);
  m.def("locally_equivalent", &locally_equivalent, py::arg("u"), py::arg("v"),
        py::arg("tol"));
  m.def("su_normalize", &su_normalize);
  m.def("herm_exp", &herm_exp);
  m.def("process_infidelity", &process_infidelity);

  m.def("controlled_unitary",
        [](const Eigen::Vector3d &u, const Eigen::Vector3d &v, double phi) {
          return controlled_unitary({u, v, phi});
        },
        py::arg("u"), py::arg("v"), py::arg("phi"));
  m.def("controlled_c1",
        [](const Eigen::Vector3d &u, const Eigen::Vector3d &v, double phi) {
          return controlled_c1({u, v, phi});
        });
  m.def("batch_schedule", &batch_schedule);

  m.def(
      "characterize_model",
      [](const Eigen::Vector3d &u, const Eigen::Vector3d &v, double phi,
         int shots, double noise, std::uint64_t seed, bool exact) {
        const ControlledPulseModel truth{u, v, phi};
        TomographyConfig cfg;
        cfg.shots = shots;
        cfg.seed = seed;
        NoiseSpec ns;
        ns.depolarizing_per_pulse = noise;
        FitConfig fc;
        fc.use_exact_probabilities = exact;
        const auto records = simulate_tomography(truth, cfg, ns);
        const auto [fit, diag] = fit_model(records, fc);
        py::dict out;
        out["u"] = fit.u;
        out["v"] = fit.v;
        out["phi"] = fit.phi;
        out["infidelity"] = process_infidelity(controlled_unitary(fit),
                                               controlled_unitary(truth));
        out["stage_residuals"] =
            py::make_tuple(diag.stage1_residual, diag.stage2_residual,
                           diag.stage3_residual);
        return out;
      },
      py::arg("u"), py::arg("v"), py::arg("phi"), py::arg("shots") = 128,
      py::arg("noise") = 1e-2, py::arg("seed") = 0, py::arg("exact") = false,
      "simulated tomography plus the three-stage fit of a controlled pulse");

  py::class_<SynthesisResult>(m, "SynthesisResult")
      .def_property_readonly(
          "key", [](const SynthesisResult &r) { return r.key.indices; })
      .def_readonly("residual", &SynthesisResult::residual)
      .def_readonly("reconstruction", &SynthesisResult::reconstruction)
      .def_readonly("global_phase", &SynthesisResult::global_phase)
      .def_readonly("cost", &SynthesisResult::cost)
      .def_readonly("closed_form", &SynthesisResult::closed_form);

  py::class_<GateSet>(m, "GateSet")
      .def_property_readonly("pair",
                             [](const GateSet &g) { return g.pair; })
      .def_property_readonly("labels", [](const GateSet &g) {
        std::vector<std::string> out;
        for (const auto &p : g.gates) out.push_back(p.label);
        return out;
      });

  m.def(
      "make_gateset",
      [](const std::vector<std::pair<std::string, std::pair<Unitary4, double>>>
             &gates,
         double layer) {
        GateSet gs;
        gs.pair = {0, 1};
        gs.one_qubit_layer_duration = layer;
        for (const auto &[label, def] : gates) {
          gs.gates.push_back(make_pulse_gate(label, def.first, def.second));
        }
        validate_gateset(gs);
        return gs;
      },
      py::arg("gates"), py::arg("one_qubit_layer_duration") = 60.0,
      "gate set from [(label, (unitary, duration)), ...]");

  m.def(
      "synthesize",
      [](const Unitary4 &target, const GateSet &gs, std::uint64_t seed) {
        const CoverageSet cov = build_coverage_set(gs);
        OptimizerConfig cfg;
        cfg.seed = seed;
        return synthesize_block(target, cov, gs, cfg);
      },
      py::arg("target"), py::arg("gateset"), py::arg("seed") = 0,
      "synthesize a two-qubit target from a gate set's coverage table");

  m.def("ecr", &gates::ecr);
  m.def("cx", &gates::cx);
  m.def("swap_gate", &gates::swap);
  m.def("cp", &gates::cp);

  // JSON-level pipeline entry points (formats match the CLI)
  m.def(
      "compile_circuit_json",
      [](const std::string &circuit_json, const std::string &gatesets_json,
         const std::string &mode, std::uint64_t seed) {
        const Circuit c = circuit_from_json(ordered_json::parse(circuit_json));
        const auto gatesets = gatesets_from_json_str(gatesets_json);
        CompileOptions options;
        options.mode = mode == "spe_only" ? CompileMode::SpeOnly
                                          : CompileMode::Extended;
        options.optimizer.seed = seed;
        return compiled_to_json(compile_circuit(c, gatesets, options)).dump();
      },
      py::arg("circuit_json"), py::arg("gatesets_json"),
      py::arg("mode") = "extended", py::arg("seed") = 0);
  m.def("qft_circuit_json", [](int n, const std::string &target) {
    return circuit_to_json(qft_circuit(n, target)).dump();
  });
  m.def("trotter_circuit_json",
        [](int n, int steps, double coupling, double field, double dt) {
          return circuit_to_json(
                     trotter_tfim_circuit(n, steps, coupling, field, dt))
              .dump();
        },
        py::arg("n"), py::arg("steps"), py::arg("coupling") = 1.0,
        py::arg("field") = 1.0, py::arg("dt") = kPi / 15);
  m.def(
      "circuit_unitary_json",
      [](const std::string &circuit_json, const std::string &gatesets_json) {
        const Circuit c = circuit_from_json(ordered_json::parse(circuit_json));
        PulseLibrary lib;
        if (!gatesets_json.empty()) {
          lib = pulse_library(gatesets_from_json_str(gatesets_json));
        }
        return circuit_unitary(c, lib);
      },
      py::arg("circuit_json"), py::arg("gatesets_json") = std::string());

  m.def("run_selftests", [](bool quick, std::uint64_t seed) {
    py::list out;
    for (const SelfTestResult &r : run_selftests(quick, seed)) {
      out.append(py::make_tuple(r.name, r.passed, r.detail));
    }
    return out;
  });

  m.attr("__version__") = "0.1.0";
}
