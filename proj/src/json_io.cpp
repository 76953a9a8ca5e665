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

#include "weylcc/json_io.hpp"

#include "weylcc/errors.hpp"

namespace weylcc {

namespace {

template <typename Mat>
ordered_json mat_to_json(const Mat &m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      rows.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return rows;
}

template <typename Mat>
Mat mat_from_json(const ordered_json &j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim * dim) {
    throw ValidationError("matrix JSON must hold " +
                          std::to_string(dim * dim) + " [re, im] pairs");
  }
  Mat m;
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      const auto &cell = j[i * dim + k];
      if (!cell.is_array() || cell.size() != 2) {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
      m(i, k) = c64(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

}  // namespace

ordered_json matrix_to_json(const Unitary4 &m) { return mat_to_json(m); }
ordered_json matrix_to_json(const Unitary2 &m) { return mat_to_json(m); }
Unitary4 matrix4_from_json(const ordered_json &j) {
  return mat_from_json<Unitary4>(j, 4);
}
Unitary2 matrix2_from_json(const ordered_json &j) {
  return mat_from_json<Unitary2>(j, 2);
}

ordered_json gateset_to_json(const GateSet &gs) {
  ordered_json j;
  j["pair"] = {gs.pair.first, gs.pair.second};
  j["one_qubit_layer_duration"] = gs.one_qubit_layer_duration;
  j["gates"] = ordered_json::array();
  for (const PulseGate &g : gs.gates) {
    ordered_json gj;
    gj["label"] = g.label;
    gj["duration"] = g.duration;
    gj["unitary"] = matrix_to_json(g.unitary);
    j["gates"].push_back(std::move(gj));
  }
  return j;
}

GateSet gateset_from_json(const ordered_json &j) {
  GateSet gs;
  try {
    gs.pair = {j.at("pair").at(0).get<int>(), j.at("pair").at(1).get<int>()};
    gs.one_qubit_layer_duration =
        j.at("one_qubit_layer_duration").get<double>();
    for (const auto &gj : j.at("gates")) {
      gs.gates.push_back(make_pulse_gate(gj.at("label").get<std::string>(),
                                         matrix4_from_json(gj.at("unitary")),
                                         gj.at("duration").get<double>()));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed gate-set JSON: ") + e.what());
  }
  validate_gateset(gs);
  return gs;
}

ordered_json circuit_to_json(const Circuit &c) {
  ordered_json j;
  j["num_qubits"] = c.num_qubits;
  j["gates"] = ordered_json::array();
  for (const Gate &g : c.gates) {
    ordered_json gj;
    gj["name"] = g.name;
    gj["qubits"] = g.qubits;
    if (!g.params.empty()) gj["params"] = g.params;
    if (g.matrix) gj["matrix"] = matrix_to_json(*g.matrix);
    if (!g.label.empty()) gj["label"] = g.label;
    j["gates"].push_back(std::move(gj));
  }
  return j;
}

Circuit circuit_from_json(const ordered_json &j) {
  Circuit c;
  try {
    c.num_qubits = j.at("num_qubits").get<int>();
    for (const auto &gj : j.at("gates")) {
      Gate g;
      g.name = gj.at("name").get<std::string>();
      g.qubits = gj.at("qubits").get<std::vector<int>>();
      if (gj.contains("params")) {
        g.params = gj["params"].get<std::vector<double>>();
      }
      if (gj.contains("matrix")) g.matrix = matrix4_from_json(gj["matrix"]);
      if (gj.contains("label")) g.label = gj["label"].get<std::string>();
      c.gates.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed circuit JSON: ") + e.what());
  }
  return c;
}

ordered_json compiled_to_json(const CompiledCircuit &cc) {
  ordered_json j;
  j["circuit"] = circuit_to_json(cc.circuit);
  j["total_two_qubit_duration"] = cc.total_two_qubit_duration;
  j["block_reports"] = ordered_json::array();
  for (const BlockReport &r : cc.block_reports) {
    ordered_json rj;
    rj["pair"] = {r.pair.first, r.pair.second};
    rj["pulses"] = r.pulse_labels;
    rj["cost"] = r.cost;
    rj["residual"] = r.residual;
    rj["closed_form"] = r.closed_form;
    j["block_reports"].push_back(std::move(rj));
  }
  return j;
}

ordered_json coverage_to_json(const CoverageSet &cov, const GateSet &gs) {
  ordered_json j = ordered_json::array();
  for (const CoverageEntry &e : cov.entries) {
    ordered_json ej;
    ej["key"] = e.key.indices;
    ordered_json labels = ordered_json::array();
    for (int idx : e.key.indices) labels.push_back(gs.gates.at(idx).label);
    ej["labels"] = std::move(labels);
    ej["cost"] = e.cost;
    switch (e.polytope.kind) {
      case Polytope::Kind::FullChamber:
        ej["polytope"] = {{"kind", "full_chamber"}};
        break;
      case Polytope::Kind::Points: {
        ordered_json pts = ordered_json::array();
        for (const auto &p : e.polytope.special_points) {
          pts.push_back({p.c1, p.c2, p.c3});
        }
        ej["polytope"] = {{"kind", "points"}, {"points", std::move(pts)}};
        break;
      }
      case Polytope::Kind::HalfSpaces: {
        ordered_json hs = ordered_json::array();
        for (const auto &h : e.polytope.inequalities) {
          hs.push_back({{"a", {h.a1, h.a2, h.a3}}, {"b", h.b}});
        }
        ej["polytope"] = {{"kind", "half_spaces"},
                          {"inequalities", std::move(hs)}};
        break;
      }
      case Polytope::Kind::Probed: {
        ordered_json pts = ordered_json::array();
        for (const auto &p : e.polytope.probe_hull) {
          pts.push_back({p.c1, p.c2, p.c3});
        }
        ej["polytope"] = {{"kind", "probed"},
                          {"feasible_points", std::move(pts)}};
        break;
      }
    }
    j.push_back(std::move(ej));
  }
  return j;
}

ordered_json optimizer_config_to_json(const OptimizerConfig &c) {
  return {{"max_steps", c.max_steps},
          {"n_starts", c.n_starts},
          {"threshold", c.threshold},
          {"seed", c.seed}};
}

OptimizerConfig optimizer_config_from_json(const ordered_json &j) {
  OptimizerConfig c;
  if (j.contains("max_steps")) c.max_steps = j["max_steps"].get<int>();
  if (j.contains("n_starts")) c.n_starts = j["n_starts"].get<int>();
  if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  return c;
}

ordered_json model_to_json(const ControlledPulseModel &m) {
  return {{"u", {m.u.x(), m.u.y(), m.u.z()}},
          {"v", {m.v.x(), m.v.y(), m.v.z()}},
          {"phi", m.phi}};
}

ControlledPulseModel model_from_json(const ordered_json &j) {
  ControlledPulseModel m;
  try {
    const auto &u = j.at("u");
    const auto &v = j.at("v");
    m.u = {u.at(0).get<double>(), u.at(1).get<double>(), u.at(2).get<double>()};
    m.v = {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
    m.phi = j.at("phi").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  return m;
}

ordered_json cr_to_json(const CrCoefficients &nu) {
  return {{"zx", nu.zx}, {"zy", nu.zy}, {"zz", nu.zz}, {"ix", nu.ix},
          {"iy", nu.iy}, {"iz", nu.iz}, {"zi", nu.zi}};
}

CrCoefficients cr_from_json(const ordered_json &j) {
  CrCoefficients nu;
  const auto get = [&](const char *k) {
    return j.contains(k) ? j[k].get<double>() : 0.0;
  };
  nu.zx = get("zx");
  nu.zy = get("zy");
  nu.zz = get("zz");
  nu.ix = get("ix");
  nu.iy = get("iy");
  nu.iz = get("iz");
  nu.zi = get("zi");
  return nu;
}

}  // namespace weylcc
