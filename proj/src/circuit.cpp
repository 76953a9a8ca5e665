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

#include "weylcc/circuit.hpp"

#include <algorithm>
#include <cmath>

#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/synth_closedform.hpp"

namespace weylcc {

namespace {

const Unitary4 &swap4() {
  static const Unitary4 s = gates::swap();
  return s;
}

void check_qubits(const Gate &g, int num_qubits) {
  for (int q : g.qubits) {
    if (q < 0 || q >= num_qubits) {
      throw ValidationError("gate touches qubit " + std::to_string(q) +
                            " outside the register");
    }
  }
  if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
    throw ValidationError("two-qubit gate on identical qubits");
  }
}

}  // namespace

Unitary2 resolve_1q(const Gate &g) {
  const auto p = [&](std::size_t i) { return g.params.at(i); };
  if (g.name == "x") return gates::x();
  if (g.name == "sx") return gates::sx();
  if (g.name == "h") return gates::h();
  if (g.name == "s") return gates::s();
  if (g.name == "sdg") return Unitary2(gates::s().adjoint());
  if (g.name == "rz") return gates::rz(p(0));
  if (g.name == "ry") return gates::ry(p(0));
  if (g.name == "rx") return gates::rx(p(0));
  throw ValidationError("unknown single-qubit gate: " + g.name);
}

Unitary4 resolve_2q(const Gate &g, const PulseLibrary &lib) {
  const auto p = [&](std::size_t i) { return g.params.at(i); };
  if (g.name == "cx") return gates::cx();
  if (g.name == "cz") return gates::cz();
  if (g.name == "cp") return gates::cp(p(0));
  if (g.name == "rzz") return gates::rzz(p(0));
  if (g.name == "ecr") return gates::ecr();
  if (g.name == "unitary4") {
    if (!g.matrix) throw ValidationError("unitary4 gate without matrix");
    return *g.matrix;
  }
  if (g.name == "pulse_ref") {
    const auto it = lib.find(g.label);
    if (it == lib.end()) {
      throw ValidationError("pulse label not in library: " + g.label);
    }
    return it->second.unitary;
  }
  throw ValidationError("unknown two-qubit gate: " + g.name);
}

bool is_two_qubit(const Gate &g) { return g.qubits.size() == 2; }

BlockDecomposition collect_blocks(const Circuit &c, const PulseLibrary &lib) {
  BlockDecomposition out;
  std::map<std::pair<int, int>, std::size_t> open;  // ordered pair -> block
  std::vector<std::vector<int>> pending(c.num_qubits);

  const auto close_touching = [&](int q) {
    for (auto it = open.begin(); it != open.end();) {
      if (it->first.first == q || it->first.second == q) {
        it = open.erase(it);
      } else {
        ++it;
      }
    }
  };
  const auto embed_into = [&](TwoQubitBlock &b, const Gate &g) {
    if (is_two_qubit(g)) {
      Unitary4 u = resolve_2q(g, lib);
      if (g.qubits[0] == b.pair.second) u = swap4() * u * swap4();
      b.unitary = u * b.unitary;
    } else {
      const Unitary2 u = resolve_1q(g);
      const Unitary4 lifted = g.qubits[0] == b.pair.first
                                  ? kron(u, gates::id2())
                                  : kron(gates::id2(), u);
      b.unitary = lifted * b.unitary;
    }
  };

  for (int i = 0; i < static_cast<int>(c.gates.size()); ++i) {
    const Gate &g = c.gates[i];
    check_qubits(g, c.num_qubits);
    if (!is_two_qubit(g)) {
      bool absorbed = false;
      for (auto &[pr, bi] : open) {
        if (pr.first == g.qubits[0] || pr.second == g.qubits[0]) {
          embed_into(out.blocks[bi], g);
          out.blocks[bi].gate_indices.push_back(i);
          absorbed = true;
          break;
        }
      }
      if (!absorbed) pending[g.qubits[0]].push_back(i);
      continue;
    }
    const int a = g.qubits[0], b = g.qubits[1];
    const auto key = std::make_pair(a, b);
    const auto rev = std::make_pair(b, a);
    auto it = open.find(key);
    if (it == open.end()) it = open.find(rev);
    if (it == open.end()) {
      close_touching(a);
      close_touching(b);
      TwoQubitBlock blk;
      blk.pair = {a, b};
      blk.unitary = Unitary4::Identity();
      // leading single-qubit gates on these wires join the new block
      std::vector<int> lead;
      lead.insert(lead.end(), pending[a].begin(), pending[a].end());
      lead.insert(lead.end(), pending[b].begin(), pending[b].end());
      std::sort(lead.begin(), lead.end());
      pending[a].clear();
      pending[b].clear();
      for (int gi : lead) {
        embed_into(blk, c.gates[gi]);
        blk.gate_indices.push_back(gi);
      }
      embed_into(blk, g);
      blk.gate_indices.push_back(i);
      blk.anchor = i;
      out.blocks.push_back(std::move(blk));
      open[{a, b}] = out.blocks.size() - 1;
    } else {
      embed_into(out.blocks[it->second], g);
      out.blocks[it->second].gate_indices.push_back(i);
    }
  }
  for (const auto &lst : pending) {
    out.residual_gates.insert(out.residual_gates.end(), lst.begin(), lst.end());
  }
  std::sort(out.residual_gates.begin(), out.residual_gates.end());
  return out;
}

PulseLibrary pulse_library(
    const std::map<std::pair<int, int>, GateSet> &gatesets) {
  PulseLibrary lib;
  for (const auto &[pr, gs] : gatesets) {
    for (const PulseGate &g : gs.gates) {
      lib[g.label] = {g.unitary, g.duration};
    }
  }
  return lib;
}

namespace {

/// Emits a merged single-qubit unitary as rz-ry-rz (skipping identities).
void emit_1q(Circuit &out, int qubit, const Unitary2 &u) {
  const c64 det = u.determinant();
  const Unitary2 su = u * std::pow(det, -0.5);
  const double beta = 2 * std::atan2(std::abs(su(1, 0)), std::abs(su(0, 0)));
  double sum = 0, dif = 0;
  if (std::abs(su(0, 0)) > 1e-12) sum = -2 * std::arg(su(0, 0));
  if (std::abs(su(1, 0)) > 1e-12) dif = 2 * std::arg(su(1, 0));
  const double alpha = 0.5 * (sum + dif);
  const double gamma = 0.5 * (sum - dif);
  if (std::abs(gamma) > 1e-12) out.gates.push_back({"rz", {qubit}, {gamma}, {}, {}});
  if (std::abs(beta) > 1e-12) out.gates.push_back({"ry", {qubit}, {beta}, {}, {}});
  if (std::abs(alpha) > 1e-12) out.gates.push_back({"rz", {qubit}, {alpha}, {}, {}});
}

struct PairPlan {
  GateSet gs;
  CoverageSet cov;
};

GateSet filter_spe(const GateSet &gs) {
  GateSet out;
  out.pair = gs.pair;
  out.one_qubit_layer_duration = gs.one_qubit_layer_duration;
  const MakhlinInvariants spe = canonical_invariants({kPi / 2, 0, 0});
  for (const PulseGate &g : gs.gates) {
    if (canonical_invariants(g.coords).distance_mod_phase(spe) < 1e-6) {
      out.gates.push_back(g);
    }
  }
  return out;
}

}  // namespace

CompiledCircuit compile_circuit(
    const Circuit &c, const std::map<std::pair<int, int>, GateSet> &gatesets,
    const CompileOptions &options) {
  const PulseLibrary lib = pulse_library(gatesets);
  const BlockDecomposition dec = collect_blocks(c, lib);

  std::map<std::pair<int, int>, PairPlan> plans;
  const auto plan_for = [&](std::pair<int, int> pr) -> const PairPlan & {
    auto key = pr;
    auto git = gatesets.find(key);
    if (git == gatesets.end()) {
      key = {pr.second, pr.first};
      git = gatesets.find(key);
    }
    if (git == gatesets.end()) {
      throw MissingGateSet("no gate set for pair (" +
                           std::to_string(pr.first) + "," +
                           std::to_string(pr.second) + ")");
    }
    auto pit = plans.find(key);
    if (pit == plans.end()) {
      PairPlan plan;
      plan.gs = options.mode == CompileMode::SpeOnly ? filter_spe(git->second)
                                                     : git->second;
      plan.cov = build_coverage_set(plan.gs, options.coverage);
      pit = plans.emplace(key, std::move(plan)).first;
    }
    return pit->second;
  };

  CompiledCircuit out;
  out.circuit.num_qubits = c.num_qubits;

  // per-qubit pending single-qubit unitaries, merged across block boundaries
  std::vector<Unitary2> pend(c.num_qubits, Unitary2::Identity());
  std::vector<bool> has_pend(c.num_qubits, false);
  const auto push_1q = [&](int q, const Unitary2 &u) {
    pend[q] = u * pend[q];
    has_pend[q] = true;
  };
  const auto flush_1q = [&](int q) {
    if (!has_pend[q]) return;
    emit_1q(out.circuit, q, pend[q]);
    pend[q] = Unitary2::Identity();
    has_pend[q] = false;
  };

  // walk the source in order, emitting whole blocks at their first gate
  std::map<int, std::size_t> block_at;
  std::vector<bool> in_block(c.gates.size(), false);
  for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
    block_at[dec.blocks[b].anchor] = b;
    for (int gi : dec.blocks[b].gate_indices) in_block[gi] = true;
  }
  for (int i = 0; i < static_cast<int>(c.gates.size()); ++i) {
    const auto bit = block_at.find(i);
    if (bit == block_at.end()) {
      if (in_block[i]) continue;  // later member of an emitted block
      push_1q(c.gates[i].qubits[0], resolve_1q(c.gates[i]));
      continue;
    }
    const TwoQubitBlock &blk = dec.blocks[bit->second];
    const PairPlan &plan = plan_for(blk.pair);
    // orient the block unitary to the gate set's qubit order
    const bool flip = plan.gs.pair ==
                      std::make_pair(blk.pair.second, blk.pair.first);
    const Unitary4 target =
        flip ? Unitary4(swap4() * blk.unitary * swap4()) : blk.unitary;
    const int qa = flip ? blk.pair.second : blk.pair.first;
    const int qb = flip ? blk.pair.first : blk.pair.second;

    SynthesisResult syn;
    try {
      syn = synthesize_block(target, plan.cov, plan.gs, options.optimizer);
    } catch (const Error &e) {
      throw SynthesisExhausted("block on pair (" + std::to_string(qa) + "," +
                               std::to_string(qb) + "): " + e.what());
    }

    // emission order is right-to-left through the matrix product
    push_1q(qa, syn.outer[2]);
    push_1q(qb, syn.outer[3]);
    for (std::size_t k = syn.key.size(); k-- > 0;) {
      if (k + 1 < syn.key.size()) {
        const auto &ta = syn.inner.zyz[2 * k];
        const auto &tb = syn.inner.zyz[2 * k + 1];
        push_1q(qa, zyz(ta[0], ta[1], ta[2]));
        push_1q(qb, zyz(tb[0], tb[1], tb[2]));
      }
      flush_1q(qa);
      flush_1q(qb);
      const PulseGate &pg = plan.gs.gates[syn.key.indices[k]];
      out.circuit.gates.push_back(
          {"pulse_ref", {qa, qb}, {}, {}, pg.label});
    }
    push_1q(qa, syn.outer[0]);
    push_1q(qb, syn.outer[1]);

    BlockReport rep;
    rep.pair = {qa, qb};
    for (int idx : syn.key.indices) {
      rep.pulse_labels.push_back(plan.gs.gates[idx].label);
    }
    rep.cost = syn.key.empty() ? sequence_cost(syn.key, plan.gs) : syn.cost;
    rep.residual = syn.residual;
    rep.closed_form = syn.closed_form;
    out.block_reports.push_back(std::move(rep));
    out.total_two_qubit_duration += rep.cost;
  }
  for (int q = 0; q < c.num_qubits; ++q) flush_1q(q);
  return out;
}

namespace {

void apply_1q_vec(Eigen::VectorXcd &psi, const Unitary2 &u, int q, int n) {
  const int stride = 1 << (n - 1 - q);
  for (int base = 0; base < (1 << n); base += 2 * stride) {
    for (int off = 0; off < stride; ++off) {
      const int i0 = base + off;
      const int i1 = i0 + stride;
      const c64 a = psi(i0), b = psi(i1);
      psi(i0) = u(0, 0) * a + u(0, 1) * b;
      psi(i1) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

void apply_2q_vec(Eigen::VectorXcd &psi, const Unitary4 &u, int qa, int qb,
                  int n) {
  const int sa = 1 << (n - 1 - qa);
  const int sb = 1 << (n - 1 - qb);
  const int dim = 1 << n;
  for (int i = 0; i < dim; ++i) {
    if ((i & sa) || (i & sb)) continue;
    const std::array<int, 4> idx = {i, i + sb, i + sa, i + sa + sb};
    std::array<c64, 4> amp;
    for (int k = 0; k < 4; ++k) amp[k] = psi(idx[k]);
    for (int r = 0; r < 4; ++r) {
      c64 s = 0;
      for (int k = 0; k < 4; ++k) s += u(r, k) * amp[k];
      psi(idx[r]) = s;
    }
  }
}

void apply_gate_vec(Eigen::VectorXcd &psi, const Gate &g,
                    const PulseLibrary &lib, int n) {
  if (is_two_qubit(g)) {
    apply_2q_vec(psi, resolve_2q(g, lib), g.qubits[0], g.qubits[1], n);
  } else {
    apply_1q_vec(psi, resolve_1q(g), g.qubits[0], n);
  }
}

const std::array<Unitary2, 4> &pauli_basis() {
  static const std::array<Unitary2, 4> p = {gates::id2(), gates::x(),
                                            gates::y(), gates::z()};
  return p;
}

}  // namespace

Eigen::MatrixXcd circuit_unitary(const Circuit &c, const PulseLibrary &lib) {
  if (c.num_qubits > 6) {
    throw TooLarge("circuit_unitary supports at most 6 qubits");
  }
  const int dim = 1 << c.num_qubits;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Gate &g : c.gates) {
    check_qubits(g, c.num_qubits);
    for (int col = 0; col < dim; ++col) {
      Eigen::VectorXcd v = acc.col(col);
      apply_gate_vec(v, g, lib, c.num_qubits);
      acc.col(col) = v;
    }
  }
  return acc;
}

Eigen::VectorXcd circuit_statevector(const Circuit &c,
                                     const PulseLibrary &lib) {
  if (c.num_qubits > 20) {
    throw TooLarge("statevector simulation supports at most 20 qubits");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1 << c.num_qubits);
  psi(0) = 1;
  for (const Gate &g : c.gates) {
    check_qubits(g, c.num_qubits);
    apply_gate_vec(psi, g, lib, c.num_qubits);
  }
  return psi;
}

std::map<std::string, int> simulate_counts(
    const Circuit &c, int shots, const std::optional<BenchNoiseModel> &noise,
    std::uint64_t seed, const PulseLibrary &lib) {
  if (c.num_qubits > 20) {
    throw TooLarge("statevector simulation supports at most 20 qubits");
  }
  const int n = c.num_qubits;
  const auto to_bits = [n](int idx) {
    std::string s(n, '0');
    for (int q = 0; q < n; ++q) {
      if (idx & (1 << (n - 1 - q))) s[q] = '1';
    }
    return s;
  };
  std::map<std::string, int> counts;
  if (!noise) {
    const Eigen::VectorXcd psi = circuit_statevector(c, lib);
    std::vector<double> probs(psi.size());
    for (int i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi(i));
    auto rng = make_rng(seed, "counts");
    std::discrete_distribution<int> dist(probs.begin(), probs.end());
    for (int s = 0; s < shots; ++s) counts[to_bits(dist(rng))]++;
    return counts;
  }
  // trajectory sampling: a random two-qubit Pauli after each two-qubit gate
  // with probability scaled by pulse duration
  auto rng = make_rng(seed, "trajectories");
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::uniform_int_distribution<int> pd(1, 15);
  for (int s = 0; s < shots; ++s) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1 << n);
    psi(0) = 1;
    for (const Gate &g : c.gates) {
      apply_gate_vec(psi, g, lib, n);
      if (!is_two_qubit(g)) continue;
      double duration = noise->reference_duration;
      if (g.name == "pulse_ref") {
        const auto it = lib.find(g.label);
        if (it != lib.end()) duration = it->second.duration;
      }
      const double p = noise->two_qubit_depolarizing_per_reference_duration *
                       duration / noise->reference_duration;
      if (ud(rng) < p) {
        const int pick = pd(rng);
        apply_1q_vec(psi, pauli_basis()[pick / 4], g.qubits[0], n);
        apply_1q_vec(psi, pauli_basis()[pick % 4], g.qubits[1], n);
      }
    }
    std::vector<double> probs(psi.size());
    for (int i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi(i));
    std::discrete_distribution<int> dist(probs.begin(), probs.end());
    counts[to_bits(dist(rng))]++;
  }
  return counts;
}

Circuit qft_circuit(int n, const std::string &target_bitstring) {
  if (n < 2 || n > 20) {
    throw ValidationError("qft width must be between 2 and 20");
  }
  if (static_cast<int>(target_bitstring.size()) != n) {
    throw BadBitstring("target bitstring length must equal the width");
  }
  for (char ch : target_bitstring) {
    if (ch != '0' && ch != '1') {
      throw BadBitstring("target bitstring must be binary");
    }
  }
  Circuit c;
  c.num_qubits = n;
  // Preparation: wire q of the no-swap inverse QFT consumes the phase
  // 2 pi 0.b[q] b[q+1] ... b[n-1].
  for (int q = 0; q < n; ++q) {
    double theta = 0;
    for (int t = 0; q + t < n; ++t) {
      if (target_bitstring[q + t] == '1') {
        theta += 2 * kPi / std::pow(2.0, t + 1);
      }
    }
    c.gates.push_back({"h", {q}, {}, {}, {}});
    c.gates.push_back({"rz", {q}, {theta}, {}, {}});
  }
  // inverse QFT without final swaps
  for (int j = n - 1; j >= 0; --j) {
    for (int m = n - 1; m > j; --m) {
      c.gates.push_back({"cp", {m, j}, {-kPi / std::pow(2.0, m - j)}, {}, {}});
    }
    c.gates.push_back({"h", {j}, {}, {}, {}});
  }
  return c;
}

Circuit trotter_tfim_circuit(int n_qubits, int steps, double coupling,
                             double field, double dt) {
  Circuit c;
  c.num_qubits = n_qubits;
  for (int s = 0; s < steps; ++s) {
    for (int q = 0; q < n_qubits; ++q) {
      c.gates.push_back({"rx", {q}, {field * dt}, {}, {}});
    }
    for (int q = 0; q + 1 < n_qubits; ++q) {
      c.gates.push_back({"rzz", {q, q + 1}, {-2 * coupling * dt}, {}, {}});
    }
    for (int q = 0; q < n_qubits; ++q) {
      c.gates.push_back({"rx", {q}, {field * dt}, {}, {}});
    }
  }
  return c;
}

double magnetization(const std::map<std::string, int> &counts, int n_qubits) {
  double total = 0;
  long shots = 0;
  for (const auto &[bits, cnt] : counts) {
    shots += cnt;
    for (int q = 0; q < n_qubits; ++q) {
      total += cnt * (bits[q] == '0' ? 1.0 : -1.0);
    }
  }
  if (shots == 0) return 0;
  return total / (static_cast<double>(shots) * n_qubits);
}

double magnetization(const Eigen::VectorXcd &state, char axis) {
  const int dim = static_cast<int>(state.size());
  int n = 0;
  while ((1 << n) < dim) ++n;
  double total = 0;
  for (int q = 0; q < n; ++q) {
    Eigen::VectorXcd psi = state;
    if (axis == 'y') {
      apply_1q_vec(psi, Unitary2(gates::h() * gates::s().adjoint()), q, n);
    } else if (axis != 'z') {
      throw ValidationError("magnetization axis must be 'y' or 'z'");
    }
    for (int i = 0; i < dim; ++i) {
      const int bit = (i >> (n - 1 - q)) & 1;
      total += (1 - 2 * bit) * std::norm(psi(i));
    }
  }
  return total / n;
}

Circuit with_y_measurement_layer(const Circuit &c) {
  Circuit out = c;
  for (int q = 0; q < c.num_qubits; ++q) {
    out.gates.push_back({"sdg", {q}, {}, {}, {}});
    out.gates.push_back({"h", {q}, {}, {}, {}});
  }
  return out;
}

}  // namespace weylcc
