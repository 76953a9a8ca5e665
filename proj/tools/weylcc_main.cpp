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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "weylcc/characterize.hpp"
#include "weylcc/circuit.hpp"
#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/json_io.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/selftest.hpp"
#include "weylcc/synth_closedform.hpp"

namespace {

using weylcc::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSynthesis = 3;

ordered_json load_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw weylcc::ValidationError("cannot open " + path);
  }
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw weylcc::ValidationError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_json(const std::string &path, const ordered_json &j) {
  std::ofstream out(path);
  if (!out) {
    throw weylcc::ValidationError("cannot write " + path);
  }
  out << j.dump(2) << "\n";
}

void write_or_print(const std::string &path, const ordered_json &j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(path, j);
  }
}

std::map<std::pair<int, int>, weylcc::GateSet> gatesets_from_file(
    const std::string &path) {
  const ordered_json j = load_json(path);
  std::map<std::pair<int, int>, weylcc::GateSet> out;
  const auto add = [&](const ordered_json &gj) {
    weylcc::GateSet gs = weylcc::gateset_from_json(gj);
    out[gs.pair] = std::move(gs);
  };
  if (j.contains("gatesets")) {
    for (const auto &gj : j["gatesets"]) add(gj);
  } else {
    add(j);
  }
  return out;
}

struct CharacterizeArgs {
  std::string models_path;
  std::string out_path;
  std::string gateset_out;
  std::uint64_t seed = 0;
  int shots = 128;
  double noise = 1e-2;
  std::vector<int> iterations = {1, 2, 4, 8};
  bool exact = false;
};

int run_characterize(const CharacterizeArgs &args) {
  const ordered_json models = load_json(args.models_path);
  const double layer = models.value("one_qubit_layer_duration", 60.0);
  const double spe_duration = models.value("default_spe_duration", 320.0);

  weylcc::TomographyConfig cfg;
  cfg.iteration_set = args.iterations;
  cfg.shots = args.shots;
  weylcc::NoiseSpec noise;
  noise.depolarizing_per_pulse = args.noise;
  weylcc::FitConfig fit;
  fit.use_exact_probabilities = args.exact;

  ordered_json report;
  report["config"] = {
      {"seed", args.seed},
      {"shots", args.shots},
      {"noise", args.noise},
      {"iteration_set", args.iterations},
      {"use_exact_probabilities", args.exact},
      {"one_qubit_layer_duration", layer},
      {"default_spe_duration", spe_duration},
  };

  std::vector<std::pair<int, int>> pairs;
  for (const auto &pj : models.at("pairs")) {
    pairs.push_back({pj.at("pair").at(0).get<int>(),
                     pj.at("pair").at(1).get<int>()});
  }
  report["batches"] = ordered_json::array();
  for (const auto &batch : weylcc::batch_schedule(pairs)) {
    ordered_json bj = ordered_json::array();
    for (const auto &[a, b] : batch) bj.push_back({a, b});
    report["batches"].push_back(std::move(bj));
  }

  report["pairs"] = ordered_json::array();
  ordered_json gatesets = ordered_json::array();
  std::size_t index = 0;
  for (const auto &pj : models.at("pairs")) {
    const auto [qa, qb] = pairs[index];
    weylcc::ControlledPulseModel truth;
    ordered_json truth_nu;
    if (pj.contains("nu")) {
      const weylcc::CrCoefficients nu = weylcc::cr_from_json(pj["nu"]);
      truth = weylcc::cr_to_model(nu);
      truth_nu = weylcc::cr_to_json(nu);
    } else if (pj.contains("model")) {
      truth = weylcc::model_from_json(pj["model"]);
      truth_nu = weylcc::cr_to_json(weylcc::model_to_cr(truth));
    } else {
      throw weylcc::ValidationError(
          "each pair needs a 'nu' or 'model' ground truth");
    }
    const std::string label = pj.value(
        "label", "p@" + std::to_string(qa) + "_" + std::to_string(qb));
    const double duration = pj.value("duration", 130.0);

    cfg.seed = weylcc::derive_seed(args.seed, "pair", index);
    const auto records = weylcc::simulate_tomography(truth, cfg, noise);
    const auto [fitted, diag] = weylcc::fit_model(records, fit);
    const weylcc::Unitary4 fitted_u = weylcc::controlled_unitary(fitted);
    const weylcc::PulseGate gate =
        weylcc::make_pulse_gate(label, fitted_u, duration);

    ordered_json row;
    row["pair"] = {qa, qb};
    row["label"] = label;
    row["duration"] = duration;
    row["nu_truth"] = truth_nu;
    row["nu_fit"] = weylcc::cr_to_json(weylcc::model_to_cr(fitted));
    row["model_fit"] = weylcc::model_to_json(fitted);
    row["weyl_c1"] = gate.coords.c1;
    row["residuals"] = {{"stage1", diag.stage1_residual},
                        {"stage2", diag.stage2_residual},
                        {"stage3", diag.stage3_residual}};
    row["reconstruction_infidelity"] = weylcc::process_infidelity(
        fitted_u, weylcc::controlled_unitary(truth));
    report["pairs"].push_back(std::move(row));

    weylcc::GateSet gs;
    gs.pair = {qa, qb};
    gs.one_qubit_layer_duration = layer;
    gs.gates.push_back(gate);
    gs.gates.push_back(weylcc::make_pulse_gate(
        "ecr@" + std::to_string(qa) + "_" + std::to_string(qb),
        weylcc::gates::ecr(), spe_duration));
    gatesets.push_back(weylcc::gateset_to_json(gs));
    ++index;
  }
  write_or_print(args.out_path, report);
  if (!args.gateset_out.empty()) {
    write_json(args.gateset_out, ordered_json{{"gatesets", gatesets}});
  }
  return kExitOk;
}

struct CoverageArgs {
  std::string gateset_path;
  std::string out_path;
  double probe_step = weylcc::kPi / 20;
  std::uint64_t seed = 0;
};

int run_coverage(const CoverageArgs &args) {
  const auto gatesets = gatesets_from_file(args.gateset_path);
  weylcc::CoverageConfig cfg;
  cfg.probe_lattice_step = args.probe_step;
  cfg.seed = args.seed;
  ordered_json out;
  out["config"] = {{"probe_lattice_step", args.probe_step},
                   {"seed", args.seed}};
  out["pairs"] = ordered_json::array();
  for (const auto &[pr, gs] : gatesets) {
    const weylcc::CoverageSet cov = weylcc::build_coverage_set(gs, cfg);
    ordered_json pj;
    pj["pair"] = {pr.first, pr.second};
    pj["entries"] = weylcc::coverage_to_json(cov, gs);
    out["pairs"].push_back(std::move(pj));
  }
  write_or_print(args.out_path, out);
  return kExitOk;
}

struct CompileArgs {
  std::string circuit_path;
  std::string gateset_path;
  std::string out_path;
  std::string mode = "both";
  weylcc::OptimizerConfig optimizer;
};

ordered_json compile_arm(const weylcc::Circuit &circuit,
                         const std::map<std::pair<int, int>, weylcc::GateSet>
                             &gatesets,
                         weylcc::CompileMode mode,
                         const weylcc::OptimizerConfig &opt) {
  weylcc::CompileOptions options;
  options.mode = mode;
  options.optimizer = opt;
  const weylcc::CompiledCircuit cc =
      weylcc::compile_circuit(circuit, gatesets, options);
  return weylcc::compiled_to_json(cc);
}

int run_compile(const CompileArgs &args) {
  const weylcc::Circuit circuit =
      weylcc::circuit_from_json(load_json(args.circuit_path));
  const auto gatesets = gatesets_from_file(args.gateset_path);
  ordered_json out;
  out["config"] = {{"mode", args.mode},
                   {"optimizer",
                    weylcc::optimizer_config_to_json(args.optimizer)}};
  if (args.mode == "extended" || args.mode == "both") {
    out["extended"] = compile_arm(circuit, gatesets,
                                  weylcc::CompileMode::Extended,
                                  args.optimizer);
  }
  if (args.mode == "spe_only" || args.mode == "both") {
    out["spe_only"] = compile_arm(circuit, gatesets,
                                  weylcc::CompileMode::SpeOnly,
                                  args.optimizer);
  }
  if (args.mode == "both") {
    const double ext = out["extended"]["total_two_qubit_duration"];
    const double base = out["spe_only"]["total_two_qubit_duration"];
    out["duration_comparison"] = {
        {"extended", ext},
        {"spe_only", base},
        {"ratio", base > 0 ? ext / base : 1.0},
    };
  }
  write_or_print(args.out_path, out);
  return kExitOk;
}

/// Desk-scale per-pair gate sets: characterized CR-style pulses targeting
/// pi/4 + 0.05, plus a calibrated ECR.
std::map<std::pair<int, int>, weylcc::GateSet> bench_gatesets(
    const std::vector<std::pair<int, int>> &pairs, std::uint64_t seed,
    double layer, double pulse_duration, double spe_duration) {
  std::map<std::pair<int, int>, weylcc::GateSet> out;
  weylcc::TomographyConfig cfg;
  weylcc::NoiseSpec clean;
  clean.depolarizing_per_pulse = 0;
  weylcc::FitConfig fit;
  fit.use_exact_probabilities = true;
  std::size_t index = 0;
  for (const auto &[a, b] : pairs) {
    auto rng = weylcc::make_rng(seed, "bench-truth", index);
    std::normal_distribution<double> nd(0.0, 0.02);
    weylcc::CrCoefficients nu;
    nu.zx = weylcc::kPi / 4 + 0.05 + nd(rng);
    nu.zy = nd(rng);
    nu.zz = nd(rng);
    nu.ix = 5 * nd(rng);
    nu.iy = nd(rng);
    nu.iz = nd(rng);
    nu.zi = 20 * nd(rng);
    cfg.seed = weylcc::derive_seed(seed, "bench-char", index);
    const auto records =
        weylcc::simulate_tomography(weylcc::cr_to_model(nu), cfg, clean);
    const auto [fitted, diag] = weylcc::fit_model(records, fit);
    (void)diag;
    weylcc::GateSet gs;
    gs.pair = {a, b};
    gs.one_qubit_layer_duration = layer;
    const std::string tag = std::to_string(a) + "_" + std::to_string(b);
    gs.gates.push_back(weylcc::make_pulse_gate(
        "p@" + tag, weylcc::controlled_unitary(fitted), pulse_duration));
    gs.gates.push_back(weylcc::make_pulse_gate(
        "ecr@" + tag, weylcc::gates::ecr(), spe_duration));
    out[{a, b}] = std::move(gs);
    ++index;
  }
  return out;
}

struct BenchCommonArgs {
  std::uint64_t seed = 0;
  int shots = 2048;
  int seeds = 20;
  double noise = 1e-2;
  std::string out_path;
  std::string csv_path;
  double layer = 60, pulse_duration = 100, spe_duration = 320;
};

void write_csv(const std::string &path,
               const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &rows) {
  std::ofstream out(path);
  if (!out) throw weylcc::ValidationError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

int run_bench_qft(const BenchCommonArgs &args, const std::vector<int> &widths,
                  const std::string &mode) {
  ordered_json out;
  out["config"] = {{"seed", args.seed},     {"shots", args.shots},
                   {"seeds", args.seeds},   {"noise", args.noise},
                   {"widths", widths},      {"mode", mode},
                   {"layer", args.layer},   {"pulse_duration", args.pulse_duration},
                   {"spe_duration", args.spe_duration}};
  out["rows"] = ordered_json::array();
  std::vector<std::vector<double>> csv_rows;
  weylcc::BenchNoiseModel nm;
  nm.two_qubit_depolarizing_per_reference_duration = args.noise;
  nm.reference_duration = args.spe_duration;
  for (int n : widths) {
    std::string target;
    for (int q = 0; q < n; ++q) target += (q % 2 == 0) ? '1' : '0';
    const weylcc::Circuit circuit = weylcc::qft_circuit(n, target);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    }
    const auto gatesets =
        bench_gatesets(pairs, weylcc::derive_seed(args.seed, "qft", n),
                       args.layer, args.pulse_duration, args.spe_duration);
    const weylcc::PulseLibrary lib = weylcc::pulse_library(gatesets);

    std::map<std::string, weylcc::Circuit> arms;
    std::map<std::string, double> durations;
    for (const std::string arm : {"extended", "spe_only"}) {
      if (mode != "both" && mode != arm) continue;
      weylcc::CompileOptions options;
      options.mode = arm == "extended" ? weylcc::CompileMode::Extended
                                       : weylcc::CompileMode::SpeOnly;
      options.optimizer.seed = weylcc::derive_seed(args.seed, "compile", n);
      const weylcc::CompiledCircuit cc =
          weylcc::compile_circuit(circuit, gatesets, options);
      arms[arm] = cc.circuit;
      durations[arm] = cc.total_two_qubit_duration;
    }

    int wins = 0;
    for (int s = 0; s < args.seeds; ++s) {
      ordered_json row;
      row["n"] = n;
      row["seed_index"] = s;
      std::map<std::string, double> probs;
      for (const auto &[arm, circ] : arms) {
        const auto counts = weylcc::simulate_counts(
            circ, args.shots, nm,
            weylcc::derive_seed(args.seed, "qft-sim-" + arm, 1000 * n + s),
            lib);
        const auto it = counts.find(target);
        probs[arm] =
            it == counts.end() ? 0.0 : it->second / double(args.shots);
        row["p_" + arm] = probs[arm];
        row["duration_" + arm] = durations[arm];
      }
      if (arms.count("extended") && arms.count("spe_only")) {
        wins += probs["extended"] >= probs["spe_only"] ? 1 : 0;
        csv_rows.push_back({double(n), double(s), probs["extended"],
                            probs["spe_only"]});
      }
      out["rows"].push_back(std::move(row));
    }
    if (arms.size() == 2) {
      out["summary_" + std::to_string(n)] = {
          {"wins_extended", wins},
          {"seeds", args.seeds},
          {"duration_extended", durations["extended"]},
          {"duration_spe_only", durations["spe_only"]}};
    }
  }
  write_or_print(args.out_path, out);
  if (!args.csv_path.empty()) {
    write_csv(args.csv_path, {"n", "seed", "p_extended", "p_spe_only"},
              csv_rows);
  }
  return kExitOk;
}

int run_bench_trotter(const BenchCommonArgs &args, int qubits, int steps,
                      double coupling, double field, double dt,
                      const std::string &mode) {
  ordered_json out;
  out["config"] = {{"seed", args.seed},   {"shots", args.shots},
                   {"seeds", args.seeds}, {"noise", args.noise},
                   {"qubits", qubits},    {"steps", steps},
                   {"J", coupling},       {"h", field},
                   {"dt", dt},            {"mode", mode}};
  std::vector<std::pair<int, int>> pairs;
  for (int q = 0; q + 1 < qubits; ++q) pairs.push_back({q, q + 1});
  const auto gatesets =
      bench_gatesets(pairs, weylcc::derive_seed(args.seed, "trotter", qubits),
                     args.layer, args.pulse_duration, args.spe_duration);
  const weylcc::PulseLibrary lib = weylcc::pulse_library(gatesets);
  weylcc::BenchNoiseModel nm;
  nm.two_qubit_depolarizing_per_reference_duration = args.noise;
  nm.reference_duration = args.spe_duration;

  // ideal Trotterized trajectories
  ordered_json ideal = ordered_json::array();
  std::vector<double> ideal_z(steps + 1), ideal_y(steps + 1);
  for (int s = 0; s <= steps; ++s) {
    const Eigen::VectorXcd psi = weylcc::circuit_statevector(
        weylcc::trotter_tfim_circuit(qubits, s, coupling, field, dt));
    ideal_z[s] = weylcc::magnetization(psi, 'z');
    ideal_y[s] = weylcc::magnetization(psi, 'y');
    ideal.push_back({{"step", s}, {"z", ideal_z[s]}, {"y", ideal_y[s]}});
  }
  out["ideal"] = std::move(ideal);

  std::map<std::string, std::vector<weylcc::Circuit>> arm_circuits;
  for (const std::string arm : {"extended", "spe_only"}) {
    if (mode != "both" && mode != arm) continue;
    weylcc::CompileOptions options;
    options.mode = arm == "extended" ? weylcc::CompileMode::Extended
                                     : weylcc::CompileMode::SpeOnly;
    options.optimizer.seed = weylcc::derive_seed(args.seed, "compile-t", 1);
    std::vector<weylcc::Circuit> per_step;
    for (int s = 0; s <= steps; ++s) {
      per_step.push_back(
          weylcc::compile_circuit(
              weylcc::trotter_tfim_circuit(qubits, s, coupling, field, dt),
              gatesets, options)
              .circuit);
    }
    arm_circuits[arm] = std::move(per_step);
  }

  out["rows"] = ordered_json::array();
  int wins_z = 0, wins_y = 0;
  for (int sd = 0; sd < args.seeds; ++sd) {
    std::map<std::string, double> mse_z, mse_y;
    for (const auto &[arm, circuits] : arm_circuits) {
      double ez = 0, ey = 0;
      ordered_json traj = ordered_json::array();
      for (int s = 0; s <= steps; ++s) {
        const auto zc = weylcc::simulate_counts(
            circuits[s], args.shots, nm,
            weylcc::derive_seed(args.seed, "tz-" + arm, 100 * sd + s), lib);
        const auto yc = weylcc::simulate_counts(
            weylcc::with_y_measurement_layer(circuits[s]), args.shots, nm,
            weylcc::derive_seed(args.seed, "ty-" + arm, 100 * sd + s), lib);
        const double mz = weylcc::magnetization(zc, qubits);
        const double my = weylcc::magnetization(yc, qubits);
        ez += std::pow(mz - ideal_z[s], 2);
        ey += std::pow(my - ideal_y[s], 2);
        traj.push_back({{"step", s}, {"z", mz}, {"y", my}});
      }
      mse_z[arm] = ez / (steps + 1);
      mse_y[arm] = ey / (steps + 1);
      ordered_json row;
      row["seed_index"] = sd;
      row["arm"] = arm;
      row["mse_z"] = mse_z[arm];
      row["mse_y"] = mse_y[arm];
      row["trajectory"] = std::move(traj);
      out["rows"].push_back(std::move(row));
    }
    if (arm_circuits.size() == 2) {
      wins_z += mse_z["extended"] <= mse_z["spe_only"] ? 1 : 0;
      wins_y += mse_y["extended"] <= mse_y["spe_only"] ? 1 : 0;
    }
  }
  if (arm_circuits.size() == 2) {
    out["summary"] = {{"wins_z", wins_z},
                      {"wins_y", wins_y},
                      {"seeds", args.seeds}};
  }
  write_or_print(args.out_path, out);
  return kExitOk;
}

int run_selftest_cmd(bool quick, std::uint64_t seed) {
  bool all_ok = true;
  weylcc::run_selftests(quick, seed, [&](const weylcc::SelfTestResult &r) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
              << r.detail << ")\n";
    all_ok = all_ok && r.passed;
  });
  return all_ok ? kExitOk : kExitSynthesis;
}

void emit_error(const std::string &type, const std::string &message) {
  ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"characterize-and-compile toolkit for two-qubit pulse gates"};
  app.require_subcommand(1);

  CharacterizeArgs ch;
  CLI::App *char_cmd = app.add_subcommand(
      "characterize", "simulated tomography of ground-truth pulse models");
  char_cmd->add_option("--models", ch.models_path, "ground-truth models JSON")
      ->required();
  char_cmd->add_option("--out", ch.out_path, "report JSON path (default stdout)");
  char_cmd->add_option("--gateset-out", ch.gateset_out,
                       "write characterized gate sets for the compiler");
  char_cmd->add_option("--seed", ch.seed, "root seed")->envname("WEYLCC_SEED");
  char_cmd->add_option("--shots", ch.shots, "shots per circuit")
      ->envname("WEYLCC_SHOTS");
  char_cmd->add_option("--noise", ch.noise, "depolarizing per application")
      ->envname("WEYLCC_NOISE");
  char_cmd->add_option("--iterations", ch.iterations, "pulse iteration set");
  char_cmd->add_flag("--exact", ch.exact,
                     "fit exact probabilities instead of sampled counts");

  CoverageArgs cov;
  CLI::App *cov_cmd =
      app.add_subcommand("coverage", "dump coverage sets for a gate set");
  cov_cmd->add_option("--gateset", cov.gateset_path, "gate-set JSON")
      ->required();
  cov_cmd->add_option("--out", cov.out_path, "output JSON (default stdout)");
  cov_cmd->add_option("--probe-step", cov.probe_step,
                      "lattice step for probed polytopes");
  cov_cmd->add_option("--seed", cov.seed, "root seed")->envname("WEYLCC_SEED");

  CompileArgs cp;
  CLI::App *cp_cmd =
      app.add_subcommand("compile", "compile a circuit against gate sets");
  cp_cmd->add_option("--circuit", cp.circuit_path, "circuit JSON")->required();
  cp_cmd->add_option("--gateset", cp.gateset_path, "gate-set JSON")
      ->required();
  cp_cmd->add_option("--out", cp.out_path, "output JSON (default stdout)");
  cp_cmd->add_option("--mode", cp.mode, "extended | spe_only | both")
      ->check(CLI::IsMember({"extended", "spe_only", "both"}));
  cp_cmd->add_option("--seed", cp.optimizer.seed, "optimizer seed")
      ->envname("WEYLCC_SEED");
  cp_cmd->add_option("--threshold", cp.optimizer.threshold,
                     "invariant-loss threshold")
      ->envname("WEYLCC_THRESHOLD");
  cp_cmd->add_option("--starts", cp.optimizer.n_starts, "optimizer starts")
      ->envname("WEYLCC_STARTS");
  cp_cmd->add_option("--max-steps", cp.optimizer.max_steps,
                     "optimizer iteration cap");

  CLI::App *bench = app.add_subcommand("bench", "desk-scale benchmarks");
  bench->require_subcommand(1);
  BenchCommonArgs bq;
  std::vector<int> widths = {3, 4, 5, 6};
  std::string bench_mode = "both";
  CLI::App *qft_cmd = bench->add_subcommand("qft", "inverse-QFT benchmark");
  qft_cmd->add_option("--n", widths, "circuit widths");
  qft_cmd->add_option("--mode", bench_mode, "extended | spe_only | both")
      ->check(CLI::IsMember({"extended", "spe_only", "both"}));
  qft_cmd->add_option("--seed", bq.seed, "root seed")->envname("WEYLCC_SEED");
  qft_cmd->add_option("--shots", bq.shots, "shots per run")
      ->envname("WEYLCC_SHOTS");
  qft_cmd->add_option("--seeds", bq.seeds, "noise seeds per width");
  qft_cmd->add_option("--noise", bq.noise,
                      "two-qubit depolarizing per reference duration")
      ->envname("WEYLCC_NOISE");
  qft_cmd->add_option("--out", bq.out_path, "output JSON (default stdout)");
  qft_cmd->add_option("--csv", bq.csv_path, "plot-ready CSV table");

  BenchCommonArgs bt;
  int t_qubits = 4, t_steps = 6;
  double t_j = 1.0, t_h = 1.0, t_dt = weylcc::kPi / 15;
  std::string t_mode = "both";
  CLI::App *tr_cmd = bench->add_subcommand("trotter", "TFIM Trotter benchmark");
  tr_cmd->add_option("--qubits", t_qubits, "line length");
  tr_cmd->add_option("--steps", t_steps, "Trotter steps");
  tr_cmd->add_option("--coupling", t_j, "ZZ coupling strength J");
  tr_cmd->add_option("--field", t_h, "transverse field strength h");
  tr_cmd->add_option("--dt", t_dt, "step size");
  tr_cmd->add_option("--mode", t_mode, "extended | spe_only | both")
      ->check(CLI::IsMember({"extended", "spe_only", "both"}));
  tr_cmd->add_option("--seed", bt.seed, "root seed")->envname("WEYLCC_SEED");
  tr_cmd->add_option("--shots", bt.shots, "shots per run")
      ->envname("WEYLCC_SHOTS");
  tr_cmd->add_option("--seeds", bt.seeds, "noise seeds");
  tr_cmd->add_option("--noise", bt.noise,
                     "two-qubit depolarizing per reference duration")
      ->envname("WEYLCC_NOISE");
  tr_cmd->add_option("--out", bt.out_path, "output JSON (default stdout)");

  bool st_quick = false;
  std::uint64_t st_seed = 0;
  CLI::App *st_cmd =
      app.add_subcommand("selftest", "run the acceptance property suites");
  st_cmd->add_flag("--quick", st_quick, "reduced sample counts");
  st_cmd->add_option("--seed", st_seed, "root seed")->envname("WEYLCC_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    emit_error("usage", e.what());
    return kExitValidation;
  }

  try {
    if (char_cmd->parsed()) return run_characterize(ch);
    if (cov_cmd->parsed()) return run_coverage(cov);
    if (cp_cmd->parsed()) return run_compile(cp);
    if (bench->parsed()) {
      if (qft_cmd->parsed()) return run_bench_qft(bq, widths, bench_mode);
      if (tr_cmd->parsed()) {
        return run_bench_trotter(bt, t_qubits, t_steps, t_j, t_h, t_dt,
                                 t_mode);
      }
    }
    if (st_cmd->parsed()) return run_selftest_cmd(st_quick, st_seed);
  } catch (const weylcc::ValidationError &e) {
    emit_error("validation", e.what());
    return kExitValidation;
  } catch (const weylcc::BadBitstring &e) {
    emit_error("validation", e.what());
    return kExitValidation;
  } catch (const weylcc::MissingGateSet &e) {
    emit_error("validation", e.what());
    return kExitValidation;
  } catch (const weylcc::TooLarge &e) {
    emit_error("validation", e.what());
    return kExitValidation;
  } catch (const weylcc::Error &e) {
    emit_error("synthesis", e.what());
    return kExitSynthesis;
  }
  emit_error("usage", "no subcommand given");
  return kExitValidation;
}
