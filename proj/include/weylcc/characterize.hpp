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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weylcc/coverage.hpp"
#include "weylcc/linalg.hpp"

namespace weylcc {

/// Block-diagonal controlled pulse diag(e^{-i phi} U0, e^{i phi} U1) with
/// U0 = exp(-i u.sigma), U1 = exp(-i v.sigma).
struct ControlledPulseModel {
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  double phi = 0;
};

/// Cross-resonance Hamiltonian coefficients (unit evolution time).
struct CrCoefficients {
  double zx = 0, zy = 0, zz = 0;
  double ix = 0, iy = 0, iz = 0;
  double zi = 0;
};

struct TomographyConfig {
  std::vector<int> iteration_set = {1, 2, 4, 8};
  int shots = 128;
  std::uint64_t seed = 0;
};

struct NoiseSpec {
  double depolarizing_per_pulse = 1e-2;
};

/// One tomography circuit family member: preparation, measurement basis,
/// iteration count, sampled counts, and the exact outcome distribution.
/// Bitstrings are "q0 q1" with q0 the control qubit.
struct MeasurementRecord {
  enum class Family { Block, Phase };
  Family family = Family::Block;
  int control_state = 0;   // 0/1 preparation for block records; -1 for phase
  char target_prep = 'z';  // 'z','x','y' (I, H, S.H); 'p' = eigenstate psi
  char meas_basis = 'z';   // target basis (block) or control basis (phase)
  int iterations = 1;
  std::map<std::string, int> counts;
  std::array<double, 4> exact_probs{};
};

struct FitConfig {
  bool use_exact_probabilities = false;
  double residual_ceiling = 0.5;  // stage-1/2 mean-square ceiling
};

struct FitDiagnostics {
  double stage1_residual = 0;
  double stage2_residual = 0;
  double stage3_residual = 0;
};

Unitary2 bloch_exp(const Eigen::Vector3d &r);

/// Inverse of bloch_exp up to the SU(2) sign; returns the rotation vector of
/// the representative with non-negative real trace (norm in [0, pi/2]).
Eigen::Vector3d su2_to_bloch(const Unitary2 &u);

Unitary4 controlled_unitary(const ControlledPulseModel &m);

/// Canonical coordinate c1 of a controlled pulse in closed form,
/// cos c1 = cos|u| cos|v| + (u.v/|u||v|) sin|u| sin|v|.
double controlled_c1(const ControlledPulseModel &m);

/// H_cr = (1/2)(nu_zx ZX + nu_zy ZY + nu_zz ZZ + nu_ix IX + nu_iy IY
///              + nu_iz IZ + nu_zi ZI)
Hermitian4 cr_hamiltonian(const CrCoefficients &nu);

/// The unique model with controlled_unitary(model) = exp(-i H_cr(nu)):
/// u = (nu_zx+nu_ix, ...)/2, v = (nu_zx-nu_ix, ...)/2, phi = nu_zi/2.
ControlledPulseModel cr_to_model(const CrCoefficients &nu);

/// Inverse of cr_to_model (for characterization reports).
CrCoefficients model_to_cr(const ControlledPulseModel &m);

/// Simulated tomography of the Fig.-3-style experiment family: block
/// tomography circuits for both control preparations, plus control-phase
/// circuits on the eigenstate of U1^dag U0 with per-iteration undo of U0.
/// Exact distributions evolve a density matrix with two-qubit depolarizing
/// after each pulse; counts are sampled with the seeded generator.
std::vector<MeasurementRecord> simulate_tomography(
    const ControlledPulseModel &truth, const TomographyConfig &config,
    const NoiseSpec &noise);

std::pair<ControlledPulseModel, FitDiagnostics> fit_model(
    const std::vector<MeasurementRecord> &records, const FitConfig &config = {});

/// simulate -> fit -> wrap as a PulseGate holding the fitted unitary.
PulseGate characterize_pulse(const ControlledPulseModel &truth,
                             const TomographyConfig &config,
                             const NoiseSpec &noise,
                             const std::string &label, double duration,
                             const FitConfig &fit = {});

/// Greedy edge-coloring batches: no batch shares a qubit between pairs and
/// the batch count stays within (max degree + 1).
std::vector<std::vector<std::pair<int, int>>> batch_schedule(
    const std::vector<std::pair<int, int>> &pairs);

}  // namespace weylcc
