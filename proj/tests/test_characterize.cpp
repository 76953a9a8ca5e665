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

#include <set>

#include "weylcc/characterize.hpp"
#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/weyl.hpp"

using namespace weylcc;

namespace {

ControlledPulseModel haar_model(std::uint64_t seed) {
  auto rng = make_rng(seed, "haar-model");
  // Haar-random block unitaries expressed through their Bloch vectors
  const auto draw = [&rng] {
    const Unitary2 g = haar_random_su2(rng);
    // g = cos a I - i sin a (n.sigma): recover a and n
    const double ca = std::clamp(g.trace().real() / 2.0, -1.0, 1.0);
    const double a = std::acos(ca);
    Eigen::Vector3d n(0, 0, 1);
    if (std::sin(a) > 1e-12) {
      n.x() = -(g(0, 1) + g(1, 0)).imag() / (2 * std::sin(a));
      n.y() = -(g(0, 1) - g(1, 0)).real() / (2 * std::sin(a));
      n.z() = -(g(0, 0) - g(1, 1)).imag() / (2 * std::sin(a));
    }
    return Eigen::Vector3d(a * n);
  };
  ControlledPulseModel m;
  m.u = draw();
  m.v = draw();
  std::uniform_real_distribution<double> ud(-kPi / 2, kPi / 2);
  m.phi = ud(rng);
  return m;
}

bool batches_valid(const std::vector<std::pair<int, int>> &pairs,
                   const std::vector<std::vector<std::pair<int, int>>> &b) {
  std::size_t total = 0;
  for (const auto &batch : b) {
    std::set<int> seen;
    for (const auto &[x, y] : batch) {
      if (!seen.insert(x).second || !seen.insert(y).second) return false;
      ++total;
    }
  }
  return total == pairs.size();
}

}  // namespace

TEST_CASE("controlled_unitary structure") {
  ControlledPulseModel zero;
  CHECK(max_abs_diff(controlled_unitary(zero), Unitary4::Identity()) < 1e-15);

  ControlledPulseModel phase_only;
  phase_only.phi = 0.3;
  const Unitary4 d = controlled_unitary(phase_only);
  CHECK(max_abs_diff(d, herm_exp(Hermitian4(
                            0.3 * kron(gates::z(), gates::id2())))) < 1e-12);

  ControlledPulseModel zx;
  zx.u = {kPi / 4, 0, 0};
  zx.v = {-kPi / 4, 0, 0};
  CHECK(max_abs_diff(controlled_unitary(zx),
                     herm_exp(Hermitian4((kPi / 4) *
                                         kron(gates::z(), gates::x())))) <
        1e-12);

  // blocks stay unitary and off-blocks vanish for random models
  const ControlledPulseModel m = haar_model(5);
  const Unitary4 u = controlled_unitary(m);
  CHECK(u.block<2, 2>(0, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(u.block<2, 2>(2, 0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_unitary(u, 1e-12));
}

TEST_CASE("controlled_c1 closed form vs KAK") {
  ControlledPulseModel same;
  same.u = same.v = Eigen::Vector3d(0.3, -0.2, 0.9);
  CHECK(controlled_c1(same) == doctest::Approx(0.0).epsilon(1e-12));

  ControlledPulseModel zx;
  zx.u = {kPi / 4, 0, 0};
  zx.v = {-kPi / 4, 0, 0};
  CHECK(controlled_c1(zx) == doctest::Approx(kPi / 2));

  for (int i = 0; i < 300; ++i) {
    const ControlledPulseModel m = haar_model(100 + i);
    const CartanFactors f = cartan_decompose(controlled_unitary(m), i);
    CHECK(std::abs(controlled_c1(m) - f.coords.c1) < 1e-9);
    CHECK(f.coords.c2 < 1e-9);
    CHECK(f.coords.c3 < 1e-9);
    // Controlled pulses are single-axis: real g1 and g2 - 2 (Re g1)^2 = 1.
    const MakhlinInvariants g = makhlin_invariants(controlled_unitary(m));
    CHECK(std::abs(g.g1.imag()) < 1e-10);
    CHECK(std::abs(g.g2 - 2 * g.g1.real() * g.g1.real() - 1.0) < 1e-10);
  }
}

TEST_CASE("cr_to_model matrix-level contract") {
  CrCoefficients zero;
  const ControlledPulseModel m0 = cr_to_model(zero);
  CHECK(max_abs_diff(controlled_unitary(m0), Unitary4::Identity()) < 1e-15);

  CrCoefficients zi;
  zi.zi = 0.8;
  const ControlledPulseModel m1 = cr_to_model(zi);
  CHECK(m1.u.norm() == doctest::Approx(0.0));
  CHECK(max_abs_diff(controlled_unitary(m1), herm_exp(cr_hamiltonian(zi))) <
        1e-12);

  CrCoefficients zx;
  zx.zx = kPi / 2;
  CHECK(controlled_c1(cr_to_model(zx)) == doctest::Approx(kPi / 2));

  auto rng = make_rng(7, "cr");
  std::normal_distribution<double> nd(0, 0.6);
  for (int i = 0; i < 50; ++i) {
    CrCoefficients nu{nd(rng), nd(rng), nd(rng), nd(rng),
                      nd(rng), nd(rng), nd(rng)};
    const ControlledPulseModel m = cr_to_model(nu);
    CHECK(max_abs_diff(controlled_unitary(m), herm_exp(cr_hamiltonian(nu))) <
          1e-10);
    const CrCoefficients back = model_to_cr(m);
    CHECK(back.zx == doctest::Approx(nu.zx));
    CHECK(back.zi == doctest::Approx(nu.zi));
  }
}

TEST_CASE("simulate_tomography contracts") {
  const ControlledPulseModel truth = haar_model(11);
  TomographyConfig cfg;
  cfg.shots = 64;
  cfg.seed = 3;
  NoiseSpec noiseless;
  noiseless.depolarizing_per_pulse = 0;
  const auto recs = simulate_tomography(truth, cfg, noiseless);
  // 2 control states x 3 preps x 3 meas x 4 iters + 2 x 4 phase records
  CHECK(recs.size() == 2 * 3 * 3 * 4 + 2 * 4);
  for (const auto &r : recs) {
    int total = 0;
    double psum = 0;
    for (const auto &[k, v] : r.counts) total += v;
    for (double p : r.exact_probs) psum += p;
    CHECK(total == cfg.shots);
    CHECK(psum == doctest::Approx(1.0));
  }
  // identical seeds reproduce identical records
  const auto recs2 = simulate_tomography(truth, cfg, noiseless);
  CHECK(recs2[5].counts == recs[5].counts);

  // depolarizing shrinks expectations by (1-p)^n
  NoiseSpec noisy;
  noisy.depolarizing_per_pulse = 0.25;
  const auto recsn = simulate_tomography(truth, cfg, noisy);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].family != MeasurementRecord::Family::Block) continue;
    const int n = recs[i].iterations;
    double e_clean = 0, e_noisy = 0;
    for (int idx = 0; idx < 4; ++idx) {
      const int bit = (idx >> 0) & 1;  // target bit
      e_clean += recs[i].exact_probs[idx] * (1 - 2 * bit);
      e_noisy += recsn[i].exact_probs[idx] * (1 - 2 * bit);
    }
    CHECK(e_noisy == doctest::Approx(e_clean * std::pow(0.75, n))
                         .epsilon(1e-9));
  }
}

TEST_CASE("fit_model recovers noiseless models exactly") {
  TomographyConfig cfg;
  cfg.shots = 1;  // counts unused; the fit reads exact probabilities
  NoiseSpec clean;
  clean.depolarizing_per_pulse = 0;
  FitConfig fc;
  fc.use_exact_probabilities = true;
  for (int i = 0; i < 8; ++i) {
    const ControlledPulseModel truth = haar_model(200 + i);
    cfg.seed = i;
    const auto recs = simulate_tomography(truth, cfg, clean);
    const auto [fit, diag] = fit_model(recs, fc);
    const double infid = process_infidelity(controlled_unitary(fit),
                                            controlled_unitary(truth));
    CHECK(infid < 1e-8);
    CHECK(diag.stage1_residual < 1e-10);
  }
}

TEST_CASE("fit_model under shot noise and depolarizing") {
  TomographyConfig cfg;
  cfg.shots = 128;
  NoiseSpec noise;  // default 1e-2 per application
  std::vector<double> infids;
  for (int i = 0; i < 12; ++i) {
    const ControlledPulseModel truth = haar_model(300 + i);
    cfg.seed = 40 + i;
    const auto recs = simulate_tomography(truth, cfg, noise);
    const auto [fit, diag] = fit_model(recs, {});
    infids.push_back(process_infidelity(controlled_unitary(fit),
                                        controlled_unitary(truth)));
  }
  std::sort(infids.begin(), infids.end());
  CHECK(infids[infids.size() / 2] < 5e-3);
}

TEST_CASE("fit infidelity is monotone in shots on average") {
  NoiseSpec noise;  // 1e-2 per application
  const std::vector<int> shot_counts = {32, 128, 512, 2048};
  std::vector<double> mean_infid;
  for (int shots : shot_counts) {
    TomographyConfig cfg;
    cfg.shots = shots;
    double acc = 0;
    const int models = 50;
    for (int i = 0; i < models; ++i) {
      const ControlledPulseModel truth = haar_model(700 + i);
      cfg.seed = derive_seed(55, "shots-sweep", 100 * shots + i);
      const auto recs = simulate_tomography(truth, cfg, noise);
      const auto [fit, diag] = fit_model(recs, {});
      acc += process_infidelity(controlled_unitary(fit),
                                controlled_unitary(truth));
    }
    mean_infid.push_back(acc / models);
  }
  for (std::size_t i = 1; i < mean_infid.size(); ++i) {
    CHECK(mean_infid[i] <= mean_infid[i - 1] * 1.05);
  }
}

TEST_CASE("fit_model input validation") {
  const ControlledPulseModel truth = haar_model(12);
  TomographyConfig cfg;
  cfg.iteration_set = {1};
  const auto recs = simulate_tomography(truth, cfg, {});
  CHECK_THROWS_AS((void)fit_model(recs, {}), InsufficientData);
}

TEST_CASE("characterize_pulse end to end") {
  CrCoefficients nu;
  nu.zx = kPi / 2 + 0.1;
  nu.ix = 0.02;
  nu.zy = -0.01;
  const ControlledPulseModel truth = cr_to_model(nu);
  TomographyConfig cfg;
  cfg.seed = 9;
  NoiseSpec clean;
  clean.depolarizing_per_pulse = 0;
  FitConfig fc;
  fc.use_exact_probabilities = true;
  const PulseGate g = characterize_pulse(truth, cfg, clean, "cr", 130, fc);
  CHECK(std::abs(g.coords.c1 - controlled_c1(truth)) < 1e-6);
  CHECK(g.coords.c2 < 1e-9);
  CHECK(g.single_axis);

  ControlledPulseModel zero;
  const PulseGate gz = characterize_pulse(zero, cfg, clean, "id", 10, fc);
  CHECK(gz.coords.max_abs_diff({0, 0, 0}) < 1e-6);
}

TEST_CASE("batch_schedule edge coloring") {
  const std::vector<std::pair<int, int>> path = {{0, 1}, {1, 2}, {2, 3}};
  const auto b1 = batch_schedule(path);
  CHECK(batches_valid(path, b1));
  CHECK(b1.size() == 2);

  const std::vector<std::pair<int, int>> single = {{4, 7}};
  CHECK(batch_schedule(single).size() == 1);

  // heavy-hex-like degree-3 patch
  const std::vector<std::pair<int, int>> hex = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0},
      {1, 6}, {3, 7}, {5, 8}};
  const auto b2 = batch_schedule(hex);
  CHECK(batches_valid(hex, b2));
  CHECK(b2.size() <= 4);

  // random graphs stay within maxdeg + 1
  auto rng = make_rng(77, "graphs");
  std::uniform_int_distribution<int> vd(0, 11);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<std::pair<int, int>> edges;
    for (int e = 0; e < 18; ++e) {
      int a = vd(rng), b = vd(rng);
      if (a == b) continue;
      edges.insert({std::min(a, b), std::max(a, b)});
    }
    const std::vector<std::pair<int, int>> pairs(edges.begin(), edges.end());
    std::map<int, int> deg;
    for (const auto &[a, b] : pairs) {
      deg[a]++;
      deg[b]++;
    }
    int maxdeg = 0;
    for (const auto &[v, d] : deg) maxdeg = std::max(maxdeg, d);
    const auto batches = batch_schedule(pairs);
    CHECK(batches_valid(pairs, batches));
    CHECK(static_cast<int>(batches.size()) <= maxdeg + 1);
  }
}
