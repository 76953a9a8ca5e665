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

#include "weylcc/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"

namespace weylcc {

Unitary2 bloch_exp(const Eigen::Vector3d &r) {
  const double a = r.norm();
  if (a < 1e-300) return Unitary2::Identity();
  const Eigen::Vector3d n = r / a;
  const Unitary2 ns = n.x() * gates::x() + n.y() * gates::y() +
                      n.z() * gates::z();
  return std::cos(a) * Unitary2::Identity() - c64(0, 1) * std::sin(a) * ns;
}

Unitary4 controlled_unitary(const ControlledPulseModel &m) {
  Unitary4 u = Unitary4::Zero();
  u.block<2, 2>(0, 0) = std::polar(1.0, -m.phi) * bloch_exp(m.u);
  u.block<2, 2>(2, 2) = std::polar(1.0, m.phi) * bloch_exp(m.v);
  return u;
}

double controlled_c1(const ControlledPulseModel &m) {
  const double nu = m.u.norm();
  const double nv = m.v.norm();
  double dothat = 0;
  if (nu > 1e-300 && nv > 1e-300) dothat = m.u.dot(m.v) / (nu * nv);
  const double x = std::cos(nu) * std::cos(nv) +
                   dothat * std::sin(nu) * std::sin(nv);
  const double c1 = std::acos(std::clamp(x, -1.0, 1.0));
  return canonicalize_coords({c1, 0, 0}).c1;
}

Hermitian4 cr_hamiltonian(const CrCoefficients &nu) {
  const Unitary2 i2 = gates::id2();
  Hermitian4 h = Hermitian4::Zero();
  h += nu.zx * kron(gates::z(), gates::x());
  h += nu.zy * kron(gates::z(), gates::y());
  h += nu.zz * kron(gates::z(), gates::z());
  h += nu.ix * kron(i2, gates::x());
  h += nu.iy * kron(i2, gates::y());
  h += nu.iz * kron(i2, gates::z());
  h += nu.zi * kron(gates::z(), i2);
  return h / 2;
}

ControlledPulseModel cr_to_model(const CrCoefficients &nu) {
  // The control-|1> block of exp(-i H_cr) sees the Z-type coefficients with
  // opposite sign, so v picks up (nu_i* - nu_z*)/2; fixed by the matrix
  // equality with controlled_unitary.
  ControlledPulseModel m;
  m.u = Eigen::Vector3d(nu.zx + nu.ix, nu.zy + nu.iy, nu.zz + nu.iz) / 2;
  m.v = Eigen::Vector3d(nu.ix - nu.zx, nu.iy - nu.zy, nu.iz - nu.zz) / 2;
  m.phi = nu.zi / 2;
  return m;
}

CrCoefficients model_to_cr(const ControlledPulseModel &m) {
  CrCoefficients nu;
  nu.zx = m.u.x() - m.v.x();
  nu.zy = m.u.y() - m.v.y();
  nu.zz = m.u.z() - m.v.z();
  nu.ix = m.u.x() + m.v.x();
  nu.iy = m.u.y() + m.v.y();
  nu.iz = m.u.z() + m.v.z();
  nu.zi = 2 * m.phi;
  return nu;
}

namespace {

using Density = Eigen::Matrix4cd;

Unitary2 prep_gate(char basis) {
  switch (basis) {
    case 'z':
      return gates::id2();
    case 'x':
      return gates::h();
    case 'y':
      return Unitary2(gates::s() * gates::h());
    default:
      throw ValidationError("unknown basis label");
  }
}

void depolarize(Density &rho, double p) {
  if (p <= 0) return;
  rho = (1 - p) * rho + p * rho.trace() * Density::Identity() / 4.0;
}

std::array<double, 4> measure_probs(const Density &rho) {
  std::array<double, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = std::max(0.0, rho(i, i).real());
  double s = p[0] + p[1] + p[2] + p[3];
  for (double &x : p) x /= s;
  return p;
}

std::map<std::string, int> sample_counts(const std::array<double, 4> &p,
                                         int shots, std::mt19937_64 &rng) {
  static const char *kBits[4] = {"00", "01", "10", "11"};
  std::map<std::string, int> counts;
  std::discrete_distribution<int> dist(p.begin(), p.end());
  for (int s = 0; s < shots; ++s) counts[kBits[dist(rng)]]++;
  return counts;
}

/// SU(2) elements are determined by Bloch tomography only up to sign. Both
/// the simulated protocol and the fit pin the representative with
/// non-negative real trace (ties by axis orientation), so the phase stage
/// works with one shared convention; the leftover sign folds into phi,
/// which is only defined modulo pi.
Unitary2 canonical_su2_sign(const Unitary2 &u) {
  const double t = u.trace().real();
  if (t > 1e-12) return u;
  if (t < -1e-12) return -u;
  // traceless: u = -i (n . sigma); orient n deterministically
  const double n3 = -u(0, 0).imag();
  if (std::abs(n3) > 1e-12) return n3 > 0 ? u : Unitary2(-u);
  const double n2 = u(1, 0).real();
  if (std::abs(n2) > 1e-12) return n2 > 0 ? u : Unitary2(-u);
  const double n1 = -u(1, 0).imag();
  return n1 >= 0 ? u : Unitary2(-u);
}

}  // namespace

Eigen::Vector3d su2_to_bloch(const Unitary2 &u_in) {
  const Unitary2 u = canonical_su2_sign(u_in);
  const double ca = std::clamp(u.trace().real() / 2.0, -1.0, 1.0);
  const double a = std::acos(ca);
  if (std::sin(a) < 1e-12) return Eigen::Vector3d::Zero();
  Eigen::Vector3d n;
  n.x() = -(u(0, 1) + u(1, 0)).imag() / (2 * std::sin(a));
  n.y() = -(u(0, 1) - u(1, 0)).real() / (2 * std::sin(a));
  n.z() = -(u(0, 0) - u(1, 1)).imag() / (2 * std::sin(a));
  return a * n.normalized();
}

namespace {

/// Eigenstate of U2 = U1^dag U0 (canonical-sign lifts) with the eigenvalue
/// of positive imaginary part; ties resolved toward a real-positive leading
/// component.
std::pair<Eigen::Vector2cd, double> phase_eigenstate(const Unitary2 &u0_in,
                                                     const Unitary2 &u1_in) {
  const Unitary2 u0 = canonical_su2_sign(u0_in);
  const Unitary2 u1 = canonical_su2_sign(u1_in);
  const Unitary2 u2 = u1.adjoint() * u0;
  Eigen::ComplexEigenSolver<Unitary2> es(u2);
  int pick = 0;
  const double im0 = es.eigenvalues()(0).imag();
  const double im1 = es.eigenvalues()(1).imag();
  if (std::abs(im0 - im1) < 1e-12) {
    pick = es.eigenvalues()(0).real() >= es.eigenvalues()(1).real() ? 0 : 1;
  } else {
    pick = im0 > im1 ? 0 : 1;
  }
  Eigen::Vector2cd psi = es.eigenvectors().col(pick);
  const int lead = std::abs(psi(0)) > 1e-8 ? 0 : 1;
  psi *= std::polar(1.0, -std::arg(psi(lead)));
  psi.normalize();
  return {psi, std::arg(es.eigenvalues()(pick))};
}

}  // namespace

std::vector<MeasurementRecord> simulate_tomography(
    const ControlledPulseModel &truth, const TomographyConfig &config,
    const NoiseSpec &noise) {
  if (config.iteration_set.empty()) {
    throw ValidationError("iteration set must be non-empty");
  }
  for (std::size_t i = 1; i < config.iteration_set.size(); ++i) {
    if (config.iteration_set[i] <= config.iteration_set[i - 1]) {
      throw ValidationError("iteration set must be strictly increasing");
    }
  }
  const Unitary4 pulse = controlled_unitary(truth);
  const double p = noise.depolarizing_per_pulse;
  std::vector<MeasurementRecord> records;
  std::uint64_t record_index = 0;

  const auto run = [&](const Density &rho0, const Unitary4 &per_iter_post,
                       const Unitary4 &meas_rot, int n) {
    Density rho = rho0;
    for (int it = 0; it < n; ++it) {
      rho = pulse * rho * pulse.adjoint();
      depolarize(rho, p);
      rho = per_iter_post * rho * per_iter_post.adjoint();
    }
    rho = meas_rot * rho * meas_rot.adjoint();
    return measure_probs(rho);
  };

  // Block family: control in |0> or |1>, target prepared in {I, H, S.H},
  // pulse applied n times, target measured in {X, Y, Z}.
  for (int cs : {0, 1}) {
    for (char tp : {'z', 'x', 'y'}) {
      for (char mb : {'x', 'y', 'z'}) {
        for (int n : config.iteration_set) {
          Eigen::Vector4cd state = Eigen::Vector4cd::Zero();
          const Unitary2 rp = prep_gate(tp);
          state(2 * cs + 0) = rp(0, 0);
          state(2 * cs + 1) = rp(1, 0);
          const Density rho0 = state * state.adjoint();
          const Unitary4 rot = kron(gates::id2(),
                                    Unitary2(prep_gate(mb).adjoint()));
          MeasurementRecord rec;
          rec.family = MeasurementRecord::Family::Block;
          rec.control_state = cs;
          rec.target_prep = tp;
          rec.meas_basis = mb;
          rec.iterations = n;
          rec.exact_probs = run(rho0, Unitary4::Identity(), rot, n);
          auto rng = make_rng(config.seed, "tomography", record_index++);
          rec.counts = sample_counts(rec.exact_probs, config.shots, rng);
          records.push_back(std::move(rec));
        }
      }
    }
  }

  // Phase family: control in |+>, target in the eigenstate of U1^dag U0,
  // U0 undone on the target after each iteration, control read in X and Y.
  const auto [psi, lambda] = phase_eigenstate(bloch_exp(truth.u),
                                              bloch_exp(truth.v));
  (void)lambda;
  const Unitary4 undo = kron(gates::id2(), Unitary2(bloch_exp(truth.u).adjoint()));
  for (char mb : {'x', 'y'}) {
    for (int n : config.iteration_set) {
      Eigen::Vector4cd state;
      state << psi(0), psi(1), psi(0), psi(1);
      state /= std::sqrt(2.0);
      const Density rho0 = state * state.adjoint();
      const Unitary4 rot = kron(Unitary2(prep_gate(mb).adjoint()), gates::id2());
      MeasurementRecord rec;
      rec.family = MeasurementRecord::Family::Phase;
      rec.control_state = -1;
      rec.target_prep = 'p';
      rec.meas_basis = mb;
      rec.iterations = n;
      rec.exact_probs = run(rho0, undo, rot, n);
      auto rng = make_rng(config.seed, "tomography", record_index++);
      rec.counts = sample_counts(rec.exact_probs, config.shots, rng);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

namespace {

/// Expectation of Z on one qubit from a record (0 = control, 1 = target).
double record_expectation(const MeasurementRecord &rec, int qubit,
                          bool exact) {
  if (exact) {
    double e = 0;
    for (int idx = 0; idx < 4; ++idx) {
      const int bit = (idx >> (1 - qubit)) & 1;
      e += rec.exact_probs[idx] * (1 - 2 * bit);
    }
    return e;
  }
  double e = 0;
  int total = 0;
  for (const auto &[bits, n] : rec.counts) {
    const int bit = bits[qubit] - '0';
    e += n * (1 - 2 * bit);
    total += n;
  }
  return total > 0 ? e / total : 0.0;
}

Eigen::Vector3d basis_vec(char b) {
  switch (b) {
    case 'x':
      return {1, 0, 0};
    case 'y':
      return {0, 1, 0};
    default:
      return {0, 0, 1};
  }
}

Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d &axis, double ang) {
  return Eigen::AngleAxisd(ang, axis.normalized()).toRotationMatrix();
}

struct BlockSample {
  Eigen::Vector3d prep;
  Eigen::Vector3d meas;
  int n;
  double value;
};

/// Least-squares fit of a Bloch rotation (axis, angle) plus an isotropic
/// per-iteration decay to the block-family expectations.
struct BlockFit {
  Eigen::Vector3d u;
  double residual;
};

struct BlockParams {
  double theta, az, angle, decay;
};

Eigen::VectorXd residuals(const BlockParams &p,
                          const std::vector<BlockSample> &data) {
  const Eigen::Vector3d axis(std::sin(p.theta) * std::cos(p.az),
                             std::sin(p.theta) * std::sin(p.az),
                             std::cos(p.theta));
  Eigen::VectorXd r(data.size());
  const double lam = std::clamp(p.decay, 0.0, 1.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Eigen::Matrix3d rot =
        axis_angle_rotation(axis, 2 * p.angle * data[i].n);
    const double pred = std::pow(lam, data[i].n) *
                        data[i].meas.dot(rot * data[i].prep);
    r(i) = pred - data[i].value;
  }
  return r;
}

/// Levenberg-Marquardt with forward-difference Jacobian; four parameters.
BlockParams lm_fit(BlockParams p, const std::vector<BlockSample> &data) {
  double mu = 1e-3;
  Eigen::VectorXd r = residuals(p, data);
  double cost = r.squaredNorm();
  for (int it = 0; it < 200; ++it) {
    const double h = 1e-7;
    Eigen::MatrixXd jac(r.size(), 4);
    for (int k = 0; k < 4; ++k) {
      BlockParams q = p;
      (&q.theta)[k] += h;
      jac.col(k) = (residuals(q, data) - r) / h;
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * r;
    if (jtr.norm() < 1e-13) break;
    bool stepped = false;
    for (int tries = 0; tries < 12; ++tries) {
      const Eigen::Vector4d delta =
          (jtj + mu * Eigen::Matrix4d::Identity()).ldlt().solve(-jtr);
      BlockParams q = p;
      q.theta += delta(0);
      q.az += delta(1);
      q.angle += delta(2);
      q.decay += delta(3);
      const Eigen::VectorXd rq = residuals(q, data);
      if (rq.squaredNorm() < cost) {
        p = q;
        r = rq;
        cost = rq.squaredNorm();
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        break;
      }
      mu *= 4;
    }
    if (!stepped) break;
  }
  return p;
}

/// Extracts the Bloch rotation matrix estimate from the n = n_min block of
/// expectations, projected onto SO(3), as the fit initializer.
Eigen::Matrix3d estimate_rotation(const std::vector<BlockSample> &data,
                                  int n_ref) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (const auto &s : data) {
    if (s.n != n_ref) continue;
    // meas/prep vectors are axis-aligned here
    int col = 0, row = 0;
    for (int k = 0; k < 3; ++k) {
      if (s.prep(k) > 0.5) col = k;
      if (s.meas(k) > 0.5) row = k;
    }
    m(row, col) = s.value;
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1;
    rot = u * svd.matrixV().transpose();
  }
  return rot;
}

BlockFit fit_block(const std::vector<BlockSample> &data, int n_min,
                   double ceiling) {
  const Eigen::Matrix3d r0 = estimate_rotation(data, n_min);
  const Eigen::AngleAxisd aa(r0);
  Eigen::Vector3d axis = aa.axis();
  double angle = aa.angle() / (2.0 * n_min);
  BlockParams best{};
  double best_cost = std::numeric_limits<double>::infinity();
  for (int variant = 0; variant < 4; ++variant) {
    Eigen::Vector3d ax = axis;
    double an = angle;
    if (variant == 1) {  // complementary rotation branch
      ax = -axis;
      an = kPi / n_min - angle;
    } else if (variant == 2) {
      ax = Eigen::Vector3d(0, 0, 1);
      an = 0;
    } else if (variant == 3) {
      ax = -axis;
      an = angle + kPi / (2.0 * n_min);
    }
    BlockParams p{std::acos(std::clamp(ax.z(), -1.0, 1.0)),
                  std::atan2(ax.y(), ax.x()), an, 1.0};
    p = lm_fit(p, data);
    const double cost = residuals(p, data).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = p;
    }
    if (best_cost < 1e-16) break;
  }
  BlockFit out;
  const Eigen::Vector3d axis_fit(std::sin(best.theta) * std::cos(best.az),
                                 std::sin(best.theta) * std::sin(best.az),
                                 std::cos(best.theta));
  // reduce to |u| in [0, pi), then take the canonical-sign representative
  double a = best.angle;
  Eigen::Vector3d ax = axis_fit.normalized();
  a = std::fmod(a, 2 * kPi);
  if (a < 0) {
    a = -a;
    ax = -ax;
  }
  if (a >= kPi) {
    a = 2 * kPi - a;
    ax = -ax;
  }
  out.u = su2_to_bloch(bloch_exp(a * ax));
  out.residual = best_cost / static_cast<double>(data.size());
  if (!(out.residual < ceiling)) {
    throw AmbiguousFit("block fit residual above ceiling");
  }
  return out;
}

}  // namespace

std::pair<ControlledPulseModel, FitDiagnostics> fit_model(
    const std::vector<MeasurementRecord> &records, const FitConfig &config) {
  std::vector<BlockSample> s0, s1;
  std::vector<std::pair<int, std::array<double, 2>>> phase_rows;  // n -> (X, Y)
  std::map<int, std::array<double, 2>> phase_acc;
  std::map<int, std::array<bool, 2>> phase_seen;
  std::vector<int> iters;
  for (const MeasurementRecord &rec : records) {
    if (rec.family == MeasurementRecord::Family::Block) {
      BlockSample s;
      s.prep = basis_vec(rec.target_prep);
      s.meas = basis_vec(rec.meas_basis);
      s.n = rec.iterations;
      s.value = record_expectation(rec, 1, config.use_exact_probabilities);
      (rec.control_state == 0 ? s0 : s1).push_back(s);
      iters.push_back(rec.iterations);
    } else {
      const int slot = rec.meas_basis == 'x' ? 0 : 1;
      phase_acc[rec.iterations][slot] =
          record_expectation(rec, 0, config.use_exact_probabilities);
      phase_seen[rec.iterations][slot] = true;
    }
  }
  std::sort(iters.begin(), iters.end());
  iters.erase(std::unique(iters.begin(), iters.end()), iters.end());
  if (iters.size() < 2) {
    throw InsufficientData("need at least two distinct iteration counts");
  }
  if (s0.size() < 9 * iters.size() || s1.size() < 9 * iters.size()) {
    throw InsufficientData("missing block basis configurations");
  }
  for (const auto &[n, seen] : phase_seen) {
    if (!seen[0] || !seen[1]) {
      throw InsufficientData("phase records must cover X and Y bases");
    }
  }
  if (phase_acc.empty()) {
    throw InsufficientData("no phase records present");
  }

  FitDiagnostics diag;
  const BlockFit f0 = fit_block(s0, iters.front(), config.residual_ceiling);
  const BlockFit f1 = fit_block(s1, iters.front(), config.residual_ceiling);
  diag.stage1_residual = f0.residual;
  diag.stage2_residual = f1.residual;

  ControlledPulseModel m;
  m.u = f0.u;
  m.v = f1.u;

  // Stage 3: the control-phase observables satisfy <X>_n = lam^n cos(n w),
  // <Y>_n = -lam^n sin(n w) with w = lambda_eig - 2 phi.
  const auto [psi, lambda_eig] = phase_eigenstate(bloch_exp(m.u),
                                                  bloch_exp(m.v));
  (void)psi;
  double w_est = 0;
  bool first = true;
  for (const auto &[n, xy] : phase_acc) {
    const double obs = std::atan2(-xy[1], xy[0]);
    if (first) {
      w_est = obs;  // n is the smallest iteration count; assume |w| alias-free
      w_est /= n;
      first = false;
      continue;
    }
    // unwrap against the running estimate
    const double predicted = w_est * n;
    const double k = std::round((predicted - obs) / (2 * kPi));
    w_est = (obs + 2 * kPi * k) / n;
  }
  // least-squares polish over (w, decay)
  double lam = 1.0, w = w_est;
  for (int it = 0; it < 100; ++it) {
    double g_w = 0, g_l = 0, cost = 0;
    double h_ww = 1e-12, h_ll = 1e-12;
    for (const auto &[n, xy] : phase_acc) {
      const double ln = std::pow(lam, n);
      const double cx = ln * std::cos(n * w) - xy[0];
      const double cy = -ln * std::sin(n * w) - xy[1];
      cost += cx * cx + cy * cy;
      const double dcx_dw = -n * ln * std::sin(n * w);
      const double dcy_dw = -n * ln * std::cos(n * w);
      const double dln = n * std::pow(lam, n - 1);
      const double dcx_dl = dln * std::cos(n * w);
      const double dcy_dl = -dln * std::sin(n * w);
      g_w += 2 * (cx * dcx_dw + cy * dcy_dw);
      g_l += 2 * (cx * dcx_dl + cy * dcy_dl);
      h_ww += 2 * (dcx_dw * dcx_dw + dcy_dw * dcy_dw);
      h_ll += 2 * (dcx_dl * dcx_dl + dcy_dl * dcy_dl);
    }
    const double step_w = g_w / h_ww;
    const double step_l = g_l / h_ll;
    w -= step_w;
    lam = std::clamp(lam - step_l, 0.0, 1.0);
    if (std::abs(step_w) < 1e-14 && std::abs(step_l) < 1e-14) break;
  }
  double cost3 = 0;
  for (const auto &[n, xy] : phase_acc) {
    const double ln = std::pow(lam, n);
    cost3 += std::pow(ln * std::cos(n * w) - xy[0], 2) +
             std::pow(-ln * std::sin(n * w) - xy[1], 2);
  }
  diag.stage3_residual = cost3 / (2.0 * phase_acc.size());

  // phi enters the observable as 2 phi; report the representative in
  // [-pi/2, pi/2)
  double phi = (lambda_eig - w) / 2.0;
  phi = phi - kPi * std::floor(phi / kPi + 0.5);
  if (phi >= kPi / 2) phi -= kPi;
  m.phi = phi;
  return {m, diag};
}

PulseGate characterize_pulse(const ControlledPulseModel &truth,
                             const TomographyConfig &config,
                             const NoiseSpec &noise, const std::string &label,
                             double duration, const FitConfig &fit) {
  const std::vector<MeasurementRecord> records =
      simulate_tomography(truth, config, noise);
  const auto [model, diag] = fit_model(records, fit);
  (void)diag;
  return make_pulse_gate(label, controlled_unitary(model), duration);
}

std::vector<std::vector<std::pair<int, int>>> batch_schedule(
    const std::vector<std::pair<int, int>> &pairs) {
  // Misra-Gries edge coloring; uses at most (max degree + 1) colors.
  std::map<int, int> vid;
  for (const auto &[a, b] : pairs) {
    if (a == b) throw ValidationError("self-loop qubit pair");
    vid.emplace(a, static_cast<int>(vid.size()));
    vid.emplace(b, static_cast<int>(vid.size()));
  }
  const int nv = static_cast<int>(vid.size());
  const int ne = static_cast<int>(pairs.size());
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge)
  std::vector<int> eu(ne), ev(ne);
  int maxdeg = 0;
  for (int e = 0; e < ne; ++e) {
    eu[e] = vid[pairs[e].first];
    ev[e] = vid[pairs[e].second];
    adj[eu[e]].push_back({ev[e], e});
    adj[ev[e]].push_back({eu[e], e});
  }
  for (const auto &a : adj) {
    maxdeg = std::max(maxdeg, static_cast<int>(a.size()));
  }
  const int ncolors = maxdeg + 1;
  std::vector<int> color(ne, -1);
  // colored[v][c] = edge at v with color c, or -1
  std::vector<std::vector<int>> at(nv, std::vector<int>(ncolors, -1));

  const auto free_color = [&](int v) {
    for (int c = 0; c < ncolors; ++c) {
      if (at[v][c] < 0) return c;
    }
    return -1;
  };
  const auto set_color = [&](int e, int c) {
    if (color[e] >= 0) {
      at[eu[e]][color[e]] = -1;
      at[ev[e]][color[e]] = -1;
    }
    color[e] = c;
    at[eu[e]][c] = e;
    at[ev[e]][c] = e;
  };

  for (int e0 = 0; e0 < ne; ++e0) {
    const int u = eu[e0];
    // maximal fan of u starting at the other endpoint of e0: each next fan
    // edge's color is free on the previous fan vertex
    std::vector<int> fan_edge = {e0};
    std::vector<int> fan_vertex = {eu[e0] == u ? ev[e0] : eu[e0]};
    std::vector<bool> used(ne, false);
    used[e0] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      const int tail = fan_vertex.back();
      for (const auto &[nb, e] : adj[u]) {
        if (used[e] || color[e] < 0) continue;
        if (at[tail][color[e]] < 0) {
          fan_edge.push_back(e);
          fan_vertex.push_back(nb);
          used[e] = true;
          grew = true;
          break;
        }
      }
    }
    const int c = free_color(u);
    const int d = free_color(fan_vertex.back());
    if (d != c) {
      // invert the maximal cd-path through u (it starts with a d-edge; c is
      // free on u), making d free on u
      int cur = u;
      int look = d;
      std::vector<int> path;
      while (true) {
        const int e = at[cur][look];
        if (e < 0) break;
        path.push_back(e);
        cur = eu[e] == cur ? ev[e] : eu[e];
        look = look == d ? c : d;
      }
      std::vector<int> swapped(path.size());
      for (std::size_t i = 0; i < path.size(); ++i) {
        swapped[i] = color[path[i]] == c ? d : c;
        at[eu[path[i]]][color[path[i]]] = -1;
        at[ev[path[i]]][color[path[i]]] = -1;
        color[path[i]] = -1;
      }
      for (std::size_t i = 0; i < path.size(); ++i) {
        set_color(path[i], swapped[i]);
      }
    }
    // find the shortest fan prefix (under post-inversion colors) ending at a
    // vertex with d free, then rotate it and finish with d
    std::size_t w = fan_vertex.size();
    for (std::size_t j = 0; j < fan_vertex.size(); ++j) {
      bool prefix_is_fan = true;
      for (std::size_t i = 0; i < j; ++i) {
        const int col = color[fan_edge[i + 1]];
        if (col < 0 || at[fan_vertex[i]][col] >= 0) {
          prefix_is_fan = false;
          break;
        }
      }
      if (prefix_is_fan && at[fan_vertex[j]][d] < 0) {
        w = j;
        break;
      }
    }
    if (w == fan_vertex.size()) {
      throw Error("edge coloring invariant violated");
    }
    std::vector<int> next_color(w + 1);
    for (std::size_t i = 0; i < w; ++i) next_color[i] = color[fan_edge[i + 1]];
    next_color[w] = d;
    for (std::size_t i = 0; i <= w; ++i) {
      const int e = fan_edge[i];
      if (color[e] >= 0) {
        at[eu[e]][color[e]] = -1;
        at[ev[e]][color[e]] = -1;
        color[e] = -1;
      }
    }
    for (std::size_t i = 0; i <= w; ++i) set_color(fan_edge[i], next_color[i]);
  }

  // compression pass: move edges down to any lower color free on both ends
  for (bool changed = true; changed;) {
    changed = false;
    for (int e = 0; e < ne; ++e) {
      for (int c = 0; c < color[e]; ++c) {
        if (at[eu[e]][c] < 0 && at[ev[e]][c] < 0) {
          set_color(e, c);
          changed = true;
          break;
        }
      }
    }
  }

  int used_colors = 0;
  for (int e = 0; e < ne; ++e) used_colors = std::max(used_colors, color[e] + 1);
  std::vector<std::vector<std::pair<int, int>>> batches(used_colors);
  for (int e = 0; e < ne; ++e) batches[color[e]].push_back(pairs[e]);
  return batches;
}

}  // namespace weylcc
