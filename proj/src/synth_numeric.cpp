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

#include "weylcc/synth_numeric.hpp"

#include <cmath>

#include "weylcc/errors.hpp"
#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/synth_closedform.hpp"

namespace weylcc {

Unitary2 zyz(double alpha, double beta, double gamma) {
  return gates::rz(alpha) * gates::ry(beta) * gates::rz(gamma);
}

Unitary4 build_ansatz_unitary(const AnsatzKey &key, const GateSet &gs,
                              const LocalAngles &inner) {
  if (key.empty()) {
    throw ShapeMismatch("ansatz key must contain 1-3 gates");
  }
  const std::size_t want = 2 * (key.size() - 1);
  if (inner.count() != want) {
    throw ShapeMismatch("expected " + std::to_string(want) +
                        " inner locals, got " + std::to_string(inner.count()));
  }
  Unitary4 v = gs.gates.at(key.indices[0]).unitary;
  for (std::size_t i = 1; i < key.size(); ++i) {
    const auto &a = inner.zyz[2 * (i - 1)];
    const auto &b = inner.zyz[2 * (i - 1) + 1];
    v = v * kron(zyz(a[0], a[1], a[2]), zyz(b[0], b[1], b[2]));
    v = v * gs.gates.at(key.indices[i]).unitary;
  }
  return v;
}

double invariant_loss(const Unitary4 &v, const Unitary4 &target) {
  const MakhlinInvariants gv = makhlin_invariants(v);
  const MakhlinInvariants gt = makhlin_invariants(target);
  return std::norm(gv.g1 - gt.g1) + (gv.g2 - gt.g2) * (gv.g2 - gt.g2);
}

namespace {

const Unitary4 &magic_q4() {
  static const Unitary4 q = [] {
    Unitary4 m;
    const c64 i(0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    m << r, 0, 0, i * r,  //
        0, i * r, r, 0,   //
        0, i * r, -r, 0,  //
        r, 0, 0, -i * r;
    return m;
  }();
  return q;
}

/// Loss evaluation context for one ansatz: su-normalized pulses and the
/// target invariants. Parameters are 6 angles per inner local pair.
struct LossContext {
  std::vector<Unitary4> pulses;  // su-normalized
  c64 g1t;
  double g2t;
  int n_params = 0;

  static constexpr double kHalf = 0.5;

  struct Eval {
    double loss;
    Eigen::VectorXd grad;
  };

  /// Residual vector (Re dg1, Im dg1, dg2) and its Jacobian; the loss is the
  /// squared norm of the residuals.
  struct Residuals {
    Eigen::Vector3d r;
    Eigen::MatrixXd jac;
  };

  Residuals residuals(const Eigen::VectorXd &x) const {
    Residuals out;
    out.jac.resize(3, n_params);
    eval_impl(x, nullptr, &out);
    return out;
  }

  Eval eval(const Eigen::VectorXd &x) const {
    Eval out;
    eval_impl(x, &out, nullptr);
    return out;
  }

  void eval_impl(const Eigen::VectorXd &x, Eval *ev, Residuals *res) const {
    const std::size_t nloc = pulses.size() - 1;  // local layers
    // locals and their per-angle derivative factors
    std::vector<Unitary2> us(2 * nloc);
    for (std::size_t i = 0; i < 2 * nloc; ++i) {
      us[i] = zyz(x[3 * i], x[3 * i + 1], x[3 * i + 2]);
    }
    std::vector<Unitary4> layers(nloc);
    for (std::size_t l = 0; l < nloc; ++l) {
      layers[l] = kron(us[2 * l], us[2 * l + 1]);
    }
    // prefix[i] = product of factors before layer i, suffix[i] = after
    std::vector<Unitary4> prefix(nloc), suffix(nloc);
    Unitary4 acc = pulses[0];
    for (std::size_t l = 0; l < nloc; ++l) {
      prefix[l] = acc;
      acc = acc * layers[l] * pulses[l + 1];
    }
    const Unitary4 v = acc;
    Unitary4 tail = Unitary4::Identity();
    for (std::size_t l = nloc; l-- > 0;) {
      suffix[l] = pulses[l + 1] * tail;
      tail = layers[l] * suffix[l];
    }

    const Unitary4 &q = magic_q4();
    const Unitary4 vb = q.adjoint() * v * q;
    const Unitary4 m = vb.transpose() * vb;
    const c64 trm = m.trace();
    const c64 trm2 = (m * m).trace();
    const c64 g1 = trm / 4.0;
    const double g2 = ((trm * trm - trm2) / 4.0).real();
    const c64 e1 = g1 - g1t;
    const double e2 = g2 - g2t;

    if (ev != nullptr) {
      ev->loss = std::norm(e1) + e2 * e2;
      ev->grad.resize(n_params);
    }
    if (res != nullptr) {
      res->r = {e1.real(), e1.imag(), e2};
    }

    const c64 ihalf(0, -kHalf);
    const Unitary2 z2 = gates::z();
    const Unitary2 y2 = gates::y();
    for (std::size_t i = 0; i < 2 * nloc; ++i) {
      const std::size_t layer = i / 2;
      const bool first_slot = (i % 2) == 0;
      const Unitary2 &other = us[first_slot ? i + 1 : i - 1];
      std::array<Unitary2, 3> dus;
      dus[0] = ihalf * z2 * us[i];
      dus[1] = gates::rz(x[3 * i]) * (ihalf * y2) * gates::ry(x[3 * i + 1]) *
               gates::rz(x[3 * i + 2]);
      dus[2] = us[i] * (ihalf * z2);
      for (int a = 0; a < 3; ++a) {
        const Unitary4 dlayer = first_slot ? kron(dus[a], other)
                                           : kron(other, dus[a]);
        const Unitary4 dv = prefix[layer] * dlayer * suffix[layer];
        const Unitary4 dvb = q.adjoint() * dv * q;
        const Unitary4 xm = vb.transpose() * dvb;
        const c64 trx = xm.trace();
        const c64 trmx = (m * xm).trace();
        const c64 dg1 = trx / 2.0;
        const double dg2 = (trm * trx - trmx).real();
        if (ev != nullptr) {
          ev->grad[3 * i + a] =
              2.0 * (std::conj(e1) * dg1).real() + 2.0 * e2 * dg2;
        }
        if (res != nullptr) {
          res->jac(0, 3 * i + a) = dg1.real();
          res->jac(1, 3 * i + a) = dg1.imag();
          res->jac(2, 3 * i + a) = dg2;
        }
      }
    }
  }
};

/// BFGS with Armijo backtracking. Counts the steps needed to first reach
/// `threshold`, then keeps polishing toward the numerical floor (the outer
/// Cartan stage wants far tighter local equivalence than the success
/// threshold) until progress stalls or `max_steps` iterations elapse.
struct BfgsResult {
  Eigen::VectorXd x;
  double loss;
  int steps_to_threshold;
};

constexpr double kPolishFloor = 1e-24;

BfgsResult bfgs_minimize(const LossContext &ctx, Eigen::VectorXd x0,
                         double threshold, int max_steps) {
  const int n = static_cast<int>(x0.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = std::move(x0);
  auto ev = ctx.eval(x);
  int steps = 0;
  int steps_to_threshold = ev.loss <= threshold ? 0 : -1;
  while (steps < max_steps && ev.loss > kPolishFloor) {
    if (ev.grad.norm() < 1e-14) break;
    Eigen::VectorXd dir = -(h * ev.grad);
    double slope = ev.grad.dot(dir);
    if (slope >= 0) {  // curvature went bad; restart on steepest descent
      h.setIdentity();
      dir = -ev.grad;
      slope = ev.grad.dot(dir);
    }
    double t = 1.0;
    LossContext::Eval trial = ctx.eval(x + t * dir);
    int bt = 0;
    while (trial.loss > ev.loss + 1e-4 * t * slope && bt < 40) {
      t *= 0.5;
      trial = ctx.eval(x + t * dir);
      ++bt;
    }
    ++steps;
    if (bt >= 40) break;  // no progress direction
    const Eigen::VectorXd s = t * dir;
    const Eigen::VectorXd yv = trial.grad - ev.grad;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const Eigen::VectorXd hy = h * yv;
      const double yhy = yv.dot(hy);
      h += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
           (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    x += s;
    ev = std::move(trial);
    if (steps_to_threshold < 0 && ev.loss <= threshold) {
      steps_to_threshold = steps;
    }
  }
  if (steps_to_threshold < 0) steps_to_threshold = steps;
  return {std::move(x), ev.loss, steps_to_threshold};
}

/// Levenberg-Marquardt on the three invariant residuals with the analytic
/// Jacobian; quadratic near the optimum where BFGS on the squared loss
/// stalls.
void lm_polish(const LossContext &ctx, Eigen::VectorXd &x, double &loss) {
  double mu = 1e-8;
  LossContext::Residuals rs = ctx.residuals(x);
  double cost = rs.r.squaredNorm();
  for (int it = 0; it < 40 && cost > kPolishFloor; ++it) {
    const Eigen::MatrixXd jt = rs.jac.transpose();
    const Eigen::MatrixXd jtj = jt * rs.jac;
    const Eigen::VectorXd jtr = jt * rs.r;
    bool stepped = false;
    for (int tries = 0; tries < 10; ++tries) {
      const Eigen::VectorXd delta =
          (jtj + mu * Eigen::MatrixXd::Identity(jtj.rows(), jtj.cols()))
              .ldlt()
              .solve(-jtr);
      const Eigen::VectorXd xq = x + delta;
      const LossContext::Residuals rq = ctx.residuals(xq);
      if (rq.r.squaredNorm() < cost) {
        x = xq;
        rs = rq;
        cost = rq.r.squaredNorm();
        mu = std::max(mu * 0.25, 1e-14);
        stepped = true;
        break;
      }
      mu *= 8;
    }
    if (!stepped) break;
  }
  loss = cost;
}

/// Damped Newton on the scalar loss (Hessian from differenced analytic
/// gradients). Boundary-of-feasibility optima have rank-deficient residual
/// Jacobians where Gauss-Newton stalls; Newton still contracts there.
void newton_polish(const LossContext &ctx, Eigen::VectorXd &x, double &loss) {
  const int n = static_cast<int>(x.size());
  const double h = 1e-6;
  for (int it = 0; it < 60 && loss > kPolishFloor; ++it) {
    const auto ev = ctx.eval(x);
    loss = ev.loss;
    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      hess.col(i) = (ctx.eval(xp).grad - ctx.eval(xm).grad) / (2 * h);
    }
    hess = 0.5 * (hess + hess.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    // clamp curvature away from zero to keep the step well-posed
    const double floor_ev =
        std::max(1e-9, 1e-6 * es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd inv(n);
    for (int i = 0; i < n; ++i) {
      inv[i] = 1.0 / std::max(std::abs(es.eigenvalues()[i]), floor_ev);
    }
    const Eigen::VectorXd dir = -(es.eigenvectors() * inv.asDiagonal() *
                                  es.eigenvectors().transpose() * ev.grad);
    double t = 1.0;
    bool stepped = false;
    for (int bt = 0; bt < 20; ++bt) {
      const Eigen::VectorXd xq = x + t * dir;
      const double lq = ctx.eval(xq).loss;
      if (lq < loss) {
        x = xq;
        loss = lq;
        stepped = true;
        break;
      }
      t *= 0.5;
    }
    if (!stepped) break;
  }
}

LossContext make_context(const AnsatzKey &key, const GateSet &gs,
                         const Unitary4 &target) {
  LossContext ctx;
  for (int idx : key.indices) {
    ctx.pulses.push_back(su_normalize(gs.gates.at(idx).unitary));
  }
  const MakhlinInvariants gt = makhlin_invariants(target);
  ctx.g1t = gt.g1;
  ctx.g2t = gt.g2;
  ctx.n_params = static_cast<int>(6 * (key.size() - 1));
  return ctx;
}

LocalAngles angles_from_vector(const Eigen::VectorXd &x) {
  LocalAngles a;
  for (int i = 0; i + 2 < x.size(); i += 3) {
    a.zyz.push_back({x[i], x[i + 1], x[i + 2]});
  }
  return a;
}

}  // namespace

OptimizeOutcome optimize_inner_locals_detail(const AnsatzKey &key,
                                             const GateSet &gs,
                                             const Unitary4 &target,
                                             const OptimizerConfig &config) {
  if (key.empty()) {
    throw ShapeMismatch("cannot optimize an empty ansatz");
  }
  OptimizeOutcome out;
  if (key.size() == 1) {
    // Degenerate ansatz: no inner locals, the loss is fixed.
    out.residual = invariant_loss(gs.gates.at(key.indices[0]).unitary, target);
    out.success = out.residual <= config.threshold;
    return out;
  }
  const LossContext ctx = make_context(key, gs, target);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = Eigen::VectorXd::Zero(ctx.n_params);
  for (int start = 0; start < config.n_starts; ++start) {
    Eigen::VectorXd x0(ctx.n_params);
    if (start == 0) {
      x0.setZero();
    } else {
      auto rng = make_rng(config.seed, "inner-locals",
                          static_cast<std::uint64_t>(start));
      std::uniform_real_distribution<double> ud(-kPi, kPi);
      for (int i = 0; i < ctx.n_params; ++i) x0[i] = ud(rng);
    }
    BfgsResult r = bfgs_minimize(ctx, std::move(x0), config.threshold,
                                 config.max_steps);
    out.total_steps += r.steps_to_threshold;
    if (r.loss < 1e-4) lm_polish(ctx, r.x, r.loss);
    if (r.loss > 1e-16 && r.loss < 1e-4) newton_polish(ctx, r.x, r.loss);
    if (r.loss < best) {
      best = r.loss;
      best_x = std::move(r.x);
      out.steps_in_success = r.steps_to_threshold;
    }
    if (best <= config.threshold) break;  // retry-if-fail policy
  }
  out.angles = angles_from_vector(best_x);
  out.residual = best;
  out.success = best <= config.threshold;
  return out;
}

std::pair<LocalAngles, double> optimize_inner_locals(
    const AnsatzKey &key, const GateSet &gs, const Unitary4 &target,
    const OptimizerConfig &config) {
  OptimizeOutcome out = optimize_inner_locals_detail(key, gs, target, config);
  if (!out.success) {
    std::vector<double> flat;
    for (const auto &t : out.angles.zyz) {
      flat.insert(flat.end(), t.begin(), t.end());
    }
    throw ConvergenceFailure("invariant matching did not reach threshold",
                             out.residual, flat);
  }
  return {out.angles, out.residual};
}

OuterLocals compute_outer_locals(const Unitary4 &target, const Unitary4 &v,
                                 std::uint64_t seed) {
  const MakhlinInvariants gt = makhlin_invariants(target);
  const MakhlinInvariants gv = makhlin_invariants(v);
  if (gt.distance_mod_phase(gv) > 1e-7) {
    throw NotLocallyEquivalent("targets differ in invariant space by " +
                               std::to_string(gt.distance_mod_phase(gv)));
  }
  for (int attempt = 0; attempt < 4; ++attempt) {
    const CartanFactors ft = cartan_decompose(target, seed + attempt);
    const CartanFactors fv =
        cartan_decompose_matching(v, ft.coords, seed + attempt);
    if (ft.coords.max_abs_diff(fv.coords) > 1e-6) continue;
    OuterLocals out;
    out.v[0] = ft.w1 * fv.w1.adjoint();
    out.v[1] = ft.w2 * fv.w2.adjoint();
    out.v[2] = fv.w3.adjoint() * ft.w3;
    out.v[3] = fv.w4.adjoint() * ft.w4;
    out.phase = ft.global_phase - fv.global_phase;
    const Unitary4 rec = std::polar(1.0, out.phase) *
                         kron(out.v[0], out.v[1]) * v *
                         kron(out.v[2], out.v[3]);
    if (max_abs_diff(rec, target) < 1e-8) return out;
  }
  throw FrameMismatch("could not reconcile canonical frames");
}

namespace {

/// Best-effort outer locals: same construction as compute_outer_locals but
/// without the equivalence gate, for use as a refinement initializer.
OuterLocals outer_locals_lenient(const Unitary4 &target, const Unitary4 &v,
                                 std::uint64_t seed) {
  const CartanFactors ft = cartan_decompose(target, seed);
  const CartanFactors fv = cartan_decompose_matching(v, ft.coords, seed);
  if (ft.coords.max_abs_diff(fv.coords) > 0.2) {
    throw FrameMismatch("canonical coordinates too far apart to refine");
  }
  OuterLocals out;
  out.v[0] = ft.w1 * fv.w1.adjoint();
  out.v[1] = ft.w2 * fv.w2.adjoint();
  out.v[2] = fv.w3.adjoint() * ft.w3;
  out.v[3] = fv.w4.adjoint() * ft.w4;
  out.phase = ft.global_phase - fv.global_phase;
  return out;
}

std::array<double, 3> zyz_of(const Unitary2 &u_in) {
  const Unitary2 u = u_in * std::pow(u_in.determinant(), -0.5);
  const double beta = 2 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
  double sum = 0, dif = 0;
  if (std::abs(u(0, 0)) > 1e-12) sum = -2 * std::arg(u(0, 0));
  if (std::abs(u(1, 0)) > 1e-12) dif = 2 * std::arg(u(1, 0));
  return {0.5 * (sum + dif), beta, 0.5 * (sum - dif)};
}

/// Matrix-level Levenberg-Marquardt over every free angle of the synthesis:
/// inner Z-Y-Z triples, the four outer triples, and the global phase. The
/// 32 residuals are the real and imaginary parts of (assembled - target).
struct FullRefineResult {
  LocalAngles inner;
  std::array<Unitary2, 4> outer;
  double phase;
  double matrix_residual;
};

FullRefineResult refine_full_synthesis(const Unitary4 &target,
                                       const AnsatzKey &key, const GateSet &gs,
                                       const LocalAngles &inner0,
                                       const std::array<Unitary2, 4> &outer0,
                                       double phase0) {
  const int n_inner = static_cast<int>(3 * inner0.count());
  const int n = n_inner + 12 + 1;
  Eigen::VectorXd x(n);
  for (std::size_t i = 0; i < inner0.count(); ++i) {
    for (int a = 0; a < 3; ++a) x[3 * i + a] = inner0.zyz[i][a];
  }
  for (int o = 0; o < 4; ++o) {
    const auto t = zyz_of(outer0[o]);
    for (int a = 0; a < 3; ++a) x[n_inner + 3 * o + a] = t[a];
  }
  x[n - 1] = phase0;

  std::vector<Unitary4> pulses;
  for (int idx : key.indices) pulses.push_back(gs.gates.at(idx).unitary);

  const auto assemble = [&](const Eigen::VectorXd &p) {
    Unitary4 v = pulses[0];
    for (std::size_t i = 1; i < pulses.size(); ++i) {
      const int ia = static_cast<int>(6 * (i - 1));
      v = v * kron(zyz(p[ia], p[ia + 1], p[ia + 2]),
                   zyz(p[ia + 3], p[ia + 4], p[ia + 5]));
      v = v * pulses[i];
    }
    const auto ot = [&](int o) {
      return zyz(p[n_inner + 3 * o], p[n_inner + 3 * o + 1],
                 p[n_inner + 3 * o + 2]);
    };
    return Unitary4(std::polar(1.0, p[n - 1]) * kron(ot(0), ot(1)) * v *
                    kron(ot(2), ot(3)));
  };
  const auto residuals = [&](const Eigen::VectorXd &p) {
    const Unitary4 d = assemble(p) - target;
    Eigen::VectorXd r(32);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        r[2 * (4 * i + j)] = d(i, j).real();
        r[2 * (4 * i + j) + 1] = d(i, j).imag();
      }
    }
    return r;
  };

  Eigen::VectorXd r = residuals(x);
  double cost = r.squaredNorm();
  double mu = 1e-6;
  const double h = 1e-7;
  for (int it = 0; it < 60 && cost > 1e-26; ++it) {
    Eigen::MatrixXd jac(32, n);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      jac.col(k) = (residuals(xp) - residuals(xm)) / (2 * h);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool stepped = false;
    for (int tries = 0; tries < 12; ++tries) {
      const Eigen::VectorXd delta =
          (jtj + mu * Eigen::MatrixXd::Identity(n, n)).ldlt().solve(-jtr);
      const Eigen::VectorXd xq = x + delta;
      const Eigen::VectorXd rq = residuals(xq);
      if (rq.squaredNorm() < cost) {
        x = xq;
        r = rq;
        cost = rq.squaredNorm();
        mu = std::max(mu * 0.25, 1e-14);
        stepped = true;
        break;
      }
      mu *= 8;
    }
    if (!stepped) break;
  }

  FullRefineResult out;
  for (std::size_t i = 0; i < inner0.count(); ++i) {
    out.inner.zyz.push_back({x[3 * i], x[3 * i + 1], x[3 * i + 2]});
  }
  for (int o = 0; o < 4; ++o) {
    out.outer[o] = zyz(x[n_inner + 3 * o], x[n_inner + 3 * o + 1],
                       x[n_inner + 3 * o + 2]);
  }
  out.phase = x[n - 1];
  out.matrix_residual = max_abs_diff(assemble(x), target);
  return out;
}

SynthesisResult synthesize_local_block(const Unitary4 &target,
                                       const GateSet &gs,
                                       std::uint64_t seed) {
  const CartanFactors f = cartan_decompose(target, seed);
  SynthesisResult r;
  r.outer = {f.w1, f.w2, f.w3, f.w4};
  r.residual = 0;
  r.reconstruction = target;
  r.global_phase = f.global_phase;
  r.cost = sequence_cost(AnsatzKey{}, gs);
  return r;
}

}  // namespace

SynthesisResult synthesize_with_key_numeric(const Unitary4 &target,
                                            const AnsatzKey &key,
                                            const GateSet &gs,
                                            const OptimizerConfig &config) {
  // Invariant matching may land on either strict sign class of the target;
  // the phase-flipped copy covers the other.
  const std::array<Unitary4, 2> targets = {target,
                                           Unitary4(c64(0, 1) * target)};
  OptimizeOutcome best;
  best.residual = std::numeric_limits<double>::infinity();
  for (const Unitary4 &tgt : targets) {
    const OptimizeOutcome o =
        optimize_inner_locals_detail(key, gs, tgt, config);
    if (o.residual < best.residual) best = o;
    if (best.success) break;
  }
  if (!best.success) {
    std::vector<double> flat;
    for (const auto &t : best.angles.zyz) {
      flat.insert(flat.end(), t.begin(), t.end());
    }
    throw ConvergenceFailure("invariant matching did not reach threshold",
                             best.residual, flat);
  }
  const Unitary4 v = build_ansatz_unitary(key, gs, best.angles);
  const OuterLocals outer = outer_locals_lenient(target, v, config.seed);
  SynthesisResult r;
  r.key = key;
  r.inner = best.angles;
  r.outer = outer.v;
  r.global_phase = outer.phase;
  r.reconstruction = std::polar(1.0, outer.phase) *
                     kron(outer.v[0], outer.v[1]) * v *
                     kron(outer.v[2], outer.v[3]);
  if (max_abs_diff(r.reconstruction, target) > 1e-10) {
    const FullRefineResult ref = refine_full_synthesis(
        target, key, gs, r.inner, r.outer, r.global_phase);
    if (ref.matrix_residual < max_abs_diff(r.reconstruction, target)) {
      r.inner = ref.inner;
      r.outer = ref.outer;
      r.global_phase = ref.phase;
      const Unitary4 v2 = build_ansatz_unitary(key, gs, r.inner);
      r.reconstruction = std::polar(1.0, r.global_phase) *
                         kron(r.outer[0], r.outer[1]) * v2 *
                         kron(r.outer[2], r.outer[3]);
    }
  }
  const MakhlinInvariants gv =
      makhlin_invariants(build_ansatz_unitary(key, gs, r.inner));
  const double d = gv.distance_mod_phase(makhlin_invariants(target));
  r.residual = d * d;
  return r;
}

SynthesisResult synthesize_block(const Unitary4 &target,
                                 const CoverageSet &coverage,
                                 const GateSet &gs,
                                 const OptimizerConfig &config) {
  const CartanFactors ft = cartan_decompose(target, config.seed);
  const CanonicalCoords c = ft.coords;
  for (const CoverageEntry &entry : coverage.entries) {
    const bool inside = polytope_contains(entry.polytope, c);
    const bool band = !inside && entry.polytope.kind == Polytope::Kind::Probed &&
                      polytope_contains_outer(entry.polytope, c);
    if (!inside && !band) continue;
    if (entry.key.empty()) {
      return synthesize_local_block(target, gs, config.seed);
    }
    const bool all_single_axis = [&] {
      for (int idx : entry.key.indices) {
        if (!gs.gates.at(idx).single_axis) return false;
      }
      return true;
    }();
    if (all_single_axis) {
      try {
        SynthesisResult r = synthesize_single_axis_with_key(target, entry.key,
                                                            gs, config.seed);
        r.cost = entry.cost;
        return r;
      } catch (const Infeasible &) {
        // The closed-form motif has a small gap near the polytope boundary;
        // the numeric path below handles those points.
      }
    }
    // numeric invariant matching with matrix-level refinement
    for (int attempt = 0; attempt < 2; ++attempt) {
      OptimizerConfig cfg = config;
      if (attempt == 1) {
        if (!inside) break;
        cfg.n_starts = std::max(config.n_starts, 16);
      }
      try {
        SynthesisResult r = synthesize_with_key_numeric(target, entry.key, gs,
                                                        cfg);
        if (max_abs_diff(r.reconstruction, target) > 1e-8) continue;
        r.cost = entry.cost;
        return r;
      } catch (const Error &) {
        continue;
      }
    }
  }
  throw SynthesisExhausted("no coverage entry synthesized the block");
}

}  // namespace weylcc
