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

#include "weylcc/gates.hpp"
#include "weylcc/rng.hpp"
#include "weylcc/weyl.hpp"

using namespace weylcc;

namespace {

CanonicalCoords random_chamber_point(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> ud(0, 1);
  const double c1 = ud(rng) * kPi;
  const double c2 = ud(rng) * std::min(c1, kPi - c1);
  const double c3 = ud(rng) * c2;
  return {c1, c2, c3};
}

/// Invariant equality modulo the global-phase pairing (g1, g2) ~ (-g1, g2),
/// which is the sense in which chamber representatives are interchangeable.
bool invariants_equal_mod_phase(const CanonicalCoords &a,
                                const CanonicalCoords &b, double tol) {
  return canonical_invariants(a).distance_mod_phase(canonical_invariants(b)) <
         tol;
}

}  // namespace

TEST_CASE("canonical gate special points") {
  CHECK(max_abs_diff(canonical_gate({0, 0, 0}), Unitary4::Identity()) < 1e-15);
  const Unitary4 expect = c64(0, -1) * kron(gates::x(), gates::x());
  CHECK(max_abs_diff(canonical_gate({kPi, 0, 0}), expect) < 1e-12);
  // (pi/2, 0, 0) is the CX class
  const MakhlinInvariants g = makhlin_invariants(canonical_gate({kPi / 2, 0, 0}));
  CHECK(std::abs(g.g1) < 1e-12);
  CHECK(g.g2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("makhlin golden values") {
  const MakhlinInvariants gi = makhlin_invariants(Unitary4::Identity());
  CHECK(std::abs(gi.g1 - c64(1, 0)) < 1e-12);
  CHECK(gi.g2 == doctest::Approx(3.0).epsilon(1e-12));

  const MakhlinInvariants gcx = makhlin_invariants(gates::cx());
  CHECK(std::abs(gcx.g1) < 1e-12);
  CHECK(gcx.g2 == doctest::Approx(1.0).epsilon(1e-12));

  const MakhlinInvariants gsw = makhlin_invariants(gates::swap());
  CHECK(std::abs(gsw.g1 - c64(0, -1)) < 1e-12);
  CHECK(gsw.g2 == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("canonical invariants closed form") {
  MakhlinInvariants g = canonical_invariants({0, 0, 0});
  CHECK(std::abs(g.g1 - c64(1, 0)) < 1e-15);
  CHECK(g.g2 == doctest::Approx(3.0));
  g = canonical_invariants({kPi / 2, kPi / 4, 0});  // B gate point
  CHECK(std::abs(g.g1) < 1e-15);
  CHECK(g.g2 == doctest::Approx(0.0).epsilon(1e-14));

  auto rng = make_rng(10, "caninv");
  for (int i = 0; i < 1000; ++i) {
    const CanonicalCoords c = random_chamber_point(rng);
    const MakhlinInvariants a = canonical_invariants(c);
    const MakhlinInvariants b = makhlin_invariants(canonical_gate(c));
    CHECK(a.distance(b) < 1e-12);
  }
}

TEST_CASE("canonicalize_coords examples") {
  const CanonicalCoords a = canonicalize_coords({0.2, 0.7, 0.1});
  CHECK(a.c1 == doctest::Approx(0.7));
  CHECK(a.c2 == doctest::Approx(0.2));
  CHECK(a.c3 == doctest::Approx(0.1));

  const CanonicalCoords b = canonicalize_coords({3.0, 0.5, 0.0});
  CHECK(b.c1 == doctest::Approx(0.5));
  CHECK(b.c2 == doctest::Approx(kPi - 3.0));
  CHECK(b.c3 == doctest::Approx(0.0));
  CHECK(invariants_equal_mod_phase(b, {3.0, 0.5, 0.0}, 1e-9));

  const CanonicalCoords c = canonicalize_coords({0.7, -0.2, 0.1});
  CHECK(c.in_chamber());
  CHECK(invariants_equal_mod_phase(c, {0.7, -0.2, 0.1}, 1e-9));
}

TEST_CASE("canonicalize_coords random property") {
  auto rng = make_rng(11, "canon");
  std::uniform_real_distribution<double> ud(-2 * kPi, 2 * kPi);
  for (int i = 0; i < 500; ++i) {
    const CanonicalCoords raw{ud(rng), ud(rng), ud(rng)};
    const CanonicalCoords c = canonicalize_coords(raw);
    CHECK(c.in_chamber());
    CHECK(invariants_equal_mod_phase(c, raw, 1e-9));
  }
}

TEST_CASE("cartan decomposition of named gates") {
  const CartanFactors fi = cartan_decompose(Unitary4::Identity());
  CHECK(fi.coords.max_abs_diff({0, 0, 0}) < 1e-9);
  CHECK(max_abs_diff(fi.reconstruct(), Unitary4::Identity()) < 1e-9);

  const CartanFactors fcx = cartan_decompose(gates::cx());
  CHECK(fcx.coords.max_abs_diff({kPi / 2, 0, 0}) < 1e-9);
  CHECK(max_abs_diff(fcx.reconstruct(), gates::cx()) < 1e-9);

  const CartanFactors fsw = cartan_decompose(gates::swap());
  CHECK(fsw.coords.max_abs_diff({kPi / 2, kPi / 2, kPi / 2}) < 1e-9);
  CHECK(max_abs_diff(fsw.reconstruct(), gates::swap()) < 1e-9);

  const CartanFactors fecr = cartan_decompose(gates::ecr());
  CHECK(fecr.coords.max_abs_diff({kPi / 2, 0, 0}) < 1e-9);

  // controlled-phase stays on its strict branch
  const CartanFactors fcp = cartan_decompose(gates::cp(0.8));
  CHECK(fcp.coords.max_abs_diff({0.4, 0, 0}) < 1e-9);
}

TEST_CASE("cartan decomposition reconstruction on random inputs") {
  auto rng = make_rng(12, "kakrand");
  std::uniform_real_distribution<double> ud(0, 2 * kPi);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    Unitary4 u = haar_random_su4(rng);
    if (i % 3 == 0) u *= std::polar(1.0, ud(rng));
    const CartanFactors f = cartan_decompose(u, i);
    CHECK(f.coords.in_chamber());
    CHECK(std::abs(f.w1.determinant() - c64(1, 0)) < 1e-9);
    CHECK(std::abs(f.w2.determinant() - c64(1, 0)) < 1e-9);
    CHECK(std::abs(f.w3.determinant() - c64(1, 0)) < 1e-9);
    CHECK(std::abs(f.w4.determinant() - c64(1, 0)) < 1e-9);
    worst = std::max(worst, max_abs_diff(f.reconstruct(), u));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("cartan handles degenerate spectra") {
  for (const Unitary4 &u :
       {gates::cz(), kron(gates::x(), gates::id2()),
        canonical_gate({kPi / 2, kPi / 4, 0}),
        canonical_gate({kPi / 2, kPi / 2, 0})}) {
    const CartanFactors f = cartan_decompose(u);
    CHECK(max_abs_diff(f.reconstruct(), u) < 1e-9);
  }
}

TEST_CASE("local invariance of makhlin invariants") {
  auto rng = make_rng(13, "localinv");
  for (int i = 0; i < 200; ++i) {
    const Unitary4 u = haar_random_su4(rng);
    const Unitary4 l = kron(haar_random_su2(rng), haar_random_su2(rng));
    const Unitary4 r = kron(haar_random_su2(rng), haar_random_su2(rng));
    const MakhlinInvariants a = makhlin_invariants(u);
    const MakhlinInvariants b = makhlin_invariants(l * u * r);
    CHECK(a.distance(b) < 1e-10);
  }
}

TEST_CASE("locally_equivalent") {
  CHECK(locally_equivalent(gates::cx(), canonical_gate({kPi / 2, 0, 0}), 1e-9));
  CHECK_FALSE(locally_equivalent(Unitary4::Identity(), gates::swap(), 1e-9));
  auto rng = make_rng(14, "localeq");
  for (int i = 0; i < 50; ++i) {
    const Unitary4 u = haar_random_su4(rng);
    const Unitary4 v = kron(haar_random_su2(rng), haar_random_su2(rng)) * u *
                       kron(haar_random_su2(rng), haar_random_su2(rng));
    CHECK(locally_equivalent(u, v, 1e-9));
  }
}

TEST_CASE("chamber round trip") {
  auto rng = make_rng(15, "roundtrip");
  for (int i = 0; i < 200; ++i) {
    const CanonicalCoords c = random_chamber_point(rng);
    const CartanFactors f = cartan_decompose(canonical_gate(c), i);
    const CanonicalCoords lhs = canonicalize_coords(f.coords);
    const CanonicalCoords rhs = canonicalize_coords(c);
    CHECK(lhs.max_abs_diff(rhs) < 1e-9);
  }
}

TEST_CASE("invariant gradients match finite differences") {
  auto rng = make_rng(16, "grad");
  std::normal_distribution<double> nd(0, 1);
  const double h = 1e-7;
  for (int trial = 0; trial < 10; ++trial) {
    const Unitary4 u = haar_random_su4(rng);
    Unitary4 du;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) du(i, j) = c64(nd(rng), nd(rng));
    }
    const InvariantGradient g = invariant_directional_derivative(u, du);
    // central finite differences along the (non-unitary) direction; the
    // invariants are polynomials in the entries, so this is well-defined.
    const auto inv = [](const Unitary4 &m) {
      const Unitary4 q = [] {
        Unitary4 x;
        const c64 i1(0, 1);
        const double r = 1.0 / std::sqrt(2.0);
        x << r, 0, 0, i1 * r, 0, i1 * r, r, 0, 0, i1 * r, -r, 0, r, 0, 0,
            -i1 * r;
        return x;
      }();
      const Unitary4 mb = q.adjoint() * m * q;
      const Unitary4 mm = mb.transpose() * mb;
      const c64 trm = mm.trace();
      const c64 trm2 = (mm * mm).trace();
      return std::make_pair(trm / 4.0, (trm * trm - trm2) / 4.0);
    };
    const auto [g1p, g2p] = inv(u + h * du);
    const auto [g1m, g2m] = inv(u - h * du);
    const c64 fd1 = (g1p - g1m) / (2 * h);
    const c64 fd2 = (g2p - g2m) / (2 * h);
    CHECK(std::abs(fd1 - g.dg1) < 1e-6);
    CHECK(std::abs(fd2.real() - g.dg2) < 1e-6);
  }
}
