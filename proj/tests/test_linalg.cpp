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
#include "weylcc/linalg.hpp"
#include "weylcc/rng.hpp"

using namespace weylcc;

namespace {

Hermitian4 random_hermitian(std::mt19937_64 &rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = c64(nd(rng), nd(rng));
  }
  return (a + a.adjoint()) / 2;
}

}  // namespace

TEST_CASE("kron identity and embeddings") {
  CHECK(max_abs_diff(kron(gates::id2(), gates::id2()), Unitary4::Identity()) ==
        doctest::Approx(0.0));
  // X on the first qubit swaps the |0q> and |1q> blocks
  Unitary4 expect = Unitary4::Zero();
  expect(0, 2) = expect(1, 3) = expect(2, 0) = expect(3, 1) = 1;
  CHECK(max_abs_diff(kron(gates::x(), gates::id2()), expect) < 1e-15);
}

TEST_CASE("su_normalize fixes the determinant") {
  CHECK(max_abs_diff(su_normalize(Unitary4::Identity()), Unitary4::Identity()) <
        1e-15);
  const Unitary4 sw = su_normalize(gates::swap());
  CHECK(std::abs(sw.determinant() - c64(1, 0)) < 1e-12);
  CHECK(std::abs(std::abs((sw * gates::swap().adjoint()).trace()) / 4.0 - 1.0) <
        1e-12);

  auto rng = make_rng(1, "su-normalize");
  std::uniform_real_distribution<double> ud(0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    Unitary4 u = haar_random_su4(rng) * std::polar(1.0, ud(rng));
    CHECK(std::abs(su_normalize(u).determinant() - c64(1, 0)) < 1e-10);
  }
}

TEST_CASE("su_normalize idempotent up to a fourth root of unity") {
  auto rng = make_rng(2, "su-idem");
  for (int i = 0; i < 20; ++i) {
    const Unitary4 v = su_normalize(haar_random_su4(rng) *
                                    std::polar(1.0, 0.1 + i));
    CHECK(max_abs_diff(su_normalize(v), v) < 1e-12);
  }
}

TEST_CASE("herm_exp basic values") {
  CHECK(max_abs_diff(herm_exp(Hermitian4::Zero()), Unitary4::Identity()) <
        1e-15);

  const Hermitian4 h = (kPi / 4) * kron(gates::z(), gates::x());
  const Unitary4 u = herm_exp(h);
  Unitary4 expect = Unitary4::Zero();
  expect.block<2, 2>(0, 0) = gates::rx(kPi / 2);            // exp(-i pi/4 X)
  expect.block<2, 2>(2, 2) = gates::rx(-kPi / 2);           // exp(+i pi/4 X)
  CHECK(max_abs_diff(u, expect) < 1e-12);

  const double theta = 0.7;
  const Unitary4 d = herm_exp(theta * kron(gates::z(), gates::id2()));
  Unitary4 expd = Unitary4::Zero();
  expd(0, 0) = expd(1, 1) = std::polar(1.0, -theta);
  expd(2, 2) = expd(3, 3) = std::polar(1.0, theta);
  CHECK(max_abs_diff(d, expd) < 1e-12);
}

TEST_CASE("herm_exp inverse property") {
  auto rng = make_rng(3, "herm-inv");
  for (int i = 0; i < 50; ++i) {
    const Hermitian4 h = random_hermitian(rng);
    CHECK(max_abs_diff(herm_exp(h) * herm_exp(Hermitian4(-h)),
                       Unitary4::Identity()) < 1e-10);
    CHECK(is_unitary(herm_exp(h), 1e-12));
  }
}

TEST_CASE("process_infidelity") {
  auto rng = make_rng(4, "infid");
  const Unitary4 u = haar_random_su4(rng);
  CHECK(process_infidelity(u, u) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(process_infidelity(u, Unitary4(std::polar(1.0, 1.3) * u)) <
        1e-14);
  CHECK(process_infidelity(Unitary4::Identity(),
                           kron(gates::x(), gates::x())) ==
        doctest::Approx(1.0));
  const Unitary4 v = haar_random_su4(rng);
  CHECK(process_infidelity(u, v) == doctest::Approx(process_infidelity(v, u)));
}
