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

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace weylcc {

using c64 = std::complex<double>;
using Unitary2 = Eigen::Matrix2cd;
using Unitary4 = Eigen::Matrix4cd;
using Hermitian4 = Eigen::Matrix4cd;

constexpr double kPi = 3.14159265358979323846;

/// Tensor product with `a` acting on the first (control-side) qubit.
Unitary4 kron(const Unitary2 &a, const Unitary2 &b);

/// Maximum elementwise absolute difference; the comparison metric used
/// throughout unless a named metric applies.
double max_abs_diff(const Unitary4 &a, const Unitary4 &b);
double max_abs_diff2(const Unitary2 &a, const Unitary2 &b);

bool is_unitary(const Unitary2 &u, double tol = 1e-12);
bool is_unitary(const Unitary4 &u, double tol = 1e-12);
bool is_hermitian(const Hermitian4 &h, double tol = 1e-12);

/// Rescales u by the principal fourth root of 1/det(u) so the result has
/// determinant one. Near-real determinants are snapped to the real axis
/// first, keeping the branch stable for gates like SWAP (det = -1).
Unitary4 su_normalize(const Unitary4 &u);

/// As su_normalize, additionally reporting phase with u = e^{i phase} * result.
std::pair<Unitary4, double> su_normalize_with_phase(const Unitary4 &u);

/// exp(-i h) for Hermitian h, via eigendecomposition.
Unitary4 herm_exp(const Hermitian4 &h);

/// 1 - |tr(u^dag v)|^2 / 16; invariant under global phase of either argument.
double process_infidelity(const Unitary4 &u, const Unitary4 &v);

/// Same metric for d x d unitaries (used by the circuit-level oracle).
double process_infidelity_dyn(const Eigen::MatrixXcd &u,
                              const Eigen::MatrixXcd &v);

Unitary2 haar_random_su2(std::mt19937_64 &rng);
Unitary4 haar_random_su4(std::mt19937_64 &rng);

}  // namespace weylcc
