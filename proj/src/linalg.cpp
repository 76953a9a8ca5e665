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

#include "weylcc/linalg.hpp"

#include <cmath>

namespace weylcc {

Unitary4 kron(const Unitary2 &a, const Unitary2 &b) {
  Unitary4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs_diff(const Unitary4 &a, const Unitary4 &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff2(const Unitary2 &a, const Unitary2 &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_unitary(const Unitary2 &u, double tol) {
  return (u.adjoint() * u - Unitary2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Unitary4 &u, double tol) {
  return (u.adjoint() * u - Unitary4::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Hermitian4 &h, double tol) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::pair<Unitary4, double> su_normalize_with_phase(const Unitary4 &u) {
  c64 d = u.determinant();
  if (std::abs(d.imag()) < 1e-13 * std::abs(d)) {
    d = c64(d.real(), 0.0);
  }
  const double mag = std::pow(std::abs(d), 0.25);
  const double ang = std::arg(d) / 4.0;
  const c64 c = std::polar(1.0 / mag, -ang);
  return {c * u, ang};  // u = e^{i ang} * (c * u) up to |d| scaling
}

Unitary4 su_normalize(const Unitary4 &u) {
  return su_normalize_with_phase(u).first;
}

Unitary4 herm_exp(const Hermitian4 &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) {
    phases(i) = std::polar(1.0, -es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double process_infidelity(const Unitary4 &u, const Unitary4 &v) {
  const c64 t = (u.adjoint() * v).trace();
  return 1.0 - std::norm(t) / 16.0;
}

double process_infidelity_dyn(const Eigen::MatrixXcd &u,
                              const Eigen::MatrixXcd &v) {
  const c64 t = (u.adjoint() * v).trace();
  const double d = static_cast<double>(u.rows());
  return 1.0 - std::norm(t) / (d * d);
}

namespace {

template <typename Mat>
Mat haar_unitary(std::mt19937_64 &rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat g;
  for (int i = 0; i < Mat::RowsAtCompileTime; ++i) {
    for (int j = 0; j < Mat::ColsAtCompileTime; ++j) {
      g(i, j) = c64(nd(rng), nd(rng));
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < Mat::RowsAtCompileTime; ++i) {
    q.col(i) *= std::polar(1.0, -std::arg(r(i, i)));
  }
  return q;
}

}  // namespace

Unitary2 haar_random_su2(std::mt19937_64 &rng) {
  Unitary2 q = haar_unitary<Unitary2>(rng);
  const c64 d = q.determinant();
  return q * std::polar(1.0, -std::arg(d) / 2.0);
}

Unitary4 haar_random_su4(std::mt19937_64 &rng) {
  Unitary4 q = haar_unitary<Unitary4>(rng);
  const c64 d = q.determinant();
  return q * std::polar(1.0, -std::arg(d) / 4.0);
}

}  // namespace weylcc
