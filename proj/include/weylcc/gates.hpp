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

#include "weylcc/linalg.hpp"

namespace weylcc::gates {

inline Unitary2 id2() { return Unitary2::Identity(); }

inline Unitary2 x() {
  Unitary2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Unitary2 y() {
  Unitary2 m;
  m << 0, c64(0, -1), c64(0, 1), 0;
  return m;
}

inline Unitary2 z() {
  Unitary2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Unitary2 h() {
  Unitary2 m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

inline Unitary2 s() {
  Unitary2 m;
  m << 1, 0, 0, c64(0, 1);
  return m;
}

inline Unitary2 sx() {
  Unitary2 m;
  m << c64(0.5, 0.5), c64(0.5, -0.5), c64(0.5, -0.5), c64(0.5, 0.5);
  return m;
}

inline Unitary2 rx(double t) {
  const double c = std::cos(t / 2), s_ = std::sin(t / 2);
  Unitary2 m;
  m << c, c64(0, -s_), c64(0, -s_), c;
  return m;
}

inline Unitary2 ry(double t) {
  const double c = std::cos(t / 2), s_ = std::sin(t / 2);
  Unitary2 m;
  m << c, -s_, s_, c;
  return m;
}

inline Unitary2 rz(double t) {
  Unitary2 m = Unitary2::Zero();
  m(0, 0) = std::polar(1.0, -t / 2);
  m(1, 1) = std::polar(1.0, t / 2);
  return m;
}

inline Unitary4 cx() {
  Unitary4 m = Unitary4::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

inline Unitary4 cz() {
  Unitary4 m = Unitary4::Identity();
  m(3, 3) = -1;
  return m;
}

inline Unitary4 swap() {
  Unitary4 m = Unitary4::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

inline Unitary4 cp(double t) {
  Unitary4 m = Unitary4::Identity();
  m(3, 3) = std::polar(1.0, t);
  return m;
}

/// exp(-i t/2 Z x Z)
inline Unitary4 rzz(double t) {
  Unitary4 m = Unitary4::Zero();
  m(0, 0) = m(3, 3) = std::polar(1.0, -t / 2);
  m(1, 1) = m(2, 2) = std::polar(1.0, t / 2);
  return m;
}

/// Echoed cross-resonance gate, locally equivalent to CX.
inline Unitary4 ecr() {
  Unitary4 m = Unitary4::Zero();
  const c64 i(0, 1);
  m(0, 1) = 1;
  m(0, 3) = i;
  m(1, 0) = 1;
  m(1, 2) = -i;
  m(2, 1) = i;
  m(2, 3) = 1;
  m(3, 0) = -i;
  m(3, 2) = 1;
  return m / std::sqrt(2.0);
}

}  // namespace weylcc::gates
