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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace weylcc {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Compact property suite over the whole pipeline (invariants, closed-form
/// synthesis, coverage, characterization, compilation). `quick` trims the
/// sample counts. Emits one line per check through `report`.
std::vector<SelfTestResult> run_selftests(
    bool quick, std::uint64_t seed,
    const std::function<void(const SelfTestResult &)> &report = {});

}  // namespace weylcc
