// Copyright 2026 The RMTL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "rmtl/formula.hpp"

namespace rmtl {

/// One world of a trace: the event atoms observed together at `ts`.
/// `atoms` is kept sorted and duplicate-free.
struct TimedState {
  Timestamp ts = 0;
  std::vector<GroundAtom> atoms;

  TimedState() = default;
  TimedState(Timestamp ts, std::vector<GroundAtom> atoms);

  bool contains(const GroundAtom& atom) const;

  friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// A finite model: worlds 1..size() with non-decreasing timestamps.
using Trace = std::vector<TimedState>;

/// Sorts and deduplicates in place.
void canonicalize(std::vector<GroundAtom>& atoms);

}  // namespace rmtl
