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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rmtl/compiler.hpp"
#include "rmtl/trace.hpp"

namespace rmtl {

/// Deliberately wrong comparison variants of the metric step rules, for
/// mutation testing of the differential harness. Never use kNone's siblings
/// outside tests.
enum class StepMutation : std::uint8_t {
  kNone,
  kEarlierMWindowLe,  // earlier[n]: delta < n  becomes  delta <= n
  kEarlierMSlackGt,   // earlier[n]: n - delta >= m  becomes  >
  kSinceMSlackGt,     // since[n]:   n - delta >= m  becomes  >
  kPrevMWindowLe,     // prev[n]:    delta < n  becomes  delta <= n
};

/// Truth values and minimal windows for the current and previous world.
/// Sizes are fixed by the table; nothing grows with the number of events.
struct MonitorState {
  std::vector<std::uint8_t> prev;
  std::vector<std::uint8_t> cur;
  std::vector<Timestamp> mprev;
  std::vector<Timestamp> mcur;
  Timestamp last_ts = 0;
  std::size_t world_count = 0;

  /// Cells held: both truth arrays, both window arrays, two scalars.
  std::size_t cells() const {
    return prev.size() + cur.size() + mprev.size() + mcur.size() + 2;
  }

  friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

/// Per-policy outcome at one world; `violated[k]` refers to `cp.roots[k]`.
struct Verdict {
  std::size_t world = 0;
  Timestamp ts = 0;
  std::vector<bool> violated;

  bool any() const;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

class NonMonotoneTimestamp : public std::runtime_error {
 public:
  NonMonotoneTimestamp(Timestamp previous, Timestamp got);
};

/// Evaluates the first world.
std::pair<MonitorState, Verdict> init(const CompiledPolicy& cp, const TimedState& first,
                                      StepMutation mutation = StepMutation::kNone);

/// Advances `ms` by one world. Throws NonMonotoneTimestamp (leaving `ms`
/// untouched) if the timestamp goes backwards.
Verdict step(const CompiledPolicy& cp, MonitorState& ms, const TimedState& next,
             StepMutation mutation = StepMutation::kNone);

/// init on the first world and step on the rest; one verdict per world.
std::vector<Verdict> run(const CompiledPolicy& cp, std::span<const TimedState> trace,
                         StepMutation mutation = StepMutation::kNone);

/// 4 * |table| + 2.
std::size_t state_size(const CompiledPolicy& cp);

/// Event-at-a-time driver around init/step.
class Monitor {
 public:
  explicit Monitor(const CompiledPolicy& cp, StepMutation mutation = StepMutation::kNone)
      : cp_(&cp), mutation_(mutation) {}

  Verdict process(const TimedState& event);

  const MonitorState& state() const { return state_; }
  void restore(MonitorState snapshot) { state_ = std::move(snapshot); }
  bool started() const { return state_.world_count > 0; }

 private:
  const CompiledPolicy* cp_;
  StepMutation mutation_;
  MonitorState state_;
};

}  // namespace rmtl
