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

#include "rmtl/monitor.hpp"

#include <algorithm>
#include <string>

namespace rmtl {

bool Verdict::any() const {
  return std::find(violated.begin(), violated.end(), true) != violated.end();
}

NonMonotoneTimestamp::NonMonotoneTimestamp(Timestamp previous, Timestamp got)
    : std::runtime_error("timestamp " + std::to_string(got) + " precedes " +
                         std::to_string(previous)) {}

namespace {

// Loads atom truth for the new world into cur: static atoms from the facts,
// event atoms from the state. Atoms the table does not mention are ignored.
void load_atoms(const CompiledPolicy& cp, MonitorState& ms, const TimedState& state) {
  for (NodeIndex k : cp.atom_nodes) {
    const TableNode& node = cp.table[k];
    ms.cur[k] = node.is_static && node.static_value;
  }
  for (const auto& atom : state.atoms) {
    auto it = cp.event_atoms.find(atom);
    if (it != cp.event_atoms.end()) ms.cur[it->second] = 1;
  }
}

Verdict collect(const CompiledPolicy& cp, const MonitorState& ms) {
  Verdict v;
  v.world = ms.world_count;
  v.ts = ms.last_ts;
  v.violated.reserve(cp.roots.size());
  for (const auto& r : cp.roots) v.violated.push_back(ms.cur[r.index] != 0);
  return v;
}

}  // namespace

std::pair<MonitorState, Verdict> init(const CompiledPolicy& cp, const TimedState& first,
                                      StepMutation /*mutation*/) {
  const std::size_t m = cp.table.size();
  MonitorState ms;
  ms.prev.assign(m, 0);
  ms.cur.assign(m, 0);
  ms.mprev.assign(m, 0);
  ms.mcur.assign(m, 0);
  load_atoms(cp, ms, first);

  auto& cur = ms.cur;
  for (NodeIndex k = 0; k < m; ++k) {
    const TableNode& node = cp.table[k];
    const auto [a, b] = node.operands;
    switch (node.op) {
      case Op::kAtom:
        break;
      case Op::kDefAtom:
        cur[k] = cur[a];
        break;
      case Op::kNeg:
        cur[k] = !cur[a];
        break;
      case Op::kOr:
        cur[k] = cur[a] || cur[b];
        break;
      case Op::kSince:
        cur[k] = cur[b];
        break;
      case Op::kSinceM:
        cur[k] = cur[b];
        ms.mcur[k] = cur[k] ? 1 : 0;
        break;
      default:
        // Bot, prev, prev[n], earlier, earlier[n].
        cur[k] = 0;
        break;
    }
  }
  ms.last_ts = first.ts;
  ms.world_count = 1;
  Verdict v = collect(cp, ms);
  return {std::move(ms), std::move(v)};
}

Verdict step(const CompiledPolicy& cp, MonitorState& ms, const TimedState& next,
             StepMutation mutation) {
  if (next.ts < ms.last_ts) throw NonMonotoneTimestamp(ms.last_ts, next.ts);
  const Timestamp delta = next.ts - ms.last_ts;

  // Every cur cell is rewritten below, so swapping stands in for prev := cur.
  std::swap(ms.prev, ms.cur);
  std::swap(ms.mprev, ms.mcur);
  load_atoms(cp, ms, next);

  auto& cur = ms.cur;
  const auto& prev = ms.prev;
  auto& mcur = ms.mcur;
  const auto& mprev = ms.mprev;
  const std::size_t m = cp.table.size();
  for (NodeIndex k = 0; k < m; ++k) {
    const TableNode& node = cp.table[k];
    const auto [a, b] = node.operands;
    const Timestamp n = node.bound;
    mcur[k] = 0;
    switch (node.op) {
      case Op::kBot:
        cur[k] = 0;
        break;
      case Op::kAtom:
        break;
      case Op::kDefAtom:
        cur[k] = cur[a];
        break;
      case Op::kNeg:
        cur[k] = !cur[a];
        break;
      case Op::kOr:
        cur[k] = cur[a] || cur[b];
        break;
      case Op::kPrev:
        cur[k] = prev[a];
        break;
      case Op::kEarlier:
        cur[k] = prev[a] || prev[k];
        break;
      case Op::kSince:
        cur[k] = cur[b] || (cur[a] && prev[k]);
        break;
      case Op::kPrevM: {
        const bool within =
            mutation == StepMutation::kPrevMWindowLe ? delta <= n : delta < n;
        cur[k] = prev[a] && within;
        break;
      }
      case Op::kEarlierM: {
        const bool within =
            mutation == StepMutation::kEarlierMWindowLe ? delta <= n : delta < n;
        const bool slack = mutation == StepMutation::kEarlierMSlackGt
                               ? n - delta > mprev[k]
                               : n - delta >= mprev[k];
        const bool l = prev[a] && within;
        const bool r = prev[k] && slack;
        cur[k] = l || r;
        mcur[k] = l ? delta + 1 : r ? mprev[k] + delta : 0;
        break;
      }
      case Op::kSinceM: {
        const bool slack = mutation == StepMutation::kSinceMSlackGt
                               ? n - delta > mprev[k]
                               : n - delta >= mprev[k];
        const bool l = cur[b];
        const bool r = cur[a] && prev[k] && slack;
        cur[k] = l || r;
        mcur[k] = l ? 1 : r ? mprev[k] + delta : 0;
        break;
      }
      case Op::kOnce:
      case Op::kOnceM:
      case Op::kExists:
        throw std::logic_error("unnormalized node in table");
    }
  }
  ms.last_ts = next.ts;
  ++ms.world_count;
  return collect(cp, ms);
}

std::vector<Verdict> run(const CompiledPolicy& cp, std::span<const TimedState> trace,
                         StepMutation mutation) {
  std::vector<Verdict> out;
  if (trace.empty()) return out;
  out.reserve(trace.size());
  auto [ms, first] = init(cp, trace.front(), mutation);
  out.push_back(std::move(first));
  for (std::size_t i = 1; i < trace.size(); ++i) {
    out.push_back(step(cp, ms, trace[i], mutation));
  }
  return out;
}

std::size_t state_size(const CompiledPolicy& cp) { return 4 * cp.table.size() + 2; }

Verdict Monitor::process(const TimedState& event) {
  if (!started()) {
    auto [ms, v] = init(*cp_, event, mutation_);
    state_ = std::move(ms);
    return v;
  }
  return step(*cp_, state_, event, mutation_);
}

}  // namespace rmtl
