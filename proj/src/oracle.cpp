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

#include "rmtl/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmtl {

TimedState::TimedState(Timestamp ts, std::vector<GroundAtom> atoms)
    : ts(ts), atoms(std::move(atoms)) {
  canonicalize(this->atoms);
}

bool TimedState::contains(const GroundAtom& atom) const {
  return std::binary_search(atoms.begin(), atoms.end(), atom);
}

void canonicalize(std::vector<GroundAtom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

Formula with_bound(const Formula& f, Timestamp bound) {
  if (!is_metric(f.op())) throw std::invalid_argument("formula has no metric bound");
  if (is_unary(f.op())) return Formula::unary(f.op(), bound, f.child());
  return Formula::binary(f.op(), bound, f.left(), f.right());
}

Oracle::Oracle(const PolicySpec& spec, std::span<const TimedState> trace,
               OracleOptions options)
    : spec_(spec), trace_(trace), options_(std::move(options)) {}

bool Oracle::sat(std::size_t i, const Formula& f) {
  if (i < 1 || i > trace_.size()) {
    throw WorldOutOfRange("world " + std::to_string(i) + " outside 1.." +
                          std::to_string(trace_.size()));
  }
  return eval(i, f);
}

std::vector<bool> Oracle::sat_all(const Formula& f) {
  std::vector<bool> out;
  out.reserve(trace_.size());
  for (std::size_t i = 1; i <= trace_.size(); ++i) out.push_back(eval(i, f));
  return out;
}

Timestamp Oracle::minimal_window(std::size_t i, const Formula& f) {
  if (f.op() != Op::kSinceM && f.op() != Op::kEarlierM) {
    throw std::invalid_argument("minimal window needs since[n] or earlier[n]");
  }
  if (!sat(i, f)) return 0;
  for (Timestamp m = 1; m <= f.bound(); ++m) {
    if (sat(i, with_bound(f, m))) return m;
  }
  throw std::logic_error("formula holds at bound n but at no m <= n");
}

bool Oracle::holds_atom(std::size_t i, const Formula& f) const {
  GroundAtom atom = to_ground_atom(f);
  return trace_[i - 1].contains(atom) || spec_.static_facts.count(atom) > 0;
}

bool Oracle::eval(std::size_t i, const Formula& f) {
  if (options_.on_visit) options_.on_visit(i, f);
  if (options_.memoize) {
    auto it = memo_.find(Key{i, f});
    if (it != memo_.end()) return it->second;
  }
  ++depth_;
  max_depth_seen_ = std::max(max_depth_seen_, depth_);
  if (options_.max_depth != 0 && depth_ > options_.max_depth) {
    throw std::logic_error("oracle recursion exceeded depth bound " +
                           std::to_string(options_.max_depth));
  }

  // All loops over earlier worlds walk backwards from i. For since, the
  // walk stops at the first world where the left operand fails: every
  // witness further back would need it to hold there. Metric loops stop
  // once the timestamp distance reaches the bound, since timestamps never
  // decrease.
  bool result = false;
  const Timestamp now = ts(i);
  switch (f.op()) {
    case Op::kBot:
      result = false;
      break;
    case Op::kAtom:
      result = holds_atom(i, f);
      break;
    case Op::kDefAtom: {
      const RecursiveDef* def = spec_.find_def(f.name());
      if (def == nullptr) throw std::logic_error("no definition for " + f.name());
      Binding binding;
      for (std::size_t k = 0; k < def->params.size(); ++k) {
        binding.emplace(def->params[k].name, f.args().at(k));
      }
      result = eval(i, substitute(def->body, binding));
      break;
    }
    case Op::kNeg:
      result = !eval(i, f.child());
      break;
    case Op::kOr:
      result = eval(i, f.left()) || eval(i, f.right());
      break;
    case Op::kPrev:
      result = i > 1 && eval(i - 1, f.child());
      break;
    case Op::kPrevM:
      result = i > 1 && eval(i - 1, f.child()) && now - ts(i - 1) < f.bound();
      break;
    case Op::kOnce:
    case Op::kOnceM:
      for (std::size_t j = i; j >= 1; --j) {
        if (f.op() == Op::kOnceM && now - ts(j) >= f.bound()) break;
        if (eval(j, f.child())) {
          result = true;
          break;
        }
      }
      break;
    case Op::kEarlier:
    case Op::kEarlierM:
      for (std::size_t j = i - 1; j >= 1; --j) {
        if (f.op() == Op::kEarlierM && now - ts(j) >= f.bound()) break;
        if (eval(j, f.child())) {
          result = true;
          break;
        }
      }
      break;
    case Op::kSince:
    case Op::kSinceM:
      for (std::size_t j = i; j >= 1; --j) {
        if (f.op() == Op::kSinceM && now - ts(j) >= f.bound()) break;
        if (eval(j, f.right())) {
          result = true;
          break;
        }
        if (!eval(j, f.left())) break;
      }
      break;
    case Op::kExists:
      for (const auto& c : spec_.domain(f.sort())) {
        Binding binding{{f.name(), Term::constant(c, f.sort())}};
        if (eval(i, substitute(f.child(), binding))) {
          result = true;
          break;
        }
      }
      break;
  }

  --depth_;
  if (options_.memoize) memo_.emplace(Key{i, f}, result);
  return result;
}

bool sat(const PolicySpec& spec, std::span<const TimedState> trace, std::size_t i,
         const Formula& f) {
  return Oracle(spec, trace).sat(i, f);
}

std::vector<bool> sat_all(const PolicySpec& spec, std::span<const TimedState> trace,
                          const Formula& f) {
  return Oracle(spec, trace).sat_all(f);
}

Timestamp minimal_window(const PolicySpec& spec, std::span<const TimedState> trace,
                         std::size_t i, const Formula& f) {
  return Oracle(spec, trace).minimal_window(i, f);
}

}  // namespace rmtl
