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
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rmtl/formula.hpp"
#include "rmtl/policy_spec.hpp"
#include "rmtl/trace.hpp"

namespace rmtl {

class WorldOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct OracleOptions {
  /// Cache results keyed by (world, ground formula). Off by default.
  bool memoize = false;
  /// Abort with std::logic_error if the evaluation stack gets deeper than
  /// this many frames. 0 disables the check.
  std::size_t max_depth = 0;
  /// Called on every (world, formula) judgement that is evaluated.
  std::function<void(std::size_t, const Formula&)> on_visit;
};

/// Brute-force satisfaction relation over a fully stored trace.
///
/// Every clause is a direct transcription of the past-time semantics with
/// 1-indexed worlds. Defined predicates are unfolded by substituting into
/// their bodies; quantifiers range over the finite sort domains; static facts
/// hold in every world. Nothing here shares code with the compiler or the
/// incremental monitor.
class Oracle {
 public:
  Oracle(const PolicySpec& spec, std::span<const TimedState> trace,
         OracleOptions options = {});

  /// (trace, i) |= f for a closed formula, 1 <= i <= trace size.
  bool sat(std::size_t i, const Formula& f);

  /// sat at every world, in order.
  std::vector<bool> sat_all(const Formula& f);

  /// Least m >= 1 such that the formula with its bound replaced by m holds
  /// at i, or 0 if the formula itself does not hold. Found by linear scan.
  /// `f` must be a metric since or metric earlier formula.
  Timestamp minimal_window(std::size_t i, const Formula& f);

  std::size_t max_depth_seen() const { return max_depth_seen_; }
  std::size_t size() const { return trace_.size(); }

 private:
  bool eval(std::size_t i, const Formula& f);
  bool holds_atom(std::size_t i, const Formula& f) const;
  Timestamp ts(std::size_t i) const { return trace_[i - 1].ts; }

  struct Key {
    std::size_t world;
    Formula formula;
    friend bool operator==(const Key& a, const Key& b) {
      return a.world == b.world && a.formula == b.formula;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return k.formula.hash() * 31 + k.world;
    }
  };

  const PolicySpec& spec_;
  std::span<const TimedState> trace_;
  OracleOptions options_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::size_t depth_ = 0;
  std::size_t max_depth_seen_ = 0;
};

/// One-shot forms.
bool sat(const PolicySpec& spec, std::span<const TimedState> trace, std::size_t i,
         const Formula& f);
std::vector<bool> sat_all(const PolicySpec& spec, std::span<const TimedState> trace,
                          const Formula& f);
Timestamp minimal_window(const PolicySpec& spec, std::span<const TimedState> trace,
                         std::size_t i, const Formula& f);

/// Copy of a metric formula with its bound replaced.
Formula with_bound(const Formula& f, Timestamp bound);

}  // namespace rmtl
