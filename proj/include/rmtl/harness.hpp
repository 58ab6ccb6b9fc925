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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmtl/compiler.hpp"
#include "rmtl/monitor.hpp"
#include "rmtl/policy_spec.hpp"
#include "rmtl/trace.hpp"

namespace rmtl {

/// Knobs for random specs and traces. The seed fully determines the output.
struct GenConfig {
  std::uint64_t seed = 1;
  int max_formula_depth = 3;
  Timestamp max_bound = 6;
  /// One entry per sort; each must be positive.
  std::vector<int> domain_sizes = {2};
  std::size_t trace_length = 10;
  Timestamp max_ts_gap = 3;
  /// Probability that a given ground event atom occurs in a world.
  double event_density = 0.3;
  int event_predicates = 2;
  int max_arity = 2;
  int max_defs = 2;
  int max_policies = 2;
};

/// Base configuration for `rmtl fuzz` and the conformance suite: up to two
/// sorts of at most 3 constants, traces up to 50 worlds, depth up to 5.
GenConfig fuzz_config(std::uint64_t seed);

/// Random well-sorted spec that always passes validate(). Defined-predicate
/// occurrences inside definition bodies are wrapped in a random guard.
PolicySpec gen_policy(const GenConfig& cfg);

/// Every ground instance of every event predicate, in declaration order.
std::vector<GroundAtom> ground_event_atoms(const PolicySpec& spec);

/// Random trace over the spec's event predicates; gaps uniform in
/// [0, max_ts_gap].
Trace gen_trace(const GenConfig& cfg, const PolicySpec& spec);

/// Per-trial config used by differential(): sizes drawn uniformly up to the
/// base config's limits, seed derived from (base seed, trial).
GenConfig trial_config(const GenConfig& base, std::size_t trial);

/// Removes one guard from a defined-predicate occurrence in some definition
/// body whose only guarding ancestor is that guard. Returns nullopt when the
/// spec has no such occurrence. `pick` selects among candidates.
std::optional<PolicySpec> strip_one_guard(const PolicySpec& spec, std::uint64_t pick);

struct Mismatch {
  std::size_t world = 0;
  std::string what;
};

struct CheckCounts {
  std::size_t worlds = 0;
  std::size_t node_checks = 0;
  std::size_t window_checks = 0;
  std::size_t recursive_form_checks = 0;
};

/// Compares the monitor with the oracle on one (spec, trace) pair: every
/// table node's truth value, every metric node's minimal window, the
/// recursive-form identities for metric nodes, and each policy verdict
/// against the oracle on the formula as written. Returns the first mismatch.
std::optional<Mismatch> check_pair(const PolicySpec& spec, std::span<const TimedState> trace,
                                   StepMutation mutation = StepMutation::kNone,
                                   CheckCounts* counts = nullptr);

struct Counterexample {
  std::size_t trial = 0;
  PolicySpec spec;
  Trace trace;
  Mismatch mismatch;
  /// Expected-vs-got listing.
  std::string report;
};

/// Shrinks a failing pair: drops trailing worlds, then single worlds, then
/// atoms, then extra policies and unused definitions, then replaces
/// subformulas with false or with one of their operands. Every accepted
/// step still fails check_pair().
Counterexample shrink(Counterexample cex, StepMutation mutation);

/// Writes repro.rmtl, repro.jsonl and report.txt into `dir`.
void write_counterexample(const Counterexample& cex, const std::filesystem::path& dir);

struct DiffOptions {
  StepMutation mutation = StepMutation::kNone;
  bool shrink = true;
};

struct DiffReport {
  std::size_t trials = 0;
  CheckCounts counts;
  std::optional<Counterexample> counterexample;

  std::string summary() const;
};

/// Runs `trials` random (spec, trace) pairs through check_pair() and stops at
/// the first counterexample.
DiffReport differential(const GenConfig& base, std::size_t trials, const DiffOptions& options = {});

/// Fixed battery over the single event atom p(c): every trace of length
/// 1..max_length with gaps drawn from `gaps` against every battery policy.
struct ExhaustiveReport {
  std::size_t policies = 0;
  std::size_t traces = 0;
  std::size_t pairs = 0;
  std::optional<Counterexample> counterexample;
};

/// Policy text of the exhaustive battery (declares sort s, const c, event p(s)).
const std::vector<std::string>& exhaustive_battery();

ExhaustiveReport exhaustive(std::size_t max_length, std::span<const Timestamp> gaps,
                            StepMutation mutation = StepMutation::kNone);

struct BenchOptions {
  std::uint64_t seed = 7;
  std::size_t warmup = 1000;
  std::size_t batch = 16;
  Timestamp max_ts_gap = 2000;
};

struct BenchReport {
  std::string policy_name;
  std::size_t trace_length = 0;
  double median_ns = 0;
  double p95_ns = 0;
  std::size_t peak_state_cells = 0;
};

/// Streams `length` synthetic single-event worlds per entry of `lengths`
/// through a fresh monitor, timing batches after warmup. peak_state_cells
/// is the largest cell count observed and must equal state_size(cp).
std::vector<BenchReport> bench(const CompiledPolicy& cp, std::span<const std::size_t> lengths,
                               const BenchOptions& options = {});

/// The privilege-escalation spec: `trans` over apps with the given names
/// plus static system/trusted/hasPermissionToSink and Policy 2 as `policy`.
PolicySpec escalation_spec(std::size_t apps, Timestamp window = 10000);

}  // namespace rmtl
