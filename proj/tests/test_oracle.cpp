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

#include <gtest/gtest.h>

#include <unordered_set>

#include "rmtl/compiler.hpp"
#include "rmtl/harness.hpp"
#include "rmtl/oracle.hpp"
#include "test_util.hpp"

namespace rmtl {
namespace {

using testing::ga;
using testing::k;
using testing::props;
using testing::spec_of;

const Formula kP = Formula::atom("p", {});
const Formula kQ = Formula::atom("q", {});

Trace calls(std::vector<std::pair<Timestamp, std::vector<std::string>>> worlds) {
  Trace t;
  for (auto& [ts, pair] : worlds) t.emplace_back(ts, std::vector<GroundAtom>{ga("call", pair)});
  return t;
}

TEST(Oracle, BotIsFalse) {
  const PolicySpec spec = spec_of(testing::kPQ);
  const Trace t = props({{0, {"p", "q"}}, {1, {}}});
  EXPECT_FALSE(sat(spec, t, 1, Formula::bot()));
  EXPECT_FALSE(sat(spec, t, 2, Formula::bot()));
}

TEST(Oracle, TransitiveCallWithinWindow) {
  const PolicySpec spec = spec_of(testing::trans_def(10));
  const Formula goal = Formula::def_atom("trans", {k("a", "app"), k("sink", "app")});
  EXPECT_TRUE(sat(spec, calls({{0, {"a", "b"}}, {5, {"b", "sink"}}}), 2, goal));
  EXPECT_FALSE(sat(spec, calls({{0, {"a", "b"}}, {15, {"b", "sink"}}}), 2, goal));
}

TEST(Oracle, MetricSinceBoundary) {
  const PolicySpec spec = spec_of(testing::kPQ);
  const Trace t = props({{0, {"q"}}, {3, {"p"}}, {6, {"p"}}});
  EXPECT_FALSE(sat(spec, t, 3, Formula::since(5, kP, kQ)));
  EXPECT_TRUE(sat(spec, t, 3, Formula::since(7, kP, kQ)));
}

TEST(Oracle, SatAllOfEmptyTraceIsEmpty) {
  const PolicySpec spec = spec_of(testing::kPQ);
  EXPECT_TRUE(sat_all(spec, Trace{}, kP).empty());
}

TEST(Oracle, OnceAndPrevious) {
  const PolicySpec spec = spec_of(testing::kPQ);
  const Trace t = props({{0, {}}, {1, {"p"}}, {2, {}}});
  EXPECT_EQ(sat_all(spec, t, Formula::once(kP)), (std::vector<bool>{false, true, true}));
  EXPECT_EQ(sat_all(spec, t, Formula::prev(kP)), (std::vector<bool>{false, false, true}));
  EXPECT_EQ(sat_all(spec, t, Formula::earlier(kP)), (std::vector<bool>{false, false, true}));
}

TEST(Oracle, WorldOutOfRange) {
  const PolicySpec spec = spec_of(testing::kPQ);
  const Trace t = props({{0, {}}});
  EXPECT_THROW(sat(spec, t, 0, kP), WorldOutOfRange);
  EXPECT_THROW(sat(spec, t, 2, kP), WorldOutOfRange);
}

TEST(Oracle, StaticFactsHoldEverywhere) {
  const PolicySpec spec = spec_of(
      "sort app\nconst a, b : app\nevent call(app, app)\nstatic system(app)\nfact system(a)\n");
  const Trace t = calls({{0, {"a", "b"}}, {1, {"b", "a"}}});
  const Formula sys_a = Formula::atom("system", {k("a", "app")});
  const Formula sys_b = Formula::atom("system", {k("b", "app")});
  EXPECT_EQ(sat_all(spec, t, sys_a), (std::vector<bool>{true, true}));
  EXPECT_EQ(sat_all(spec, t, sys_b), (std::vector<bool>{false, false}));
}

TEST(MinimalWindow, Examples) {
  const PolicySpec spec = spec_of(testing::kPQ);
  const Formula f = Formula::since(5, kP, kQ);
  EXPECT_EQ(minimal_window(spec, props({{0, {"q"}}}), 1, f), 1);
  EXPECT_EQ(minimal_window(spec, props({{0, {"q"}}, {3, {"p"}}}), 2, f), 4);
  EXPECT_EQ(minimal_window(spec, props({{0, {}}}), 1, f), 0);
  EXPECT_EQ(minimal_window(spec, props({{0, {"p"}}, {5, {}}}), 2, Formula::earlier(10, kP)), 6);
}

// Ground metric subformulas drawn from compiled random specs, paired with
// random traces.
struct Instance {
  PolicySpec spec;
  Trace trace;
  CompiledPolicy cp;
};

std::vector<Instance> random_instances(std::size_t count) {
  std::vector<Instance> out;
  for (std::size_t t = 0; t < count; ++t) {
    GenConfig cfg = trial_config(fuzz_config(99), t);
    cfg.trace_length = std::min<std::size_t>(cfg.trace_length, 20);
    PolicySpec spec = gen_policy(cfg);
    Trace trace = gen_trace(cfg, spec);
    CompiledPolicy cp = compile(spec);
    out.push_back(Instance{std::move(spec), std::move(trace), std::move(cp)});
  }
  return out;
}

TEST(Oracle, MonotoneInBoundAndWindowIsMinimal) {
  std::size_t checked = 0;
  for (const auto& inst : random_instances(300)) {
    Oracle oracle(inst.spec, inst.trace, OracleOptions{true, 0, {}});
    for (const auto& node : inst.cp.table) {
      if (node.op != Op::kSinceM && node.op != Op::kEarlierM) continue;
      for (std::size_t i = 1; i <= inst.trace.size(); ++i) {
        const bool holds = oracle.sat(i, node.formula);
        if (holds) {
          for (Timestamp m : {node.bound + 1, node.bound + 3, 2 * node.bound}) {
            EXPECT_TRUE(oracle.sat(i, with_bound(node.formula, m)));
          }
        }
        const Timestamp w = oracle.minimal_window(i, node.formula);
        EXPECT_EQ(w > 0, holds);
        EXPECT_LE(w, node.bound);
        if (w > 0) {
          EXPECT_TRUE(oracle.sat(i, with_bound(node.formula, w)));
          for (Timestamp smaller = 1; smaller < w; ++smaller) {
            EXPECT_FALSE(oracle.sat(i, with_bound(node.formula, smaller)));
          }
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Oracle, RecursiveFormsOfMetricOperators) {
  std::size_t checked = 0;
  for (const auto& inst : random_instances(300)) {
    Oracle oracle(inst.spec, inst.trace, OracleOptions{true, 0, {}});
    for (const auto& node : inst.cp.table) {
      if (node.op != Op::kSinceM && node.op != Op::kEarlierM) continue;
      const Formula& f = node.formula;
      const Timestamp n = node.bound;
      for (std::size_t i = 2; i <= inst.trace.size(); ++i) {
        const Timestamp delta = inst.trace[i - 1].ts - inst.trace[i - 2].ts;
        const bool carried =
            oracle.sat(i - 1, f) && n - delta >= oracle.minimal_window(i - 1, f);
        const bool unfolded = node.op == Op::kSinceM
                                  ? oracle.sat(i, f.right()) || (oracle.sat(i, f.left()) && carried)
                                  : (oracle.sat(i - 1, f.child()) && delta < n) || carried;
        EXPECT_EQ(oracle.sat(i, f), unfolded) << print_formula(f) << " at " << i;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Oracle, DerivedOperatorIdentities) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenConfig cfg = trial_config(fuzz_config(5), seed);
    const PolicySpec spec = gen_policy(cfg);
    const Trace trace = gen_trace(cfg, spec);
    Oracle oracle(spec, trace, OracleOptions{true, 0, {}});
    for (const auto& pol : spec.policies) {
      const Formula& phi = pol.formula;
      for (std::size_t i = 1; i <= trace.size(); ++i) {
        const bool a = oracle.sat(i, phi);
        EXPECT_EQ(oracle.sat(i, Formula::once(phi)), oracle.sat(i, Formula::since(Formula::top(), phi)));
        EXPECT_EQ(oracle.sat(i, Formula::earlier(phi)), oracle.sat(i, Formula::prev(Formula::once(phi))));
        EXPECT_EQ(oracle.sat(i, Formula::once(3, phi)),
                  oracle.sat(i, Formula::since(3, Formula::top(), phi)));
        EXPECT_TRUE(oracle.sat(i, Formula::top()));
        EXPECT_EQ(oracle.sat(i, Formula::neg(phi)), !a);
        const Formula other = spec.policies.back().formula;
        EXPECT_EQ(oracle.sat(i, Formula::conj(phi, other)), a && oracle.sat(i, other));
        EXPECT_EQ(oracle.sat(i, Formula::implies(phi, other)), !a || oracle.sat(i, other));
        ++checked;
      }
    }
    // Quantifiers against explicit expansion over the domain.
    for (const auto& def : spec.defs) {
      if (def.params.empty()) continue;
      const Param& x = def.params[0];
      Binding rest;
      for (std::size_t j = 1; j < def.params.size(); ++j) {
        rest[def.params[j].name] = k(spec.domain(def.params[j].sort).front(), def.params[j].sort);
      }
      const Formula open = substitute(def.body, rest);
      for (std::size_t i = 1; i <= trace.size(); ++i) {
        bool any = false, all = true;
        for (const auto& c : spec.domain(x.sort)) {
          const bool h = oracle.sat(i, substitute(open, {{x.name, k(c, x.sort)}}));
          any = any || h;
          all = all && h;
        }
        EXPECT_EQ(oracle.sat(i, Formula::exists(x.name, x.sort, open)), any);
        EXPECT_EQ(oracle.sat(i, Formula::forall(x.name, x.sort, open)), all);
      }
    }
  }
  EXPECT_GT(checked, 500u);
}

TEST(Oracle, RecursionDepthIsBoundedByWorldsTimesClosure) {
  for (std::size_t t = 0; t < 100; ++t) {
    // Unmemoized evaluation is exponential in trace length; keep it short.
    GenConfig cfg = trial_config(fuzz_config(17), t);
    cfg.trace_length = std::min<std::size_t>(cfg.trace_length, 8);
    const PolicySpec spec = gen_policy(cfg);
    const Trace trace = gen_trace(cfg, spec);
    std::unordered_set<Formula, FormulaHash> seen;
    OracleOptions options;
    options.on_visit = [&](std::size_t, const Formula& f) { seen.insert(f); };
    Oracle oracle(spec, trace, options);
    for (const auto& pol : spec.policies) oracle.sat(trace.size(), pol.formula);
    EXPECT_LE(oracle.max_depth_seen(), trace.size() * seen.size());
  }
}

TEST(Oracle, DepthLimitIsEnforced) {
  const PolicySpec spec = spec_of(testing::trans_def(10));
  Trace t;
  for (Timestamp ts = 0; ts < 30; ++ts) t.emplace_back(ts, std::vector<GroundAtom>{ga("call", {"a", "b"})});
  OracleOptions options;
  options.max_depth = 5;
  Oracle oracle(spec, t, options);
  EXPECT_THROW(oracle.sat(30, Formula::def_atom("trans", {k("a", "app"), k("sink", "app")})),
               std::logic_error);
}

TEST(Oracle, MemoDoesNotChangeAnswers) {
  for (std::size_t t = 0; t < 100; ++t) {
    GenConfig cfg = trial_config(fuzz_config(23), t);
    cfg.trace_length = std::min<std::size_t>(cfg.trace_length, 12);
    const PolicySpec spec = gen_policy(cfg);
    const Trace trace = gen_trace(cfg, spec);
    Oracle plain(spec, trace);
    Oracle memo(spec, trace, OracleOptions{true, 0, {}});
    for (const auto& pol : spec.policies) {
      EXPECT_EQ(plain.sat_all(pol.formula), memo.sat_all(pol.formula));
    }
  }
}

}  // namespace
}  // namespace rmtl
