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

#include "rmtl/compiler.hpp"
#include "rmtl/formula.hpp"
#include "rmtl/harness.hpp"
#include "rmtl/policy_spec.hpp"
#include "test_util.hpp"

namespace rmtl {
namespace {

using testing::k;
using testing::spec_of;
using testing::v;

std::vector<DiagCode> codes_of(const std::string& text) {
  try {
    spec_of(text);
  } catch (const PolicyError& e) {
    std::vector<DiagCode> out;
    for (const auto& d : e.diagnostics()) out.push_back(d.code);
    return out;
  }
  return {};
}

constexpr const char* kApps =
    "sort app\n"
    "const a, b, sink : app\n"
    "event call(app, app)\n";

TEST(Validate, GuardedSelfRecursionIsAccepted) {
  EXPECT_TRUE(codes_of(std::string(kApps) + "def P(x:app) := call(x,x) or earlier P(x)\n").empty());
}

TEST(Validate, UnguardedSelfRecursionIsRejected) {
  const auto codes = codes_of(std::string(kApps) + "def P(x:app) := call(x,x) or P(x)\n");
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0], DiagCode::kUnguardedRecursion);
}

TEST(Validate, GuardedMutualRecursionIsAcceptedAndCompilesAcyclic) {
  const std::string text = std::string(kApps) +
                           "def P(x:app) := prev Q(x)\n"
                           "def Q(x:app) := earlier[5] P(x)\n"
                           "policy r := P(a) or Q(b)\n";
  ASSERT_TRUE(codes_of(text).empty());
  const PolicySpec spec = spec_of(text);
  EXPECT_TRUE(validate(spec).empty());
  EXPECT_NO_THROW(compile(spec));
}

TEST(Validate, UnguardedMutualRecursionIsRejected) {
  const auto codes = codes_of(std::string(kApps) +
                              "def P(x:app) := prev Q(x)\n"
                              "def Q(x:app) := call(x,x) and P(x)\n");
  ASSERT_EQ(codes.size(), 1u);
  EXPECT_EQ(codes[0], DiagCode::kUnguardedRecursion);
}

TEST(Validate, OnceAndSinceDoNotGuard) {
  EXPECT_EQ(codes_of(std::string(kApps) + "def P(x:app) := once P(x)\n"),
            std::vector<DiagCode>{DiagCode::kUnguardedRecursion});
  EXPECT_EQ(codes_of(std::string(kApps) + "def P(x:app) := call(x,x) since[3] P(x)\n"),
            std::vector<DiagCode>{DiagCode::kUnguardedRecursion});
}

TEST(Validate, DefinedPredicateMayBeUnguardedInPolicy) {
  EXPECT_TRUE(codes_of(testing::trans_def(10) + "policy p := trans(a, sink)\n").empty());
}

TEST(Validate, SortMismatch) {
  const auto codes = codes_of(
      "sort app\nsort num\nconst a : app\nconst one : num\nevent call(app, app)\n"
      "policy p := call(a, one)\n");
  EXPECT_EQ(codes, std::vector<DiagCode>{DiagCode::kSortMismatch});
}

TEST(Validate, UnboundVariable) {
  EXPECT_EQ(codes_of(std::string(kApps) + "policy p := exists x:app. call(x, y)\n"),
            std::vector<DiagCode>{DiagCode::kUnknownSymbol});
  // Built directly, an open policy is reported as unbound.
  PolicySpec spec = spec_of(kApps);
  spec.policies.push_back(
      PolicyDecl{"open", Formula::atom("call", {v("x", "app"), k("a", "app")}), {}});
  const auto diags = validate(spec);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, DiagCode::kUnboundVariable);
}

TEST(Validate, UnknownSymbol) {
  EXPECT_EQ(codes_of(std::string(kApps) + "policy p := send(a)\n"),
            std::vector<DiagCode>{DiagCode::kUnknownSymbol});
}

TEST(Validate, NonPositiveBound) {
  EXPECT_EQ(codes_of(std::string(kApps) + "policy p := earlier[0] call(a, b)\n"),
            std::vector<DiagCode>{DiagCode::kNonPositiveBound});
}

TEST(Validate, DuplicateDefinition) {
  const auto codes = codes_of(std::string(kApps) +
                              "def P(x:app) := call(x,x)\n"
                              "def P(x:app) := call(x,a)\n");
  ASSERT_FALSE(codes.empty());
  EXPECT_EQ(codes[0], DiagCode::kDuplicateDefinition);
}

TEST(Validate, DiagnosticsCarryLocation) {
  try {
    spec_of(std::string(kApps) + "def P(x:app) := call(x,x) or P(x)\n");
    FAIL();
  } catch (const PolicyError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].loc.line, 4);
    EXPECT_GT(e.diagnostics()[0].loc.column, 1);
    EXPECT_NE(std::string(e.what()).find("<test>:4:"), std::string::npos);
  }
}

TEST(Substitute, ReplacesFreeVariable) {
  const Formula f = Formula::atom("call", {v("x", "app"), k("sink", "app")});
  EXPECT_EQ(substitute(f, {{"x", k("a", "app")}}),
            Formula::atom("call", {k("a", "app"), k("sink", "app")}));
}

TEST(Substitute, LeavesBoundVariableAlone) {
  const Formula f = Formula::exists("z", "app", Formula::atom("call", {v("x", "app"), v("z", "app")}));
  EXPECT_EQ(substitute(f, {{"x", k("a", "app")}, {"z", k("b", "app")}}),
            Formula::exists("z", "app", Formula::atom("call", {k("a", "app"), v("z", "app")})));
}

TEST(Substitute, DefinedAtom) {
  const Formula f = Formula::def_atom("trans", {v("x", "app"), v("y", "app")});
  EXPECT_EQ(substitute(f, {{"x", k("a", "app")}, {"y", k("b", "app")}}),
            Formula::def_atom("trans", {k("a", "app"), k("b", "app")}));
}

TEST(Substitute, SortMismatchThrows) {
  const Formula f = Formula::atom("call", {v("x", "app"), k("sink", "app")});
  EXPECT_THROW(substitute(f, {{"x", k("one", "num")}}), SortError);
}

// Open formulas come from the generator's definition bodies, whose free
// variables are the definition parameters.
TEST(Substitute, CommutesAndIsIdempotentOnRandomBodies) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_formula_depth = 4;
    cfg.domain_sizes = {2, 3};
    const PolicySpec spec = gen_policy(cfg);
    for (const auto& def : spec.defs) {
      if (def.params.size() < 2) continue;
      const Param& x = def.params[0];
      const Param& y = def.params[1];
      const Term a = k(spec.domain(x.sort).back(), x.sort);
      const Term b = k(spec.domain(y.sort).front(), y.sort);
      const Formula seq = substitute(substitute(def.body, {{x.name, a}}), {{y.name, b}});
      const Binding both{{x.name, a}, {y.name, b}};
      const Formula once = substitute(def.body, both);
      EXPECT_EQ(seq, once) << def.head;
      EXPECT_EQ(substitute(once, both), once);
      EXPECT_TRUE(free_variables(once).empty());
      auto fv = free_variables(def.body);
      fv.erase(y.name);
      EXPECT_EQ(free_variables(substitute(def.body, {{y.name, b}})), fv);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Formula, SugarEncodings) {
  const Formula p = Formula::atom("p", {});
  const Formula q = Formula::atom("q", {});
  EXPECT_EQ(Formula::top(), Formula::neg(Formula::bot()));
  EXPECT_EQ(Formula::conj(p, q), Formula::neg(Formula::disj(Formula::neg(p), Formula::neg(q))));
  EXPECT_EQ(Formula::implies(p, q), Formula::disj(Formula::neg(p), q));
  EXPECT_EQ(Formula::forall("x", "s", p),
            Formula::neg(Formula::exists("x", "s", Formula::neg(p))));
}

TEST(Formula, EqualityIgnoresLocationAndHashAgrees) {
  const Formula a = Formula::prev(3, Formula::atom("p", {}));
  const Formula b = a.with_loc(SourceLoc{7, 2});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_FALSE(a == Formula::prev(4, Formula::atom("p", {})));
}

}  // namespace
}  // namespace rmtl
