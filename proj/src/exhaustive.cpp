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

#include "rmtl/dsl.hpp"
#include "rmtl/harness.hpp"

namespace rmtl {
namespace {

constexpr const char* kAlphabet =
    "sort s\n"
    "const c : s\n"
    "event p(s)\n";

}  // namespace

const std::vector<std::string>& exhaustive_battery() {
  static const std::vector<std::string> kBattery = [] {
    const std::vector<std::string> bodies = {
        "policy q := p(c)",
        "policy q := not p(c) or false",
        "policy q := prev p(c)",
        "policy q := prev[1] p(c)",
        "policy q := prev[2] p(c)",
        "policy q := once p(c)",
        "policy q := once[2] p(c)",
        "policy q := earlier p(c)",
        "policy q := earlier[1] p(c)",
        "policy q := earlier[2] p(c)",
        "policy q := earlier[3] p(c)",
        "policy q := not p(c) since p(c)",
        "policy q := not p(c) since[1] p(c)",
        "policy q := not p(c) since[3] p(c)",
        "policy q := p(c) since[2] not p(c)",
        "policy q := earlier[3] (p(c) since[2] not p(c))",
        "policy q := earlier[4] (not p(c) since[3] p(c))",
        "policy q := prev[2] p(c) since[4] earlier[1] p(c)",
        "policy q := true since[2] earlier[2] p(c)",
        "policy q := prev (p(c) since[2] prev p(c))",
        "policy q := earlier[2] earlier[2] p(c)",
        "policy q := (p(c) since[5] p(c)) and not earlier[5] p(c)",
        "policy q := not (not p(c) since[2] p(c)) since[3] p(c)",
        "policy q := exists x:s. p(x) and earlier[2] p(x)",
        "policy q := forall x:s. p(x) implies once[3] prev p(x)",
        "def r(x:s) := p(x) or earlier[2] r(x)\n"
        "policy q := r(c)",
        "def r(x:s) := not p(x) and prev[2] (p(x) or r(x))\n"
        "policy q := r(c) or once[1] r(c)",
        "def t(x:s, y:s) := p(y) or exists z:s. earlier[3] t(x,z) and p(z)\n"
        "policy q := t(c,c) and prev not p(c)",
        "def A(x:s) := p(x) or prev[2] B(x)\n"
        "def B(x:s) := earlier A(x) and not p(x)\n"
        "policy q := A(c)",
        "def u(x:s) := earlier[3] (p(x) since[2] u(x)) or p(x)\n"
        "policy q := not u(c) since[4] u(c)",
    };
    std::vector<std::string> out;
    for (const auto& b : bodies) out.push_back(std::string(kAlphabet) + b + "\n");
    return out;
  }();
  return kBattery;
}

ExhaustiveReport exhaustive(std::size_t max_length, std::span<const Timestamp> gaps,
                            StepMutation mutation) {
  const GroundAtom p{"p", {"c"}};
  std::vector<Trace> traces;
  for (std::size_t len = 1; len <= max_length; ++len) {
    // Mixed-radix counter: one presence bit per world, one gap choice per
    // step after the first world.
    std::size_t combos = std::size_t{1} << len;
    for (std::size_t k = 1; k < len; ++k) combos *= gaps.size();
    for (std::size_t code = 0; code < combos; ++code) {
      std::size_t rest = code;
      Trace t;
      Timestamp ts = 0;
      for (std::size_t w = 0; w < len; ++w) {
        if (w > 0) {
          ts += gaps[rest % gaps.size()];
          rest /= gaps.size();
        }
        const bool present = rest % 2 == 1;
        rest /= 2;
        t.emplace_back(ts, present ? std::vector<GroundAtom>{p} : std::vector<GroundAtom>{});
      }
      traces.push_back(std::move(t));
    }
  }

  ExhaustiveReport report;
  report.traces = traces.size();
  for (const auto& text : exhaustive_battery()) {
    const PolicySpec spec = parse_policy(SourcePolicy{text, "<battery>"});
    ++report.policies;
    for (const auto& t : traces) {
      ++report.pairs;
      if (auto m = check_pair(spec, t, mutation)) {
        report.counterexample = Counterexample{report.pairs, spec, t, *m, m->what};
        return report;
      }
    }
  }
  return report;
}

}  // namespace rmtl
