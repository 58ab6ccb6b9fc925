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

#include <string>
#include <vector>

#include "rmtl/dsl.hpp"
#include "rmtl/trace.hpp"

namespace rmtl::testing {

inline PolicySpec spec_of(const std::string& text) {
  return parse_policy(SourcePolicy{text, "<test>"});
}

inline const Formula& policy(const PolicySpec& spec, const std::string& name) {
  return spec.find_policy(name)->formula;
}

inline GroundAtom ga(std::string pred, std::vector<std::string> args = {}) {
  return GroundAtom{std::move(pred), std::move(args)};
}

inline Term k(std::string name, std::string sort) { return Term::constant(std::move(name), std::move(sort)); }
inline Term v(std::string name, std::string sort) { return Term::variable(std::move(name), std::move(sort)); }

// Nullary event atoms p, q over a one-constant sort, for propositional tests.
inline constexpr const char* kPQ =
    "sort s\n"
    "const c : s\n"
    "event p\n"
    "event q\n";

// Trace from (ts, names of nullary atoms) pairs.
inline Trace props(const std::vector<std::pair<Timestamp, std::vector<std::string>>>& worlds) {
  Trace t;
  for (const auto& [ts, names] : worlds) {
    std::vector<GroundAtom> atoms;
    for (const auto& n : names) atoms.push_back(ga(n));
    t.emplace_back(ts, std::move(atoms));
  }
  return t;
}

inline std::string trans_def(int window) {
  return "sort app\n"
         "const a, b, sink : app\n"
         "event call(app, app)\n"
         "def trans(x:app, y:app) := call(x, y) or exists z:app. earlier[" +
         std::to_string(window) + "] trans(x, z) and call(z, y)\n";
}

}  // namespace rmtl::testing
