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

#include <filesystem>
#include <string>
#include <string_view>

#include "rmtl/formula.hpp"
#include "rmtl/policy_spec.hpp"

namespace rmtl {

/// Policy source text plus where it came from (a path or "<stdin>").
struct SourcePolicy {
  std::string text;
  std::string origin = "<input>";
};

/// Parses and validates a `.rmtl` policy. Throws PolicyError carrying a
/// Syntax diagnostic (first syntax error only) or every validation
/// diagnostic.
PolicySpec parse_policy(const SourcePolicy& src);

/// Parses a single formula, resolving names against `context`'s
/// declarations. `scope` supplies free variables that may appear.
Formula parse_formula(std::string_view text, const PolicySpec& context,
                      const std::vector<Param>& scope = {});

PolicySpec load_policy_file(const std::filesystem::path& path);

/// Canonical text; parse_policy(print_policy(s)) == s for valid specs.
std::string print_policy(const PolicySpec& spec);

/// Minimal-parenthesis rendering. And, true and forall are recovered from
/// their negation encodings.
std::string print_formula(const Formula& f);

}  // namespace rmtl
