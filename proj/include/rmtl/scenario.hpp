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
#include <stdexcept>
#include <string>
#include <vector>

#include "rmtl/policy_spec.hpp"
#include "rmtl/trace.hpp"

namespace rmtl {

/// A bundled policy with a golden trace, stored as
/// `<root>/<name>/{policy.rmtl, trace.jsonl, expected.txt}`.
struct Scenario {
  std::string name;
  std::filesystem::path dir;
  PolicySpec spec;
  Trace trace;
  /// Verdict lines in the `check`/`oracle` output format.
  std::string expected;
};

class UnknownScenario : public std::runtime_error {
 public:
  explicit UnknownScenario(const std::string& name)
      : std::runtime_error("unknown scenario '" + name + "'") {}
};

Scenario load_scenario(const std::filesystem::path& root, const std::string& name);

/// Scenario names under `root`, sorted.
std::vector<std::string> list_scenarios(const std::filesystem::path& root);

}  // namespace rmtl
