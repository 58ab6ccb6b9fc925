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

#include "rmtl/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rmtl/dsl.hpp"
#include "rmtl/trace_io.hpp"

namespace rmtl {

Scenario load_scenario(const std::filesystem::path& root, const std::string& name) {
  const auto dir = root / name;
  if (name.empty() || name.find('/') != std::string::npos ||
      !std::filesystem::is_regular_file(dir / "policy.rmtl")) {
    throw UnknownScenario(name);
  }
  Scenario s;
  s.name = name;
  s.dir = dir;
  s.spec = load_policy_file(dir / "policy.rmtl");
  s.trace = load_trace_file((dir / "trace.jsonl").string(), &s.spec);
  std::ifstream in(dir / "expected.txt");
  if (!in) throw std::runtime_error("scenario " + name + " has no expected.txt");
  std::ostringstream ss;
  ss << in.rdbuf();
  s.expected = ss.str();
  return s;
}

std::vector<std::string> list_scenarios(const std::filesystem::path& root) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(root)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "policy.rmtl")) {
      out.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rmtl
