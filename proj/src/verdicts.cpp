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

#include "rmtl/verdicts.hpp"

#include "json.hpp"

namespace rmtl {

std::string format_verdict(const PolicySpec& spec, const Verdict& v) {
  std::string out;
  for (std::size_t k = 0; k < v.violated.size(); ++k) {
    out += std::to_string(v.world) + ' ' + std::to_string(v.ts) + ' ' +
           spec.policies.at(k).name + ' ' + (v.violated[k] ? "VIOLATION" : "ok") + '\n';
  }
  return out;
}

std::string format_verdict_json(const PolicySpec& spec, const Verdict& v) {
  std::string out;
  for (std::size_t k = 0; k < v.violated.size(); ++k) {
    nlohmann::ordered_json j;
    j["world"] = v.world;
    j["ts"] = v.ts;
    j["policy"] = spec.policies.at(k).name;
    j["violation"] = static_cast<bool>(v.violated[k]);
    out += j.dump() + '\n';
  }
  return out;
}

std::vector<Verdict> oracle_verdicts(const PolicySpec& spec, std::span<const TimedState> trace,
                                     bool memoize) {
  OracleOptions options;
  options.memoize = memoize;
  Oracle oracle(spec, trace, options);
  std::vector<Verdict> out(trace.size());
  for (std::size_t i = 1; i <= trace.size(); ++i) {
    Verdict& v = out[i - 1];
    v.world = i;
    v.ts = trace[i - 1].ts;
    for (const auto& p : spec.policies) v.violated.push_back(oracle.sat(i, p.formula));
  }
  return out;
}

}  // namespace rmtl
