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

#include <span>
#include <string>
#include <vector>

#include "rmtl/monitor.hpp"
#include "rmtl/oracle.hpp"
#include "rmtl/policy_spec.hpp"

namespace rmtl {

/// One line per policy: "<world> <ts> <policy> <VIOLATION|ok>\n".
std::string format_verdict(const PolicySpec& spec, const Verdict& v);

/// One JSON object per policy and line:
/// {"world":1,"ts":0,"policy":"p1","violation":true}
std::string format_verdict_json(const PolicySpec& spec, const Verdict& v);

/// Verdicts computed by the brute-force oracle on the policy formulas as
/// written (not the compiled forms).
std::vector<Verdict> oracle_verdicts(const PolicySpec& spec, std::span<const TimedState> trace,
                                     bool memoize = true);

}  // namespace rmtl
