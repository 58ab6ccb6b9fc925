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

#include <fstream>
#include <functional>
#include <sstream>

#include "rmtl/dsl.hpp"
#include "rmtl/harness.hpp"
#include "rmtl/oracle.hpp"
#include "rmtl/trace_io.hpp"
#include "rmtl/verdicts.hpp"

namespace rmtl {
namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::optional<Mismatch> check_pair(const PolicySpec& spec, std::span<const TimedState> trace,
                                   StepMutation mutation, CheckCounts* counts) {
  const CompiledPolicy cp = compile(spec);
  OracleOptions options;
  options.memoize = true;
  Oracle oracle(spec, trace, options);
  CheckCounts local;
  CheckCounts& c = counts ? *counts : local;

  MonitorState ms;
  std::vector<Timestamp> window_before(cp.table.size(), 0);
  for (std::size_t i = 1; i <= trace.size(); ++i) {
    Verdict v;
    if (i == 1) {
      auto [state, first] = init(cp, trace[0], mutation);
      ms = std::move(state);
      v = std::move(first);
    } else {
      v = step(cp, ms, trace[i - 1], mutation);
    }
    ++c.worlds;
    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
      const bool expected = oracle.sat(i, spec.policies[p].formula);
      if (v.violated[p] != expected) {
        return Mismatch{i, "policy " + spec.policies[p].name + ": oracle=" + yes_no(expected) +
                               " monitor=" + yes_no(v.violated[p])};
      }
    }
    std::vector<Timestamp> window_now(cp.table.size(), 0);
    for (NodeIndex k = 0; k < cp.table.size(); ++k) {
      const TableNode& node = cp.table[k];
      const bool expected = oracle.sat(i, node.formula);
      ++c.node_checks;
      if ((ms.cur[k] != 0) != expected) {
        return Mismatch{i, "node " + std::to_string(k) + " [" + print_formula(node.formula) +
                               "]: oracle=" + yes_no(expected) +
                               " monitor=" + yes_no(ms.cur[k] != 0)};
      }
      if (node.op != Op::kSinceM && node.op != Op::kEarlierM) {
        if (ms.mcur[k] != 0) {
          return Mismatch{i, "node " + std::to_string(k) + " has nonzero window " +
                                 std::to_string(ms.mcur[k])};
        }
        continue;
      }
      const Timestamp m = oracle.minimal_window(i, node.formula);
      window_now[k] = m;
      ++c.window_checks;
      if (ms.mcur[k] != m || m > node.bound) {
        return Mismatch{i, "node " + std::to_string(k) + " [" + print_formula(node.formula) +
                               "]: oracle window=" + std::to_string(m) +
                               " monitor window=" + std::to_string(ms.mcur[k])};
      }
      if (i > 1) {
        // Recursive forms, evaluated purely with the oracle.
        const Timestamp delta = trace[i - 1].ts - trace[i - 2].ts;
        const Timestamp n = node.bound;
        const bool carried = oracle.sat(i - 1, node.formula) && n - delta >= window_before[k];
        bool unfolded;
        if (node.op == Op::kSinceM) {
          const Formula& f = node.formula;
          unfolded = oracle.sat(i, f.right()) || (oracle.sat(i, f.left()) && carried);
        } else {
          unfolded = (oracle.sat(i - 1, node.formula.child()) && delta < n) || carried;
        }
        ++c.recursive_form_checks;
        if (unfolded != expected) {
          return Mismatch{i, "recursive form fails for [" + print_formula(node.formula) + "]"};
        }
      }
    }
    window_before = std::move(window_now);
  }
  return std::nullopt;
}

namespace {

bool fails(const PolicySpec& spec, const Trace& trace, StepMutation mutation,
           Mismatch* out = nullptr) {
  if (!validate(spec).empty() || trace.empty()) return false;
  auto m = check_pair(spec, trace, mutation);
  if (m && out) *out = *m;
  return m.has_value();
}

// Candidate replacements for f: false, and each operand that stays closed
// in the same scope.
std::vector<Formula> smaller(const Formula& f) {
  std::vector<Formula> out;
  if (f.op() != Op::kBot) out.push_back(Formula::bot());
  if (f.op() == Op::kExists) {
    if (!free_variables(f.child()).contains(f.name())) out.push_back(f.child());
  } else {
    for (std::size_t i = 0; i < f.num_children(); ++i) out.push_back(f.child(i));
  }
  return out;
}

// Applies one shrinking step somewhere in f (preorder); returns true if
// `accept` took one.
template <class Accept>
bool shrink_formula(const Formula f, Accept&& accept,
                    const std::function<PolicySpec(Formula)>& plug) {
  for (const Formula& candidate : smaller(f)) {
    if (accept(plug(candidate))) return true;
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    auto inner = [&, i](Formula g) {
      if (f.op() == Op::kExists) return plug(Formula::exists(f.name(), f.sort(), g));
      if (is_unary(f.op())) return plug(Formula::unary(f.op(), f.bound(), g));
      return plug(i == 0 ? Formula::binary(f.op(), f.bound(), g, f.right())
                         : Formula::binary(f.op(), f.bound(), f.left(), g));
    };
    if (shrink_formula(f.child(i), accept, inner)) return true;
  }
  return false;
}

std::string expected_vs_got(const PolicySpec& spec, const Trace& trace, StepMutation mutation) {
  std::ostringstream os;
  const CompiledPolicy cp = compile(spec);
  const auto got = run(cp, trace, mutation);
  const auto want = oracle_verdicts(spec, trace);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
      os << (i + 1) << ' ' << trace[i].ts << ' ' << spec.policies[p].name
         << " expected=" << (want[i].violated[p] ? "VIOLATION" : "ok")
         << " got=" << (got[i].violated[p] ? "VIOLATION" : "ok")
         << (want[i].violated[p] != got[i].violated[p] ? "  <<<" : "") << '\n';
    }
  }
  return os.str();
}

}  // namespace

Counterexample shrink(Counterexample cex, StepMutation mutation) {
  cex.trace.resize(std::min(cex.trace.size(), cex.mismatch.world));
  bool progress = true;
  while (progress) {
    progress = false;
    while (cex.trace.size() > 1) {
      Trace shorter(cex.trace.begin(), cex.trace.end() - 1);
      if (!fails(cex.spec, shorter, mutation)) break;
      cex.trace = std::move(shorter);
      progress = true;
    }
    for (std::size_t w = 0; w + 1 < cex.trace.size();) {
      Trace without = cex.trace;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(w));
      if (fails(cex.spec, without, mutation)) {
        cex.trace = std::move(without);
        progress = true;
      } else {
        ++w;
      }
    }
    for (std::size_t w = 0; w < cex.trace.size(); ++w) {
      for (std::size_t a = 0; a < cex.trace[w].atoms.size();) {
        Trace fewer = cex.trace;
        fewer[w].atoms.erase(fewer[w].atoms.begin() + static_cast<std::ptrdiff_t>(a));
        if (fails(cex.spec, fewer, mutation)) {
          cex.trace = std::move(fewer);
          progress = true;
        } else {
          ++a;
        }
      }
    }
    if (cex.spec.policies.size() > 1) {
      for (std::size_t p = 0; p < cex.spec.policies.size() && cex.spec.policies.size() > 1;) {
        PolicySpec fewer = cex.spec;
        fewer.policies.erase(fewer.policies.begin() + static_cast<std::ptrdiff_t>(p));
        if (fails(fewer, cex.trace, mutation)) {
          cex.spec = std::move(fewer);
          progress = true;
        } else {
          ++p;
        }
      }
    }
    for (std::size_t d = 0; d < cex.spec.defs.size();) {
      PolicySpec fewer = cex.spec;
      const std::string head = fewer.defs[d].head;
      fewer.defs.erase(fewer.defs.begin() + static_cast<std::ptrdiff_t>(d));
      std::erase_if(fewer.predicates, [&](const PredicateDecl& p) { return p.name == head; });
      if (fails(fewer, cex.trace, mutation)) {
        cex.spec = std::move(fewer);
        progress = true;
      } else {
        ++d;
      }
    }
    auto accept = [&](PolicySpec candidate) {
      if (!fails(candidate, cex.trace, mutation)) return false;
      cex.spec = std::move(candidate);
      return true;
    };
    for (std::size_t p = 0; p < cex.spec.policies.size(); ++p) {
      auto plug = [&](Formula g) {
        PolicySpec s = cex.spec;
        s.policies[p].formula = std::move(g);
        return s;
      };
      while (shrink_formula(cex.spec.policies[p].formula, accept, plug)) progress = true;
    }
    for (std::size_t d = 0; d < cex.spec.defs.size(); ++d) {
      auto plug = [&](Formula g) {
        PolicySpec s = cex.spec;
        s.defs[d].body = std::move(g);
        return s;
      };
      while (shrink_formula(cex.spec.defs[d].body, accept, plug)) progress = true;
    }
  }
  Mismatch m;
  fails(cex.spec, cex.trace, mutation, &m);
  cex.mismatch = m;
  cex.report = "mismatch at world " + std::to_string(m.world) + ": " + m.what + "\n\n" +
               expected_vs_got(cex.spec, cex.trace, mutation);
  return cex;
}

void write_counterexample(const Counterexample& cex, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "repro.rmtl") << print_policy(cex.spec);
  std::ofstream jsonl(dir / "repro.jsonl");
  write_trace(jsonl, cex.trace);
  std::ofstream(dir / "report.txt") << "trial " << cex.trial << '\n' << cex.report;
}

std::string DiffReport::summary() const {
  std::ostringstream os;
  os << "trials=" << trials << " worlds=" << counts.worlds << " node_checks=" << counts.node_checks
     << " window_checks=" << counts.window_checks
     << " recursive_form_checks=" << counts.recursive_form_checks;
  if (counterexample) {
    os << " COUNTEREXAMPLE trial=" << counterexample->trial << " world="
       << counterexample->mismatch.world << ": " << counterexample->mismatch.what;
  } else {
    os << " mismatches=0";
  }
  return os.str();
}

DiffReport differential(const GenConfig& base, std::size_t trials, const DiffOptions& options) {
  DiffReport report;
  for (std::size_t t = 0; t < trials; ++t) {
    const GenConfig cfg = trial_config(base, t);
    PolicySpec spec = gen_policy(cfg);
    Trace trace = gen_trace(cfg, spec);
    ++report.trials;
    auto m = check_pair(spec, trace, options.mutation, &report.counts);
    if (!m) continue;
    Counterexample cex{t, std::move(spec), std::move(trace), *m, ""};
    if (options.shrink) {
      cex = shrink(std::move(cex), options.mutation);
    } else {
      cex.report = "mismatch at world " + std::to_string(m->world) + ": " + m->what + "\n";
    }
    report.counterexample = std::move(cex);
    break;
  }
  return report;
}

}  // namespace rmtl
