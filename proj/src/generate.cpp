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

#include <algorithm>
#include <random>

#include "rmtl/dsl.hpp"
#include "rmtl/harness.hpp"

namespace rmtl {
namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string constant_name(std::size_t sort, std::size_t j) {
  return std::string(1, static_cast<char>('a' + sort)) + std::to_string(j);
}

class FormulaGen {
 public:
  FormulaGen(const GenConfig& cfg, const PolicySpec& spec, Rng& rng)
      : cfg_(cfg), spec_(spec), rng_(rng) {}

  Formula gen(int depth, std::vector<Param>& scope, bool def_body) {
    if (depth <= 0) return leaf(scope, def_body, !def_body);
    // 0..13 pick a connective, 14..15 a leaf.
    const int pick = uniform(rng_, 0, 15);
    auto sub = [&] { return gen(depth - 1, scope, def_body); };
    switch (pick) {
      case 0: return Formula::neg(sub());
      case 1: return Formula::disj(sub(), sub());
      case 2: return Formula::conj(sub(), sub());
      case 3: return Formula::implies(sub(), sub());
      case 4: return Formula::prev(sub());
      case 5: return Formula::prev(bound(), sub());
      case 6: return Formula::since(sub(), sub());
      case 7: return Formula::since(bound(), sub(), sub());
      case 8: return Formula::once(sub());
      case 9: return Formula::once(bound(), sub());
      case 10: return Formula::earlier(sub());
      case 11: return Formula::earlier(bound(), sub());
      case 12:
      case 13: {
        const std::string var = "v" + std::to_string(next_var_++);
        const std::string sort = random_sort();
        scope.push_back(Param{var, sort});
        Formula body = sub();
        scope.pop_back();
        return pick == 12 ? Formula::exists(var, sort, body) : Formula::forall(var, sort, body);
      }
      default:
        return leaf(scope, def_body, false);
    }
  }

  // `atomic` leaves are false or a bare atom (depth-0 policies).
  Formula leaf(const std::vector<Param>& scope, bool def_body, bool atomic) {
    const bool have_defs = !spec_.defs.empty();
    const int pick = uniform(rng_, 0, have_defs ? 9 : 6);
    if (pick == 0) return Formula::bot();
    if (pick == 1) return atomic ? Formula::bot() : Formula::top();
    if (pick <= 5) return predicate_atom(PredicateKind::kEvent, scope);
    if (pick == 6) return predicate_atom(PredicateKind::kStatic, scope);
    Formula f = predicate_atom(PredicateKind::kDefined, scope);
    if (def_body || (!atomic && coin(rng_, 0.3))) f = guard(f);
    return f;
  }

 private:
  Timestamp bound() {
    return std::uniform_int_distribution<Timestamp>(1, cfg_.max_bound)(rng_);
  }

  std::string random_sort() {
    return spec_.sorts[uniform(rng_, 0, static_cast<int>(spec_.sorts.size()) - 1)].name;
  }

  Formula guard(Formula f) {
    switch (uniform(rng_, 0, 3)) {
      case 0: return Formula::prev(f);
      case 1: return Formula::prev(bound(), f);
      case 2: return Formula::earlier(f);
      default: return Formula::earlier(bound(), f);
    }
  }

  Formula predicate_atom(PredicateKind kind, const std::vector<Param>& scope) {
    std::vector<const PredicateDecl*> pool;
    for (const auto& p : spec_.predicates) {
      if (p.kind == kind) pool.push_back(&p);
    }
    const PredicateDecl& decl = *pool[uniform(rng_, 0, static_cast<int>(pool.size()) - 1)];
    std::vector<Term> args;
    for (const auto& sort : decl.arg_sorts) {
      std::vector<const Param*> vars;
      for (const auto& p : scope) {
        if (p.sort == sort) vars.push_back(&p);
      }
      if (!vars.empty() && coin(rng_, 0.7)) {
        const Param* v = vars[uniform(rng_, 0, static_cast<int>(vars.size()) - 1)];
        args.push_back(Term::variable(v->name, sort));
      } else {
        const auto& dom = spec_.domain(sort);
        args.push_back(Term::constant(dom[uniform(rng_, 0, static_cast<int>(dom.size()) - 1)], sort));
      }
    }
    return kind == PredicateKind::kDefined ? Formula::def_atom(decl.name, std::move(args))
                                           : Formula::atom(decl.name, std::move(args));
  }

  const GenConfig& cfg_;
  const PolicySpec& spec_;
  Rng& rng_;
  int next_var_ = 0;
};

std::vector<std::string> random_sorts(Rng& rng, const PolicySpec& spec, int max_arity) {
  std::vector<std::string> out(uniform(rng, 0, max_arity));
  for (auto& s : out) s = spec.sorts[uniform(rng, 0, static_cast<int>(spec.sorts.size()) - 1)].name;
  return out;
}

}  // namespace

PolicySpec gen_policy(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  PolicySpec spec;
  for (std::size_t s = 0; s < cfg.domain_sizes.size(); ++s) {
    SortDecl decl{"s" + std::to_string(s), {}, {}};
    for (int j = 0; j < cfg.domain_sizes[s]; ++j) decl.constants.push_back(constant_name(s, j));
    spec.sorts.push_back(std::move(decl));
  }
  for (int e = 0; e < std::max(1, cfg.event_predicates); ++e) {
    spec.predicates.push_back(
        PredicateDecl{"e" + std::to_string(e), random_sorts(rng, spec, cfg.max_arity),
                      PredicateKind::kEvent, {}});
  }
  PredicateDecl st{"st", random_sorts(rng, spec, std::min(cfg.max_arity, 1)),
                   PredicateKind::kStatic, {}};
  const int num_defs = uniform(rng, 0, cfg.max_defs);
  for (int d = 0; d < num_defs; ++d) {
    RecursiveDef def;
    def.head = "D" + std::to_string(d);
    for (const auto& s : random_sorts(rng, spec, cfg.max_arity)) {
      def.params.push_back(Param{"x" + std::to_string(def.params.size()), s});
    }
    PredicateDecl decl{def.head, {}, PredicateKind::kDefined, {}};
    for (const auto& p : def.params) decl.arg_sorts.push_back(p.sort);
    spec.predicates.push_back(std::move(decl));
    spec.defs.push_back(std::move(def));
  }
  // Static facts: each ground instance holds with probability 1/2.
  if (st.arg_sorts.empty()) {
    if (coin(rng, 0.5)) spec.static_facts.insert(GroundAtom{"st", {}});
  } else {
    for (const auto& c : spec.domain(st.arg_sorts[0])) {
      if (coin(rng, 0.5)) spec.static_facts.insert(GroundAtom{"st", {c}});
    }
  }
  spec.predicates.insert(spec.predicates.begin() + std::max(1, cfg.event_predicates),
                         std::move(st));

  FormulaGen gen(cfg, spec, rng);
  for (auto& def : spec.defs) {
    std::vector<Param> scope = def.params;
    def.body = gen.gen(uniform(rng, 0, std::max(0, cfg.max_formula_depth - 1)), scope, true);
  }
  const int num_policies = uniform(rng, 1, std::max(1, cfg.max_policies));
  for (int p = 0; p < num_policies; ++p) {
    std::vector<Param> scope;
    const int depth = p == 0 ? cfg.max_formula_depth : uniform(rng, 0, cfg.max_formula_depth);
    spec.policies.push_back(PolicyDecl{"p" + std::to_string(p), gen.gen(depth, scope, false), {}});
  }
  return spec;
}

std::vector<GroundAtom> ground_event_atoms(const PolicySpec& spec) {
  std::vector<GroundAtom> universe;
  for (const auto& p : spec.predicates) {
    if (p.kind != PredicateKind::kEvent) continue;
    std::vector<std::vector<std::string>> tuples{{}};
    for (const auto& sort : p.arg_sorts) {
      std::vector<std::vector<std::string>> longer;
      for (const auto& t : tuples) {
        for (const auto& c : spec.domain(sort)) {
          auto u = t;
          u.push_back(c);
          longer.push_back(std::move(u));
        }
      }
      tuples = std::move(longer);
    }
    for (auto& t : tuples) universe.push_back(GroundAtom{p.name, std::move(t)});
  }
  return universe;
}

Trace gen_trace(const GenConfig& cfg, const PolicySpec& spec) {
  Rng rng(cfg.seed ^ 0x5deece66dULL);
  const std::vector<GroundAtom> universe = ground_event_atoms(spec);
  Trace trace;
  Timestamp ts = 0;
  std::uniform_int_distribution<Timestamp> gap(0, std::max<Timestamp>(0, cfg.max_ts_gap));
  for (std::size_t i = 0; i < cfg.trace_length; ++i) {
    if (i > 0) ts += gap(rng);
    std::vector<GroundAtom> atoms;
    for (const auto& a : universe) {
      if (coin(rng, cfg.event_density)) atoms.push_back(a);
    }
    trace.emplace_back(ts, std::move(atoms));
  }
  return trace;
}

GenConfig fuzz_config(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.max_formula_depth = 5;
  cfg.max_bound = 8;
  cfg.domain_sizes = {3, 3};
  cfg.trace_length = 50;
  cfg.max_ts_gap = 4;
  cfg.event_density = 0.4;
  return cfg;
}

GenConfig trial_config(const GenConfig& base, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base.seed), static_cast<std::uint32_t>(base.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  Rng rng(seq);
  GenConfig cfg = base;
  cfg.seed = rng();
  cfg.max_formula_depth = uniform(rng, 0, base.max_formula_depth);
  cfg.max_bound = std::uniform_int_distribution<Timestamp>(1, base.max_bound)(rng);
  cfg.domain_sizes.assign(static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(base.domain_sizes.size()))), 1);
  for (std::size_t s = 0; s < cfg.domain_sizes.size(); ++s) {
    cfg.domain_sizes[s] = uniform(rng, 1, base.domain_sizes[s]);
  }
  cfg.trace_length = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(base.trace_length)));
  cfg.max_ts_gap = std::uniform_int_distribution<Timestamp>(0, base.max_ts_gap)(rng);
  cfg.event_density = std::uniform_real_distribution<double>(0.05, base.event_density)(rng);
  return cfg;
}

namespace {

struct GuardSite {
  std::size_t def;
  std::vector<std::size_t> path;  // child positions from the body root to the guard
};

void find_sites(const Formula& f, int guards, std::vector<std::size_t>& path,
                std::vector<std::size_t>& last_guard, std::size_t def,
                std::vector<GuardSite>& out) {
  if (f.op() == Op::kDefAtom) {
    if (guards == 1) out.push_back(GuardSite{def, last_guard});
    return;
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    path.push_back(i);
    if (is_guard(f.op())) {
      std::vector<std::size_t> saved = last_guard;
      last_guard.assign(path.begin(), path.end() - 1);
      find_sites(f.child(i), guards + 1, path, last_guard, def, out);
      last_guard = std::move(saved);
    } else {
      find_sites(f.child(i), guards, path, last_guard, def, out);
    }
    path.pop_back();
  }
}

Formula rebuild_with(const Formula& f, std::size_t i, Formula replacement) {
  if (f.op() == Op::kExists) return Formula::exists(f.name(), f.sort(), std::move(replacement));
  if (is_unary(f.op())) return Formula::unary(f.op(), f.bound(), std::move(replacement));
  if (i == 0) return Formula::binary(f.op(), f.bound(), std::move(replacement), f.right());
  return Formula::binary(f.op(), f.bound(), f.left(), std::move(replacement));
}

Formula strip_at(const Formula& f, std::span<const std::size_t> path) {
  if (path.empty()) return f.child();  // f is the guard
  return rebuild_with(f, path[0], strip_at(f.child(path[0]), path.subspan(1)));
}

}  // namespace

std::optional<PolicySpec> strip_one_guard(const PolicySpec& spec, std::uint64_t pick) {
  std::vector<GuardSite> sites;
  for (std::size_t d = 0; d < spec.defs.size(); ++d) {
    std::vector<std::size_t> path;
    std::vector<std::size_t> last_guard;
    find_sites(spec.defs[d].body, 0, path, last_guard, d, sites);
  }
  if (sites.empty()) return std::nullopt;
  const GuardSite& site = sites[pick % sites.size()];
  PolicySpec out = spec;
  out.defs[site.def].body = strip_at(spec.defs[site.def].body, site.path);
  return out;
}

PolicySpec escalation_spec(std::size_t apps, Timestamp window) {
  std::string text = "sort app\nconst ";
  for (std::size_t k = 1; k < apps; ++k) text += "app" + std::to_string(k) + ", ";
  text += "sink : app\n";
  text +=
      "event call(app, app)\n"
      "static system(app)\n"
      "static hasPermissionToSink(app)\n"
      "def trans(x:app, y:app) := call(x,y) or exists z:app. earlier[" +
      std::to_string(window) +
      "] trans(x,z) and call(z,y)\n";
  if (apps > 2) text += "fact hasPermissionToSink(app2)\n";
  text += "policy policy2 := exists x:app. trans(x,sink) and not system(x) and not hasPermissionToSink(x)\n";
  return parse_policy(SourcePolicy{text, "<escalation>"});
}

}  // namespace rmtl
