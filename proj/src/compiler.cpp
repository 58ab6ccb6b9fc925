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

#include "rmtl/compiler.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <sstream>

#include "rmtl/dsl.hpp"

namespace rmtl {

std::optional<NodeIndex> CompiledPolicy::find(const Formula& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeIndex> CompiledPolicy::root(const std::string& policy) const {
  for (const auto& r : roots) {
    if (r.name == policy) return r.index;
  }
  return std::nullopt;
}

Formula normalize(const Formula& f, const PolicySpec& spec) {
  switch (f.op()) {
    case Op::kBot:
    case Op::kAtom:
    case Op::kDefAtom:
      return f;
    case Op::kOnce:
      return Formula::since(Formula::top(), normalize(f.child(), spec));
    case Op::kOnceM:
      return Formula::since(f.bound(), Formula::top(), normalize(f.child(), spec));
    case Op::kExists: {
      std::optional<Formula> acc;
      for (const auto& c : spec.domain(f.sort())) {
        Formula inst =
            normalize(substitute(f.child(), {{f.name(), Term::constant(c, f.sort())}}), spec);
        acc = acc ? Formula::disj(*acc, inst) : inst;
      }
      return acc.value_or(Formula::bot());
    }
    default:
      break;
  }
  if (is_unary(f.op())) {
    return Formula::unary(f.op(), f.bound(), normalize(f.child(), spec));
  }
  return Formula::binary(f.op(), f.bound(), normalize(f.left(), spec),
                         normalize(f.right(), spec));
}

std::vector<NodeIndex> same_world_operands(const TableNode& node) {
  switch (node.op) {
    case Op::kNeg:
    case Op::kDefAtom:
      return {node.operands[0]};
    case Op::kOr:
    case Op::kSince:
    case Op::kSinceM:
      return {node.operands[0], node.operands[1]};
    default:
      return {};
  }
}

namespace {

class TableBuilder {
 public:
  explicit TableBuilder(const PolicySpec& spec) : spec_(spec) {}

  NodeIndex intern(const Formula& f) {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    TableNode node;
    node.op = f.op();
    node.bound = f.bound();
    for (std::size_t i = 0; i < f.num_children(); ++i) {
      node.operands[i] = intern(f.child(i));
    }
    node.formula = f;
    if (f.op() == Op::kAtom) {
      const PredicateDecl* decl = spec_.find_predicate(f.name());
      node.is_static = decl != nullptr && decl->kind == PredicateKind::kStatic;
      if (node.is_static) node.static_value = spec_.static_facts.count(to_ground_atom(f)) > 0;
    }
    const auto idx = static_cast<NodeIndex>(nodes_.size());
    nodes_.push_back(std::move(node));
    index_.emplace(f, idx);
    if (f.op() == Op::kDefAtom) pending_.push_back(idx);
    return idx;
  }

  void close() {
    while (!pending_.empty()) {
      const NodeIndex idx = pending_.front();
      pending_.pop_front();
      const Formula atom = nodes_[idx].formula;
      const RecursiveDef* def = spec_.find_def(atom.name());
      Binding binding;
      for (std::size_t k = 0; k < def->params.size(); ++k) {
        binding.emplace(def->params[k].name, atom.args().at(k));
      }
      const NodeIndex body = intern(normalize(substitute(def->body, binding), spec_));
      nodes_[idx].operands[0] = body;
    }
  }

  // Kahn's algorithm; among ready nodes the earliest discovered goes first.
  std::vector<NodeIndex> order() const {
    const std::size_t n = nodes_.size();
    std::vector<std::size_t> missing(n, 0);
    std::vector<std::vector<NodeIndex>> users(n);
    for (NodeIndex v = 0; v < n; ++v) {
      for (NodeIndex u : same_world_operands(nodes_[v])) {
        ++missing[v];
        users[u].push_back(v);
      }
    }
    std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
    for (NodeIndex v = 0; v < n; ++v) {
      if (missing[v] == 0) ready.push(v);
    }
    std::vector<NodeIndex> out;
    out.reserve(n);
    while (!ready.empty()) {
      const NodeIndex v = ready.top();
      ready.pop();
      out.push_back(v);
      for (NodeIndex w : users[v]) {
        if (--missing[w] == 0) ready.push(w);
      }
    }
    if (out.size() != n) {
      for (NodeIndex v = 0; v < n; ++v) {
        if (missing[v] != 0) {
          throw CycleDetected("same-world dependency cycle through " +
                              print_formula(nodes_[v].formula));
        }
      }
    }
    return out;
  }

  std::vector<TableNode>& nodes() { return nodes_; }

 private:
  const PolicySpec& spec_;
  std::vector<TableNode> nodes_;
  std::unordered_map<Formula, NodeIndex, FormulaHash> index_;
  std::deque<NodeIndex> pending_;
};

}  // namespace

CompiledPolicy compile(const PolicySpec& spec) {
  if (auto diags = validate(spec); !diags.empty()) throw PolicyError(std::move(diags));

  TableBuilder builder(spec);
  std::vector<NodeIndex> raw_roots;
  for (const auto& p : spec.policies) {
    raw_roots.push_back(builder.intern(normalize(p.formula, spec)));
  }
  builder.close();
  const std::vector<NodeIndex> order = builder.order();

  std::vector<NodeIndex> renumber(order.size());
  for (NodeIndex pos = 0; pos < order.size(); ++pos) renumber[order[pos]] = pos;

  CompiledPolicy cp;
  cp.spec = std::make_shared<const PolicySpec>(spec);
  cp.table.reserve(order.size());
  for (NodeIndex old : order) {
    TableNode node = std::move(builder.nodes()[old]);
    const std::size_t used = node.op == Op::kDefAtom || is_unary(node.op) ? 1
                             : is_binary(node.op)                         ? 2
                                                                          : 0;
    for (std::size_t k = 0; k < used; ++k) node.operands[k] = renumber[node.operands[k]];
    cp.table.push_back(std::move(node));
  }
  for (std::size_t k = 0; k < spec.policies.size(); ++k) {
    cp.roots.push_back(PolicyRoot{spec.policies[k].name, renumber[raw_roots[k]]});
  }
  for (NodeIndex k = 0; k < cp.table.size(); ++k) {
    const TableNode& node = cp.table[k];
    for (NodeIndex u : same_world_operands(node)) {
      if (u >= k) {
        throw std::logic_error("table order violated at node " + std::to_string(k));
      }
    }
    cp.index_.emplace(node.formula, k);
    if (node.op == Op::kAtom) {
      cp.atom_nodes.push_back(k);
      if (!node.is_static) cp.event_atoms.emplace(to_ground_atom(node.formula), k);
    }
  }
  return cp;
}

std::string dump_table(const CompiledPolicy& cp) {
  std::ostringstream os;
  os << "# " << cp.table.size() << " nodes\n";
  for (NodeIndex k = 0; k < cp.table.size(); ++k) {
    const TableNode& node = cp.table[k];
    os << k << ": " << op_name(node.op);
    const std::size_t used = node.op == Op::kDefAtom || is_unary(node.op) ? 1
                             : is_binary(node.op)                         ? 2
                                                                          : 0;
    for (std::size_t i = 0; i < used; ++i) os << ' ' << node.operands[i];
    if (is_metric(node.op)) os << " n=" << node.bound;
    if (node.is_static) os << " static=" << (node.static_value ? "true" : "false");
    os << " | " << print_formula(node.formula) << '\n';
  }
  for (const auto& r : cp.roots) os << "root " << r.name << " = " << r.index << '\n';
  return os.str();
}

}  // namespace rmtl
