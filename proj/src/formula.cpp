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

#include "rmtl/formula.hpp"

#include <cassert>
#include <utility>

namespace rmtl {
namespace {

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

struct Formula::Node {
  Op op = Op::kBot;
  std::string name;
  std::string sort;
  std::vector<Term> args;
  Timestamp bound = 0;
  std::vector<Formula> kids;
  SourceLoc loc;
  std::size_t hash = 0;
};

std::string to_string(const GroundAtom& atom) {
  std::string out = atom.pred;
  if (!atom.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i > 0) out += ',';
      out += atom.args[i];
    }
    out += ')';
  }
  return out;
}

std::size_t GroundAtomHash::operator()(const GroundAtom& atom) const noexcept {
  std::size_t seed = std::hash<std::string>{}(atom.pred);
  for (const auto& a : atom.args) hash_combine(seed, std::hash<std::string>{}(a));
  return seed;
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::kBot: return "Bot";
    case Op::kAtom: return "Atom";
    case Op::kDefAtom: return "DefAtom";
    case Op::kNeg: return "Neg";
    case Op::kOr: return "Or";
    case Op::kPrev: return "Prev";
    case Op::kPrevM: return "PrevM";
    case Op::kSince: return "Since";
    case Op::kSinceM: return "SinceM";
    case Op::kOnce: return "Once";
    case Op::kOnceM: return "OnceM";
    case Op::kEarlier: return "Earlier";
    case Op::kEarlierM: return "EarlierM";
    case Op::kExists: return "Exists";
  }
  return "?";
}

Formula Formula::make(Node node) {
  std::size_t h = static_cast<std::size_t>(node.op) * 0x100000001b3ULL;
  hash_combine(h, std::hash<std::string>{}(node.name));
  hash_combine(h, std::hash<std::string>{}(node.sort));
  for (const auto& t : node.args) {
    hash_combine(h, std::hash<std::string>{}(t.name));
    hash_combine(h, static_cast<std::size_t>(t.kind));
  }
  hash_combine(h, std::hash<Timestamp>{}(node.bound));
  for (const auto& k : node.kids) hash_combine(h, k.hash());
  node.hash = h;
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula::Formula() {
  static const std::shared_ptr<const Node> kBot = [] {
    Node n;
    n.op = Op::kBot;
    n.hash = 0x2545f4914f6cdd1dULL;
    return std::make_shared<const Node>(std::move(n));
  }();
  node_ = kBot;
}

Formula Formula::bot() { return Formula(); }
Formula Formula::top() { return neg(bot()); }

Formula Formula::predicate(Op op, std::string pred, std::vector<Term> args) {
  assert(op == Op::kAtom || op == Op::kDefAtom);
  Node n;
  n.op = op;
  n.name = std::move(pred);
  n.args = std::move(args);
  return make(std::move(n));
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  return predicate(Op::kAtom, std::move(pred), std::move(args));
}

Formula Formula::def_atom(std::string pred, std::vector<Term> args) {
  return predicate(Op::kDefAtom, std::move(pred), std::move(args));
}

Formula Formula::unary(Op op, Timestamp bound, Formula child) {
  assert(is_unary(op));
  Node n;
  n.op = op;
  n.bound = is_metric(op) ? bound : 0;
  n.kids.push_back(std::move(child));
  return make(std::move(n));
}

Formula Formula::binary(Op op, Timestamp bound, Formula left, Formula right) {
  assert(is_binary(op));
  Node n;
  n.op = op;
  n.bound = is_metric(op) ? bound : 0;
  n.kids.push_back(std::move(left));
  n.kids.push_back(std::move(right));
  return make(std::move(n));
}

Formula Formula::neg(Formula f) { return unary(Op::kNeg, 0, std::move(f)); }
Formula Formula::disj(Formula a, Formula b) {
  return binary(Op::kOr, 0, std::move(a), std::move(b));
}
Formula Formula::conj(Formula a, Formula b) {
  return neg(disj(neg(std::move(a)), neg(std::move(b))));
}
Formula Formula::implies(Formula a, Formula b) {
  return disj(neg(std::move(a)), std::move(b));
}
Formula Formula::prev(Formula f) { return unary(Op::kPrev, 0, std::move(f)); }
Formula Formula::prev(Timestamp bound, Formula f) {
  return unary(Op::kPrevM, bound, std::move(f));
}
Formula Formula::since(Formula a, Formula b) {
  return binary(Op::kSince, 0, std::move(a), std::move(b));
}
Formula Formula::since(Timestamp bound, Formula a, Formula b) {
  return binary(Op::kSinceM, bound, std::move(a), std::move(b));
}
Formula Formula::once(Formula f) { return unary(Op::kOnce, 0, std::move(f)); }
Formula Formula::once(Timestamp bound, Formula f) {
  return unary(Op::kOnceM, bound, std::move(f));
}
Formula Formula::earlier(Formula f) {
  return unary(Op::kEarlier, 0, std::move(f));
}
Formula Formula::earlier(Timestamp bound, Formula f) {
  return unary(Op::kEarlierM, bound, std::move(f));
}

Formula Formula::exists(std::string var, std::string sort, Formula body) {
  Node n;
  n.op = Op::kExists;
  n.name = std::move(var);
  n.sort = std::move(sort);
  n.kids.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::forall(std::string var, std::string sort, Formula body) {
  return neg(exists(std::move(var), std::move(sort), neg(std::move(body))));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const std::string& Formula::sort() const { return node_->sort; }
const std::vector<Term>& Formula::args() const { return node_->args; }
Timestamp Formula::bound() const { return node_->bound; }
const Formula& Formula::child() const { return node_->kids.at(0); }
const Formula& Formula::left() const { return node_->kids.at(0); }
const Formula& Formula::right() const { return node_->kids.at(1); }
std::size_t Formula::num_children() const { return node_->kids.size(); }
const Formula& Formula::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Formula::hash() const { return node_->hash; }
SourceLoc Formula::loc() const { return node_->loc; }

Formula Formula::with_loc(SourceLoc loc) const {
  Node copy = *node_;
  copy.loc = loc;
  return Formula(std::make_shared<const Node>(std::move(copy)));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || x.bound != y.bound ||
      x.name != y.name || x.sort != y.sort || x.args != y.args ||
      x.kids.size() != y.kids.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (!(x.kids[i] == y.kids[i])) return false;
  }
  return true;
}

Formula substitute(const Formula& f, const Binding& binding) {
  if (binding.empty()) return f;
  switch (f.op()) {
    case Op::kBot:
      return f;
    case Op::kAtom:
    case Op::kDefAtom: {
      std::vector<Term> args = f.args();
      bool changed = false;
      for (auto& t : args) {
        if (!t.is_variable()) continue;
        auto it = binding.find(t.name);
        if (it == binding.end()) continue;
        if (it->second.sort != t.sort) {
          throw SortError("cannot substitute " + it->second.name + " : " +
                          it->second.sort + " for variable " + t.name + " : " +
                          t.sort);
        }
        t = it->second;
        changed = true;
      }
      if (!changed) return f;
      return Formula::predicate(f.op(), f.name(), std::move(args))
          .with_loc(f.loc());
    }
    case Op::kExists: {
      if (binding.count(f.name()) == 0) {
        return Formula::exists(f.name(), f.sort(),
                               substitute(f.child(), binding))
            .with_loc(f.loc());
      }
      Binding inner = binding;
      inner.erase(f.name());
      return Formula::exists(f.name(), f.sort(), substitute(f.child(), inner))
          .with_loc(f.loc());
    }
    default:
      break;
  }
  if (is_unary(f.op())) {
    return Formula::unary(f.op(), f.bound(), substitute(f.child(), binding))
        .with_loc(f.loc());
  }
  return Formula::binary(f.op(), f.bound(), substitute(f.left(), binding),
                         substitute(f.right(), binding))
      .with_loc(f.loc());
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.op()) {
    case Op::kAtom:
    case Op::kDefAtom:
      for (const auto& t : f.args()) {
        if (t.is_variable() && bound.count(t.name) == 0) out.insert(t.name);
      }
      return;
    case Op::kExists: {
      const bool shadowing = bound.count(f.name()) > 0;
      bound.insert(f.name());
      collect_free(f.child(), bound, out);
      if (!shadowing) bound.erase(f.name());
      return;
    }
    default:
      for (std::size_t i = 0; i < f.num_children(); ++i) {
        collect_free(f.child(i), bound, out);
      }
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_ground(const Formula& f) {
  if (f.op() == Op::kExists) return false;
  if (f.op() == Op::kAtom || f.op() == Op::kDefAtom) {
    for (const auto& t : f.args()) {
      if (t.is_variable()) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    if (!is_ground(f.child(i))) return false;
  }
  return true;
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.num_children(); ++i) n += formula_size(f.child(i));
  return n;
}

std::size_t formula_depth(const Formula& f) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    d = std::max(d, formula_depth(f.child(i)));
  }
  return d + 1;
}

GroundAtom to_ground_atom(const Formula& atom) {
  GroundAtom out;
  out.pred = atom.name();
  out.args.reserve(atom.args().size());
  for (const auto& t : atom.args()) {
    if (t.is_variable()) {
      throw SortError("atom " + atom.name() + " has unbound variable " + t.name);
    }
    out.args.push_back(t.name);
  }
  return out;
}

}  // namespace rmtl
