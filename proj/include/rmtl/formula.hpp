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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rmtl {

/// Line/column of a construct in policy source text. Zero means "synthesized".
struct SourceLoc {
  int line = 0;
  int column = 0;
};

using Timestamp = std::int64_t;

struct Term {
  enum class Kind : std::uint8_t { kConstant, kVariable };

  Kind kind = Kind::kConstant;
  std::string name;
  std::string sort;

  static Term constant(std::string name, std::string sort) {
    return Term{Kind::kConstant, std::move(name), std::move(sort)};
  }
  static Term variable(std::string name, std::string sort) {
    return Term{Kind::kVariable, std::move(name), std::move(sort)};
  }

  bool is_variable() const { return kind == Kind::kVariable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

/// A variable-free atom `pred(c1,...,cn)`; the unit of a trace state.
struct GroundAtom {
  std::string pred;
  std::vector<std::string> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

std::string to_string(const GroundAtom& atom);

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& atom) const noexcept;
};

// Connectives kept in the abstract syntax. And, Implies, Top and Forall are
// sugar and never appear as nodes.
enum class Op : std::uint8_t {
  kBot,
  kAtom,
  kDefAtom,
  kNeg,
  kOr,
  kPrev,
  kPrevM,
  kSince,
  kSinceM,
  kOnce,
  kOnceM,
  kEarlier,
  kEarlierM,
  kExists,
};

std::string_view op_name(Op op);

/// Operators carrying a metric bound n, meaning the interval [0, n).
constexpr bool is_metric(Op op) {
  return op == Op::kPrevM || op == Op::kSinceM || op == Op::kOnceM ||
         op == Op::kEarlierM;
}

/// Operators that look strictly into earlier worlds.
constexpr bool is_guard(Op op) {
  return op == Op::kPrev || op == Op::kPrevM || op == Op::kEarlier ||
         op == Op::kEarlierM;
}

constexpr bool is_binary(Op op) {
  return op == Op::kOr || op == Op::kSince || op == Op::kSinceM;
}

constexpr bool is_unary(Op op) {
  return op == Op::kNeg || op == Op::kPrev || op == Op::kPrevM ||
         op == Op::kOnce || op == Op::kOnceM || op == Op::kEarlier ||
         op == Op::kEarlierM;
}

/// Immutable, structurally shared formula tree.
///
/// Equality and hashing are structural and ignore source locations. Copies
/// are cheap (one shared pointer), so formulas are passed by value.
class Formula {
 public:
  Formula();

  static Formula bot();
  static Formula top();
  static Formula atom(std::string pred, std::vector<Term> args);
  static Formula def_atom(std::string pred, std::vector<Term> args);
  static Formula neg(Formula f);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula prev(Formula f);
  static Formula prev(Timestamp bound, Formula f);
  static Formula since(Formula a, Formula b);
  static Formula since(Timestamp bound, Formula a, Formula b);
  static Formula once(Formula f);
  static Formula once(Timestamp bound, Formula f);
  static Formula earlier(Formula f);
  static Formula earlier(Timestamp bound, Formula f);
  static Formula exists(std::string var, std::string sort, Formula body);
  static Formula forall(std::string var, std::string sort, Formula body);

  // Generic builders used by rewriting passes.
  static Formula unary(Op op, Timestamp bound, Formula child);
  static Formula binary(Op op, Timestamp bound, Formula left, Formula right);
  static Formula predicate(Op op, std::string pred, std::vector<Term> args);

  Op op() const;
  /// Predicate name for atoms, bound variable for Exists.
  const std::string& name() const;
  /// Sort of the bound variable for Exists.
  const std::string& sort() const;
  const std::vector<Term>& args() const;
  Timestamp bound() const;

  const Formula& child() const;
  const Formula& left() const;
  const Formula& right() const;
  std::size_t num_children() const;
  const Formula& child(std::size_t i) const;

  std::size_t hash() const;
  SourceLoc loc() const;
  Formula with_loc(SourceLoc loc) const;

  /// Same node object; a fast path before structural comparison.
  bool same_node(const Formula& other) const { return node_ == other.node_; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Node node);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using Binding = std::map<std::string, Term>;

/// Replaces free occurrences of the bound variables with their terms.
/// Quantifiers shadow: a variable rebound by an inner Exists is left alone.
/// Throws SortError when a term's sort differs from the variable's.
Formula substitute(const Formula& f, const Binding& binding);

std::set<std::string> free_variables(const Formula& f);
bool is_ground(const Formula& f);
std::size_t formula_size(const Formula& f);
std::size_t formula_depth(const Formula& f);

/// Converts a variable-free atom to its ground form.
GroundAtom to_ground_atom(const Formula& atom);

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmtl
