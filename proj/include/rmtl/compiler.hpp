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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmtl/formula.hpp"
#include "rmtl/policy_spec.hpp"

namespace rmtl {

using NodeIndex = std::uint32_t;

/// One ground subformula of the evaluation table.
///
/// `operands` hold table indices: the child for unary kinds, left/right for
/// Or and Since, and the instantiated body for DefAtom.
struct TableNode {
  Op op = Op::kBot;
  std::array<NodeIndex, 2> operands{0, 0};
  Timestamp bound = 0;
  Formula formula;
  bool is_static = false;
  bool static_value = false;
};

struct PolicyRoot {
  std::string name;
  NodeIndex index = 0;
};

/// Flat evaluation table for a set of policies.
///
/// Every same-world dependency of a node (operands of Neg, Or, Since and the
/// body of a DefAtom) has a strictly smaller index. Operands of prev and
/// earlier nodes only need the previous world and may sit anywhere.
struct CompiledPolicy {
  std::vector<TableNode> table;
  std::vector<PolicyRoot> roots;
  /// Indices of all Atom nodes, ascending.
  std::vector<NodeIndex> atom_nodes;
  std::unordered_map<GroundAtom, NodeIndex, GroundAtomHash> event_atoms;
  std::shared_ptr<const PolicySpec> spec;

  std::optional<NodeIndex> find(const Formula& f) const;
  std::optional<NodeIndex> root(const std::string& policy) const;

 private:
  friend CompiledPolicy compile(const PolicySpec& spec);
  std::unordered_map<Formula, NodeIndex, FormulaHash> index_;
};

/// The table's dependency graph had a same-world cycle. Unreachable for
/// validated specs.
class CycleDetected : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rewrites once/once[n] into since with a `true` left operand and expands
/// quantifiers into disjunctions over the sort domain (an empty domain gives
/// false). earlier and earlier[n] are kept.
Formula normalize(const Formula& f, const PolicySpec& spec);

/// Validates, grounds and orders. Throws PolicyError on invalid specs.
CompiledPolicy compile(const PolicySpec& spec);

/// Same-world dependencies of a node.
std::vector<NodeIndex> same_world_operands(const TableNode& node);

/// Line-oriented listing, one node per line followed by the roots.
std::string dump_table(const CompiledPolicy& cp);

}  // namespace rmtl
