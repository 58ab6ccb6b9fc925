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

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

#include "rmtl/policy_spec.hpp"
#include "rmtl/trace.hpp"

namespace rmtl {

class TraceError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t {
    kMalformedLine,
    kNonMonotoneTimestamp,
    kUnknownPredicate,
    kUnknownConstant,
  };

  TraceError(Kind kind, std::size_t line, const std::string& what);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Pulls one world per JSON line:
///   {"ts": <int>, "events": [{"pred": <str>, "args": [<str>...]}...]}
/// Blank lines are skipped. Only the current line is buffered. With a spec,
/// atoms must use declared event predicates with in-domain constants of the
/// right sorts.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in, const PolicySpec* spec = nullptr)
      : in_(in), spec_(spec) {}

  std::optional<TimedState> next();

  /// 1-based number of the last line read.
  std::size_t line() const { return line_; }

 private:
  TimedState parse_line(const std::string& text) const;
  void check_atom(const GroundAtom& atom) const;

  std::istream& in_;
  const PolicySpec* spec_;
  std::string buffer_;
  std::size_t line_ = 0;
  std::optional<Timestamp> last_ts_;
};

/// Reads a whole trace; for tests and the oracle, which needs it all anyway.
Trace read_trace(std::istream& in, const PolicySpec* spec = nullptr);
Trace load_trace_file(const std::string& path, const PolicySpec* spec = nullptr);

/// One canonical JSON line (atoms sorted, no trailing newline).
std::string to_json_line(const TimedState& state);

void write_trace(std::ostream& out, std::span<const TimedState> trace);

}  // namespace rmtl
