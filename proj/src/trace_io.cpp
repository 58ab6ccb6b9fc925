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

#include "rmtl/trace_io.hpp"

#include <fstream>

#include "json.hpp"

namespace rmtl {

using json = nlohmann::json;

TraceError::TraceError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      kind_(kind),
      line_(line) {}

std::optional<TimedState> TraceReader::next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (buffer_.find_first_not_of(" \t\r") == std::string::npos) continue;
    TimedState state = parse_line(buffer_);
    if (last_ts_ && state.ts < *last_ts_) {
      throw TraceError(TraceError::Kind::kNonMonotoneTimestamp, line_,
                       "timestamp " + std::to_string(state.ts) + " precedes " +
                           std::to_string(*last_ts_));
    }
    last_ts_ = state.ts;
    return state;
  }
  return std::nullopt;
}

TimedState TraceReader::parse_line(const std::string& text) const {
  auto malformed = [&](const std::string& why) {
    return TraceError(TraceError::Kind::kMalformedLine, line_, why);
  };
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw malformed("not valid JSON");
  if (!doc.is_object()) throw malformed("expected a JSON object");
  auto ts = doc.find("ts");
  if (ts == doc.end() || !ts->is_number_integer()) {
    throw malformed("\"ts\" must be an integer");
  }
  if (ts->is_number_unsigned() ? false : ts->get<std::int64_t>() < 0) {
    throw malformed("\"ts\" must be non-negative");
  }
  if (ts->is_number_unsigned() &&
      ts->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw malformed("\"ts\" out of range");
  }
  auto events = doc.find("events");
  if (events == doc.end() || !events->is_array()) {
    throw malformed("\"events\" must be an array");
  }
  std::vector<GroundAtom> atoms;
  atoms.reserve(events->size());
  for (const auto& e : *events) {
    if (!e.is_object()) throw malformed("event must be an object");
    auto pred = e.find("pred");
    auto args = e.find("args");
    if (pred == e.end() || !pred->is_string()) throw malformed("event needs string \"pred\"");
    GroundAtom atom{pred->get<std::string>(), {}};
    if (args != e.end()) {
      if (!args->is_array()) throw malformed("\"args\" must be an array");
      for (const auto& a : *args) {
        if (!a.is_string()) throw malformed("event arguments must be strings");
        atom.args.push_back(a.get<std::string>());
      }
    }
    check_atom(atom);
    atoms.push_back(std::move(atom));
  }
  return TimedState(ts->get<std::int64_t>(), std::move(atoms));
}

void TraceReader::check_atom(const GroundAtom& atom) const {
  if (spec_ == nullptr) return;
  const PredicateDecl* decl = spec_->find_predicate(atom.pred);
  if (decl == nullptr || decl->kind != PredicateKind::kEvent) {
    throw TraceError(TraceError::Kind::kUnknownPredicate, line_,
                     "'" + atom.pred + "' is not a declared event predicate");
  }
  if (decl->arg_sorts.size() != atom.args.size()) {
    throw TraceError(TraceError::Kind::kMalformedLine, line_,
                     "'" + atom.pred + "' expects " +
                         std::to_string(decl->arg_sorts.size()) + " argument(s)");
  }
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    auto sort = spec_->sort_of_constant(atom.args[i]);
    if (!sort || *sort != decl->arg_sorts[i]) {
      throw TraceError(TraceError::Kind::kUnknownConstant, line_,
                       "'" + atom.args[i] + "' is not a constant of sort " +
                           decl->arg_sorts[i]);
    }
  }
}

Trace read_trace(std::istream& in, const PolicySpec* spec) {
  TraceReader reader(in, spec);
  Trace out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

Trace load_trace_file(const std::string& path, const PolicySpec* spec) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  return read_trace(in, spec);
}

std::string to_json_line(const TimedState& state) {
  std::vector<GroundAtom> atoms = state.atoms;
  canonicalize(atoms);
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& a : atoms) {
    nlohmann::ordered_json e;
    e["pred"] = a.pred;
    e["args"] = a.args;
    events.push_back(std::move(e));
  }
  nlohmann::ordered_json doc;
  doc["ts"] = state.ts;
  doc["events"] = std::move(events);
  return doc.dump();
}

void write_trace(std::ostream& out, std::span<const TimedState> trace) {
  for (const auto& s : trace) out << to_json_line(s) << '\n';
}

}  // namespace rmtl
