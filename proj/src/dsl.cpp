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

#include "rmtl/dsl.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace rmtl {
namespace {

enum class Tok : std::uint8_t {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kColon,
  kDot,
  kDefine,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> kKeywords = {
      "not",   "and",   "or",     "implies", "prev",  "since", "once",
      "earlier", "exists", "forall", "true",  "false", "sort",  "const",
      "event", "static", "fact",  "def",     "policy"};
  return kKeywords;
}

[[noreturn]] void syntax_error(SourceLoc loc, const std::string& msg) {
  throw PolicyError({Diagnostic{DiagCode::kSyntax, msg, loc}});
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::kNumber, std::string(text.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Tok::kDefine, ":=", loc});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '[': kind = Tok::kLBracket; break;
      case ']': kind = Tok::kRBracket; break;
      case ',': kind = Tok::kComma; break;
      case ':': kind = Tok::kColon; break;
      case '.': kind = Tok::kDot; break;
      default:
        syntax_error(loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), loc});
    advance(1);
  }
  out.push_back({Tok::kEnd, "", SourceLoc{line, col}});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  PolicySpec parse_file() {
    PolicySpec spec;
    while (peek().kind != Tok::kEnd) parse_decl(spec);
    return spec;
  }

  Formula parse_lone_formula(std::vector<Param> scope) {
    scope_ = std::move(scope);
    Formula f = parse_formula();
    expect(Tok::kEnd, "end of formula");
    return f;
  }

  std::vector<Diagnostic>& late_diagnostics() { return late_; }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::kIdent && peek().text == kw;
  }

  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      syntax_error(peek().loc, "expected " + what + ", found " + describe(peek()));
    }
    return next();
  }

  std::string expect_name(const std::string& what) {
    const Token& t = expect(Tok::kIdent, what);
    if (keywords().count(t.text) > 0) {
      syntax_error(t.loc, "expected " + what + ", found keyword '" + t.text + "'");
    }
    return t.text;
  }

  void parse_decl(PolicySpec& spec) {
    const Token& head = peek();
    if (head.kind != Tok::kIdent) {
      syntax_error(head.loc, "expected a declaration, found " + describe(head));
    }
    const SourceLoc loc = head.loc;
    if (accept_keyword("sort")) {
      spec.sorts.push_back(SortDecl{expect_name("sort name"), {}, loc});
    } else if (accept_keyword("const")) {
      std::vector<std::string> names{expect_name("constant name")};
      while (peek().kind == Tok::kComma) {
        next();
        names.push_back(expect_name("constant name"));
      }
      expect(Tok::kColon, "':'");
      const SourceLoc sort_loc = peek().loc;
      const std::string sort = expect_name("sort name");
      SortDecl* decl = nullptr;
      for (auto& s : spec.sorts) {
        if (s.name == sort) decl = &s;
      }
      if (decl == nullptr) {
        late_.push_back({DiagCode::kUnknownSymbol,
                         "constant declared with unknown sort '" + sort + "'", sort_loc});
        return;
      }
      for (auto& n : names) decl->constants.push_back(std::move(n));
    } else if (accept_keyword("event") || accept_keyword("static")) {
      const PredicateKind kind =
          toks_[pos_ - 1].text == "event" ? PredicateKind::kEvent : PredicateKind::kStatic;
      PredicateDecl decl{expect_name("predicate name"), {}, kind, loc};
      if (peek().kind == Tok::kLParen) {
        next();
        if (peek().kind != Tok::kRParen) {
          decl.arg_sorts.push_back(expect_name("sort name"));
          while (peek().kind == Tok::kComma) {
            next();
            decl.arg_sorts.push_back(expect_name("sort name"));
          }
        }
        expect(Tok::kRParen, "')'");
      }
      spec.predicates.push_back(std::move(decl));
    } else if (accept_keyword("fact")) {
      GroundAtom atom{expect_name("predicate name"), {}};
      if (peek().kind == Tok::kLParen) {
        next();
        if (peek().kind != Tok::kRParen) {
          atom.args.push_back(expect_name("constant"));
          while (peek().kind == Tok::kComma) {
            next();
            atom.args.push_back(expect_name("constant"));
          }
        }
        expect(Tok::kRParen, "')'");
      }
      spec.static_facts.insert(std::move(atom));
    } else if (accept_keyword("def")) {
      RecursiveDef def;
      def.loc = loc;
      def.head = expect_name("predicate name");
      if (peek().kind == Tok::kLParen) {
        next();
        if (peek().kind != Tok::kRParen) {
          def.params.push_back(parse_param());
          while (peek().kind == Tok::kComma) {
            next();
            def.params.push_back(parse_param());
          }
        }
        expect(Tok::kRParen, "')'");
      }
      expect(Tok::kDefine, "':='");
      scope_ = def.params;
      def.body = parse_formula();
      scope_.clear();
      const PredicateDecl* existing = spec.find_predicate(def.head);
      if (existing == nullptr || existing->kind != PredicateKind::kDefined) {
        PredicateDecl decl{def.head, {}, PredicateKind::kDefined, loc};
        for (const auto& p : def.params) decl.arg_sorts.push_back(p.sort);
        spec.predicates.push_back(std::move(decl));
      }
      spec.defs.push_back(std::move(def));
    } else if (accept_keyword("policy")) {
      PolicyDecl p;
      p.loc = loc;
      p.name = expect_name("policy name");
      expect(Tok::kDefine, "':='");
      p.formula = parse_formula();
      spec.policies.push_back(std::move(p));
    } else {
      syntax_error(loc, "expected a declaration, found " + describe(head));
    }
  }

  Param parse_param() {
    Param p;
    p.name = expect_name("parameter name");
    expect(Tok::kColon, "':'");
    p.sort = expect_name("sort name");
    return p;
  }

  std::optional<Timestamp> parse_bound() {
    if (peek().kind != Tok::kLBracket) return std::nullopt;
    next();
    const Token& num = expect(Tok::kNumber, "metric bound");
    Timestamp value = 0;
    auto [ptr, ec] =
        std::from_chars(num.text.data(), num.text.data() + num.text.size(), value);
    if (ec != std::errc() || ptr != num.text.data() + num.text.size()) {
      syntax_error(num.loc, "metric bound out of range: " + num.text);
    }
    expect(Tok::kRBracket, "']'");
    return value;
  }

  // since < implies < or < and < unary; since is left-associative and
  // implies right-associative.
  Formula parse_formula() {
    Formula lhs = parse_implies();
    while (at_keyword("since")) {
      const SourceLoc loc = next().loc;
      auto bound = parse_bound();
      Formula rhs = parse_implies();
      lhs = (bound ? Formula::since(*bound, lhs, rhs) : Formula::since(lhs, rhs))
                .with_loc(loc);
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept_keyword("implies")) {
      return Formula::implies(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept_keyword("or")) lhs = Formula::disj(lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept_keyword("and")) lhs = Formula::conj(lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::kIdent) {
      const SourceLoc loc = t.loc;
      if (accept_keyword("not")) return Formula::neg(parse_unary());
      if (accept_keyword("prev")) return temporal(Op::kPrev, Op::kPrevM, loc);
      if (accept_keyword("once")) return temporal(Op::kOnce, Op::kOnceM, loc);
      if (accept_keyword("earlier")) return temporal(Op::kEarlier, Op::kEarlierM, loc);
      if (at_keyword("exists") || at_keyword("forall")) {
        const bool universal = next().text == "forall";
        Param var = parse_param();
        expect(Tok::kDot, "'.'");
        scope_.push_back(var);
        Formula body = parse_formula();
        scope_.pop_back();
        Formula ex =
            Formula::exists(var.name, var.sort, universal ? Formula::neg(body) : body)
                .with_loc(loc);
        return universal ? Formula::neg(ex) : ex;
      }
    }
    return parse_primary();
  }

  Formula temporal(Op plain, Op metric, SourceLoc loc) {
    auto bound = parse_bound();
    Formula child = parse_unary();
    return Formula::unary(bound ? metric : plain, bound.value_or(0), child).with_loc(loc);
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::kLParen) {
      next();
      Formula f = parse_formula();
      expect(Tok::kRParen, "')'");
      return f;
    }
    if (accept_keyword("true")) return Formula::top();
    if (accept_keyword("false")) return Formula::bot();
    const SourceLoc loc = t.loc;
    std::string pred = expect_name("formula");
    std::vector<Term> args;
    if (peek().kind == Tok::kLParen) {
      next();
      if (peek().kind != Tok::kRParen) {
        args.push_back(parse_term());
        while (peek().kind == Tok::kComma) {
          next();
          args.push_back(parse_term());
        }
      }
      expect(Tok::kRParen, "')'");
    }
    return Formula::atom(std::move(pred), std::move(args)).with_loc(loc);
  }

  Term parse_term() {
    std::string name = expect_name("term");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return Term::variable(std::move(name), it->sort);
    }
    // Sort filled in by resolve() once all constants are known.
    return Term::constant(std::move(name), "");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Param> scope_;
  std::vector<Diagnostic> late_;
};

// Turns atoms of defined predicates into DefAtom nodes and annotates
// constants with their declared sort.
Formula resolve(const Formula& f, const PolicySpec& spec) {
  switch (f.op()) {
    case Op::kBot:
      return f;
    case Op::kAtom: {
      std::vector<Term> args = f.args();
      for (auto& t : args) {
        if (!t.is_variable()) {
          if (auto sort = spec.sort_of_constant(t.name)) t.sort = *sort;
        }
      }
      const PredicateDecl* decl = spec.find_predicate(f.name());
      const Op op = decl != nullptr && decl->kind == PredicateKind::kDefined
                        ? Op::kDefAtom
                        : Op::kAtom;
      return Formula::predicate(op, f.name(), std::move(args)).with_loc(f.loc());
    }
    case Op::kDefAtom:
      return f;
    case Op::kExists:
      return Formula::exists(f.name(), f.sort(), resolve(f.child(), spec)).with_loc(f.loc());
    default:
      break;
  }
  if (is_unary(f.op())) {
    return Formula::unary(f.op(), f.bound(), resolve(f.child(), spec)).with_loc(f.loc());
  }
  return Formula::binary(f.op(), f.bound(), resolve(f.left(), spec),
                         resolve(f.right(), spec))
      .with_loc(f.loc());
}

}  // namespace

PolicySpec parse_policy(const SourcePolicy& src) {
  PolicySpec spec;
  std::vector<Diagnostic> diags;
  try {
    Parser parser(src.text);
    spec = parser.parse_file();
    diags = std::move(parser.late_diagnostics());
  } catch (const PolicyError& e) {
    throw PolicyError(e.diagnostics(), src.origin);
  }
  for (auto& d : spec.defs) d.body = resolve(d.body, spec);
  for (auto& p : spec.policies) p.formula = resolve(p.formula, spec);
  auto more = validate(spec);
  diags.insert(diags.end(), more.begin(), more.end());
  if (!diags.empty()) throw PolicyError(std::move(diags), src.origin);
  return spec;
}

Formula parse_formula(std::string_view text, const PolicySpec& context,
                      const std::vector<Param>& scope) {
  Parser parser(text);
  Formula f = resolve(parser.parse_lone_formula(scope), context);
  std::vector<Diagnostic> diags;
  check_formula(context, f, scope, false, "in formula", diags);
  if (!diags.empty()) throw PolicyError(std::move(diags));
  return f;
}

PolicySpec load_policy_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open policy file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_policy(SourcePolicy{ss.str(), path.string()});
}

namespace {

// Printing levels: higher binds tighter.
constexpr int kQuantLevel = 0;
constexpr int kSinceLevel = 1;
constexpr int kOrLevel = 3;
constexpr int kAndLevel = 4;
constexpr int kUnaryLevel = 5;
constexpr int kAtomLevel = 6;

std::string metric_suffix(const Formula& f) {
  return is_metric(f.op()) ? "[" + std::to_string(f.bound()) + "]" : "";
}

class Printer {
 public:
  std::string print(const Formula& f, int required) {
    auto [text, level] = render(f);
    if (level < required) return "(" + text + ")";
    return text;
  }

 private:
  std::pair<std::string, int> render(const Formula& f) {
    switch (f.op()) {
      case Op::kBot:
        return {"false", kAtomLevel};
      case Op::kAtom:
      case Op::kDefAtom: {
        std::string out = f.name();
        if (!f.args().empty()) {
          out += '(';
          for (std::size_t i = 0; i < f.args().size(); ++i) {
            if (i > 0) out += ',';
            out += f.args()[i].name;
          }
          out += ')';
        }
        return {out, kAtomLevel};
      }
      case Op::kNeg:
        return render_neg(f);
      case Op::kOr:
        return {print(f.left(), kOrLevel) + " or " + print(f.right(), kAndLevel), kOrLevel};
      case Op::kSince:
      case Op::kSinceM:
        return {print(f.left(), kSinceLevel) + " since" + metric_suffix(f) + " " +
                    print(f.right(), kSinceLevel + 1),
                kSinceLevel};
      case Op::kPrev:
      case Op::kPrevM:
        return {"prev" + metric_suffix(f) + " " + print(f.child(), kUnaryLevel), kUnaryLevel};
      case Op::kOnce:
      case Op::kOnceM:
        return {"once" + metric_suffix(f) + " " + print(f.child(), kUnaryLevel), kUnaryLevel};
      case Op::kEarlier:
      case Op::kEarlierM:
        return {"earlier" + metric_suffix(f) + " " + print(f.child(), kUnaryLevel),
                kUnaryLevel};
      case Op::kExists:
        return {"exists " + f.name() + ":" + f.sort() + ". " + print(f.child(), kQuantLevel),
                kQuantLevel};
    }
    return {"?", kAtomLevel};
  }

  std::pair<std::string, int> render_neg(const Formula& f) {
    const Formula& c = f.child();
    if (c.op() == Op::kBot) return {"true", kAtomLevel};
    if (c.op() == Op::kExists && c.child().op() == Op::kNeg) {
      return {"forall " + c.name() + ":" + c.sort() + ". " +
                  print(c.child().child(), kQuantLevel),
              kQuantLevel};
    }
    if (c.op() == Op::kOr && c.left().op() == Op::kNeg && c.right().op() == Op::kNeg) {
      return {print(c.left().child(), kAndLevel) + " and " +
                  print(c.right().child(), kUnaryLevel),
              kAndLevel};
    }
    return {"not " + print(c, kUnaryLevel), kUnaryLevel};
  }
};

std::string sort_list(const std::vector<std::string>& sorts) {
  if (sorts.empty()) return "";
  std::string out = "(";
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (i > 0) out += ", ";
    out += sorts[i];
  }
  return out + ")";
}

}  // namespace

std::string print_formula(const Formula& f) { return Printer().print(f, kQuantLevel); }

std::string print_policy(const PolicySpec& spec) {
  std::ostringstream os;
  for (const auto& s : spec.sorts) os << "sort " << s.name << '\n';
  for (const auto& s : spec.sorts) {
    for (const auto& c : s.constants) os << "const " << c << " : " << s.name << '\n';
  }
  for (const auto& p : spec.predicates) {
    switch (p.kind) {
      case PredicateKind::kEvent:
        os << "event " << p.name << sort_list(p.arg_sorts) << '\n';
        break;
      case PredicateKind::kStatic:
        os << "static " << p.name << sort_list(p.arg_sorts) << '\n';
        break;
      case PredicateKind::kDefined:
        for (const auto& d : spec.defs) {
          if (d.head != p.name) continue;
          os << "def " << d.head;
          if (!d.params.empty()) {
            os << '(';
            for (std::size_t i = 0; i < d.params.size(); ++i) {
              if (i > 0) os << ", ";
              os << d.params[i].name << ':' << d.params[i].sort;
            }
            os << ')';
          }
          os << " := " << print_formula(d.body) << '\n';
        }
        break;
    }
  }
  for (const auto& fact : spec.static_facts) os << "fact " << to_string(fact) << '\n';
  for (const auto& p : spec.policies) {
    os << "policy " << p.name << " := " << print_formula(p.formula) << '\n';
  }
  return os.str();
}

}  // namespace rmtl
