// Copyright 2026 The Phonosynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Printer and recursive-descent parser for program text.

#include <cctype>

#include "phonosynth/dsl.hpp"

namespace phonosynth {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string atom_text(const PredicateAtom& atom) {
  return std::visit(Overloaded{
                        [](const IsToken& a) {
                          return "IsToken(w, " + quote(a.symbol) + ", " + std::to_string(a.offset) + ")";
                        },
                        [](const HasFeature& a) {
                          return "Is(w, " + quote(a.feature) + ", " + std::to_string(a.offset) + ")";
                        },
                        [](const TransformationApplied& a) {
                          return "TransformationApplied(w, " + quote(a.tag.to_string()) + ", " +
                                 std::to_string(a.offset) + ")";
                        },
                    },
                    atom);
}

}  // namespace

std::string to_text(const Predicate& p) {
  std::string inner = atom_text(p.atom);
  return p.negated ? "Not(" + inner + ")" : inner;
}

std::string to_text(const Transformation& t) {
  return std::visit(
      Overloaded{
          [](const ReplaceBy& r) { return "ReplaceBy(x, " + quote(r.from) + ", " + quote(r.to) + ")"; },
          [](const ReplaceAnyBy& r) { return "ReplaceAnyBy(x, " + quote(r.to) + ")"; },
          [](const Insert& r) { return "Insert(x, " + quote(join(r.symbols)) + ")"; },
          [](const Delete&) { return std::string("Delete(x)"); },
          [](const CopyReplace& r) { return "CopyReplace(x, w, " + std::to_string(r.offset) + ")"; },
          [](const CopyInsert& r) { return "CopyInsert(x, w, " + std::to_string(r.offset) + ")"; },
          [](const Identity&) { return std::string("Identity(x)"); },
      },
      t);
}

std::string to_text(const Rule& r) {
  std::string out = to_text(r.action);
  for (auto it = r.guards.rbegin(); it != r.guards.rend(); ++it) {
    out = "IfThen(" + to_text(*it) + ", " + out + ")";
  }
  return out;
}

std::string to_text(const RuleList& rules) {
  if (rules.empty()) return "Empty()";
  std::string out = to_text(rules.back());
  for (std::size_t i = rules.size() - 1; i-- > 0;) {
    out = "Else(" + to_text(rules[i]) + ",\n    " + out + ")";
  }
  return out;
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.passes.size(); ++i) {
    if (i) out += '\n';
    out += "Map(" + to_text(p.passes[i]) + ", input_tokens)";
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program program() {
    Program p;
    skip_space();
    while (pos_ < text_.size()) {
      expect_ident("Map");
      expect('(');
      p.passes.push_back(disjunction());
      expect(',');
      expect_ident("input_tokens");
      expect(')');
      skip_space();
    }
    return p;
  }

  Rule single_rule() {
    Rule r = rule();
    skip_space();
    if (pos_ != text_.size()) fail("trailing text after rule");
    return r;
  }

 private:
  RuleList disjunction() {
    RuleList rules;
    std::string head = peek_ident();
    if (head == "Empty") {
      expect_ident("Empty");
      expect('(');
      expect(')');
      return rules;
    }
    while (peek_ident() == "Else") {
      expect_ident("Else");
      expect('(');
      rules.push_back(rule());
      expect(',');
      RuleList rest = disjunction();
      if (rest.empty()) fail("Else needs a rule after the comma");
      expect(')');
      rules.insert(rules.end(), rest.begin(), rest.end());
      return rules;
    }
    rules.push_back(rule());
    return rules;
  }

  Rule rule() {
    if (peek_ident() == "IfThen") {
      expect_ident("IfThen");
      expect('(');
      Predicate guard = predicate();
      expect(',');
      Rule inner = rule();
      expect(')');
      inner.guards.insert(inner.guards.begin(), std::move(guard));
      return inner;
    }
    return Rule{{}, transformation()};
  }

  Predicate predicate() {
    if (peek_ident() == "Not") {
      expect_ident("Not");
      expect('(');
      if (peek_ident() == "Not") fail("Not(Not(...)) is not allowed");
      Predicate p{atom(), true};
      expect(')');
      return p;
    }
    return Predicate{atom(), false};
  }

  PredicateAtom atom() {
    std::size_t at = pos_;
    std::string name = ident();
    expect('(');
    expect_ident("w");
    expect(',');
    std::string arg = string_literal();
    expect(',');
    int offset = integer();
    expect(')');
    if (name == "IsToken") return IsToken{arg, offset};
    if (name == "Is") return HasFeature{arg, offset};
    if (name == "TransformationApplied") {
      try {
        return TransformationApplied{TransformationTag::parse(arg), offset};
      } catch (const std::invalid_argument& e) {
        fail(e.what(), at);
      }
    }
    fail("unknown predicate '" + name + "'", at);
  }

  Transformation transformation() {
    std::size_t at = pos_;
    std::string name = ident();
    expect('(');
    expect_ident("x");
    Transformation t;
    if (name == "ReplaceBy") {
      expect(',');
      std::string from = string_literal();
      expect(',');
      t = ReplaceBy{from, string_literal()};
    } else if (name == "ReplaceAnyBy") {
      expect(',');
      t = ReplaceAnyBy{string_literal()};
    } else if (name == "Insert") {
      expect(',');
      std::string seq = string_literal();
      Insert ins;
      std::size_t start = 0;
      while (start <= seq.size()) {
        std::size_t end = seq.find(' ', start);
        if (end == std::string::npos) end = seq.size();
        if (end == start) fail("Insert sequence has an empty symbol", at);
        ins.symbols.push_back(seq.substr(start, end - start));
        start = end + 1;
      }
      t = std::move(ins);
    } else if (name == "Delete") {
      t = Delete{};
    } else if (name == "CopyReplace" || name == "CopyInsert") {
      expect(',');
      expect_ident("w");
      expect(',');
      int offset = integer();
      if (offset == 0) fail("copy offset must be non-zero", at);
      if (name == "CopyReplace") {
        t = CopyReplace{offset};
      } else {
        t = CopyInsert{offset};
      }
    } else if (name == "Identity") {
      t = Identity{};
    } else {
      fail("unknown transformation '" + name + "'", at);
    }
    expect(')');
    return t;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string peek_ident() {
    std::size_t save = pos_;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string out(text_.substr(start, pos_ - start));
    pos_ = save;
    return out;
  }

  std::string ident() {
    skip_space();
    std::string out = peek_ident();
    if (out.empty()) fail("expected an identifier");
    pos_ += out.size();
    return out;
  }

  void expect_ident(std::string_view want) {
    std::size_t at = pos_;
    if (ident() != want) fail("expected '" + std::string(want) + "'", at);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string string_literal() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected a string literal");
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= text_.size()) break;
      }
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated string literal");
    ++pos_;
    return out;
  }

  int integer() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected an integer offset", start);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  [[noreturn]] void fail(const std::string& what) { fail(what, pos_); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) { throw ProgramSyntaxError(at, what); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

Rule parse_rule(std::string_view text) { return Parser(text).single_rule(); }

}  // namespace phonosynth
