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

#include "phonosynth/dsl.hpp"

namespace phonosynth {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

const Token* token_at(const Word& w, std::size_t pos, int offset) {
  long long target = static_cast<long long>(pos) + offset;
  if (target < 0 || target >= static_cast<long long>(w.size())) return nullptr;
  return &w[static_cast<std::size_t>(target)];
}

std::string join(const std::vector<std::string>& symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

Token retagged(Token t, const TransformationTag& tag) {
  t.tags.clear();
  t.tags.insert(tag);
  return t;
}

}  // namespace

int Predicate::offset() const {
  return std::visit([](const auto& a) { return a.offset; }, atom);
}

Predicate Not(Predicate p) {
  if (p.negated) throw std::invalid_argument("Not(Not(...)) is not part of the language");
  p.negated = true;
  return p;
}

std::string op_name(const Transformation& t) {
  return std::visit(Overloaded{
                        [](const ReplaceBy&) { return std::string("ReplaceBy"); },
                        [](const ReplaceAnyBy&) { return std::string("ReplaceAnyBy"); },
                        [](const Insert&) { return std::string("Insert"); },
                        [](const Delete&) { return std::string("Delete"); },
                        [](const CopyReplace&) { return std::string("CopyReplace"); },
                        [](const CopyInsert&) { return std::string("CopyInsert"); },
                        [](const Identity&) { return std::string("Identity"); },
                    },
                    t);
}

std::size_t Program::rule_count() const {
  std::size_t n = 0;
  for (const auto& pass : passes) n += pass.size();
  return n;
}

bool eval_predicate(const Predicate& p, const Word& w, std::size_t pos) {
  const Token* tok = token_at(w, pos, p.offset());
  bool value = false;
  if (tok) {
    value = std::visit(Overloaded{
                           [&](const IsToken& a) { return tok->symbol == a.symbol; },
                           [&](const HasFeature& a) { return tok->has_feature(a.feature); },
                           [&](const TransformationApplied& a) { return tok->has_tag(a.tag); },
                       },
                       p.atom);
  }
  return p.negated ? !value : value;
}

std::vector<std::string> TokenOutcome::realized_symbols() const {
  std::vector<std::string> out;
  out.reserve(emitted.size() + inserted_after.size());
  for (const auto& t : emitted) out.push_back(t.symbol);
  for (const auto& t : inserted_after) out.push_back(t.symbol);
  return out;
}

std::optional<TokenOutcome> apply_transformation(const Transformation& t, const Word& w, std::size_t pos,
                                                 const FeatureTable& table) {
  const Token& x = w[pos];
  return std::visit(
      Overloaded{
          [&](const ReplaceBy& r) -> std::optional<TokenOutcome> {
            if (x.symbol != r.from) return std::nullopt;
            TransformationTag tag{"ReplaceBy", r.to};
            return TokenOutcome{{retagged(table.make_token(r.to), tag)}, {}, tag};
          },
          [&](const ReplaceAnyBy& r) -> std::optional<TokenOutcome> {
            TransformationTag tag{"ReplaceAnyBy", r.to};
            return TokenOutcome{{retagged(table.make_token(r.to), tag)}, {}, tag};
          },
          [&](const Insert& r) -> std::optional<TokenOutcome> {
            if (r.symbols.empty()) return std::nullopt;
            TransformationTag tag{"Insert", join(r.symbols)};
            TokenOutcome out{{retagged(x, tag)}, {}, tag};
            for (const auto& s : r.symbols) out.inserted_after.push_back(retagged(table.make_token(s), tag));
            return out;
          },
          [&](const Delete&) -> std::optional<TokenOutcome> {
            return TokenOutcome{{}, {}, TransformationTag{"Delete", std::nullopt}};
          },
          [&](const CopyReplace& r) -> std::optional<TokenOutcome> {
            const Token* src = r.offset == 0 ? nullptr : token_at(w, pos, r.offset);
            if (!src) return std::nullopt;
            TransformationTag tag{"CopyReplace", src->symbol};
            return TokenOutcome{{retagged(*src, tag)}, {}, tag};
          },
          [&](const CopyInsert& r) -> std::optional<TokenOutcome> {
            const Token* src = r.offset == 0 ? nullptr : token_at(w, pos, r.offset);
            if (!src) return std::nullopt;
            TransformationTag tag{"CopyInsert", src->symbol};
            return TokenOutcome{{retagged(x, tag)}, {retagged(*src, tag)}, tag};
          },
          [&](const Identity&) -> std::optional<TokenOutcome> {
            TransformationTag tag{"Identity", std::nullopt};
            return TokenOutcome{{retagged(x, tag)}, {}, tag};
          },
      },
      t);
}

std::optional<TokenOutcome> apply_rule(const Rule& rule, const Word& w, std::size_t pos, const FeatureTable& table) {
  for (const auto& g : rule.guards) {
    if (!eval_predicate(g, w, pos)) return std::nullopt;
  }
  return apply_transformation(rule.action, w, pos, table);
}

std::optional<std::size_t> first_match(const RuleList& rules, const Word& w, std::size_t pos,
                                       const FeatureTable& table) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (apply_rule(rules[i], w, pos, table)) return i;
  }
  return std::nullopt;
}

Word run_pass(const RuleList& rules, const Word& w, const FeatureTable& table) {
  Word out;
  out.tokens.reserve(w.size());
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    std::optional<TokenOutcome> outcome;
    for (const auto& rule : rules) {
      outcome = apply_rule(rule, w, pos, table);
      if (outcome) break;
    }
    if (!outcome) {
      Token t = w[pos];
      t.tags.clear();
      out.tokens.push_back(std::move(t));
      continue;
    }
    for (auto& t : outcome->emitted) out.tokens.push_back(std::move(t));
    for (auto& t : outcome->inserted_after) out.tokens.push_back(std::move(t));
  }
  return out;
}

Word run_program(const Program& p, const Word& w, const FeatureTable& table) {
  Word current = w.untagged();
  for (const auto& pass : p.passes) current = run_pass(pass, current, table);
  return current.untagged();
}

}  // namespace phonosynth
