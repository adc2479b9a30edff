#pragma once

// Concrete syntax for formulas (docs/grammar.md):
//
//   formula := 'forall' IDENT '.' formula | 'exists' IDENT '.' formula | disj
//   disj    := conj ('or' conj)*
//   conj    := unit ('and' unit)*
//   unit    := 'not' unit | '(' formula ')' | term ('='|'<'|'>') term
//   term    := factor (('+') factor)*
//   factor  := prim (('*') prim)*
//   prim    := 'S' '(' term ')' | NUMBER | IDENT | '#'NUMBER '(' args ')'
//            | 'run' '[' sexpr ']' '(' args ')' | '(' term ')'
//
// 'a > b' is sugar for 'b < a'. 'not' anywhere is the defined negation, so
// parsing always yields negation normal form. Identifiers of the form x<N>
// denote variable N directly; other identifiers are assigned fresh ids.
// The result is normalized (canonical bound-variable numbering).

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "formula.hpp"

namespace wol {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& m, size_t pos)
      : std::runtime_error(m + " at offset " + std::to_string(pos)), position(pos) {}
};

namespace detail {

struct FormulaParser {
  std::string_view src;
  size_t pos = 0;
  std::map<std::string, uint64_t> scope;       // active binders, innermost wins via save/restore
  std::map<std::string, uint64_t> free_names;  // named free variables
  uint64_t next_id = 0;
  bool allow_free;

  explicit FormulaParser(std::string_view s, bool allow_free_) : src(s), allow_free(allow_free_) {}

  void ws() { while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) pos++; }

  bool peek_char(char c) {
    ws();
    return pos < src.size() && src[pos] == c;
  }

  bool eat_char(char c) {
    if (peek_char(c)) { pos++; return true; }
    return false;
  }

  void expect_char(char c) {
    if (!eat_char(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }

  std::string peek_word() {
    ws();
    size_t p = pos;
    std::string w;
    while (p < src.size() && (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
      w += src[p++];
    return w;
  }

  bool eat_word(const char* w) {
    ws();
    std::string got = peek_word();
    if (got == w) { pos += got.size(); return true; }
    return false;
  }

  std::string ident() {
    ws();
    std::string w = peek_word();
    if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0])))
      throw ParseError("expected identifier", pos);
    pos += w.size();
    return w;
  }

  uint64_t var_id(const std::string& name) {
    auto it = scope.find(name);
    if (it != scope.end()) return it->second;
    if (!allow_free) throw ParseError("unbound variable '" + name + "'", pos);
    auto fit = free_names.find(name);
    if (fit != free_names.end()) return fit->second;
    uint64_t id;
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      id = std::stoull(name.substr(1));
    } else {
      id = 1u << 20;  // fresh block for named free variables
      for (const auto& [_, v] : free_names) id = std::max(id, v + 1);
    }
    free_names[name] = id;
    next_id = std::max(next_id, id + 1);
    return id;
  }

  Val number() {
    ws();
    size_t start = pos;
    std::string digits;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      digits += src[pos++];
    if (digits.empty()) throw ParseError("expected number", start);
    return Val(BigNat::from_dec(digits));
  }

  Term prim() {
    ws();
    if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
    if (src[pos] == '(') {
      pos++;
      Term t = term();
      expect_char(')');
      return t;
    }
    if (src[pos] == '#') {
      pos++;
      uint64_t sym = number().as_u64();
      expect_char('(');
      std::vector<Term> args;
      if (!peek_char(')'))
        do { args.push_back(term()); } while (eat_char(','));
      expect_char(')');
      return t_skolem(sym, std::move(args));
    }
    if (std::isdigit(static_cast<unsigned char>(src[pos]))) return t_num(number());
    std::string w = peek_word();
    if (w == "S") {
      pos += 1;
      expect_char('(');
      Term t = term();
      expect_char(')');
      return t_succ(t);
    }
    if (w == "run") {
      pos += 3;
      expect_char('[');
      size_t depth = 1, start = pos;
      while (pos < src.size() && depth) {
        if (src[pos] == '[') depth++;
        if (src[pos] == ']') depth--;
        if (depth) pos++;
      }
      if (depth) throw ParseError("unterminated program literal", start);
      expr::Program prog = expr::parse_program(src.substr(start, pos - start));
      pos++;  // ']'
      expect_char('(');
      std::vector<Term> args;
      if (!peek_char(')'))
        do { args.push_back(term()); } while (eat_char(','));
      expect_char(')');
      return t_run(std::move(prog), std::move(args));
    }
    if (w.empty()) throw ParseError("expected term", pos);
    pos += w.size();
    return t_var(var_id(w));
  }

  Term factor() {
    Term t = prim();
    while (eat_char('*')) t = t_mul(t, prim());
    return t;
  }

  Term term() {
    Term t = factor();
    while (eat_char('+')) t = t_add(t, factor());
    return t;
  }

  Formula atom() {
    Term l = term();
    ws();
    if (eat_char('=')) return f_eq(l, term());
    if (eat_char('<')) return f_lt(l, term());
    if (eat_char('>')) return f_lt(term(), l);
    throw ParseError("expected '=', '<' or '>'", pos);
  }

  Formula unit() {
    ws();
    if (eat_word("not")) return negate(unit());
    std::string w = peek_word();
    if (w == "forall" || w == "exists") return formula();
    if (peek_char('(')) {
      // '(' could open a formula or a term; try formula first
      size_t save = pos;
      pos++;
      try {
        Formula f = formula();
        expect_char(')');
        return f;
      } catch (const ParseError&) {
        pos = save;
        return atom();
      }
    }
    return atom();
  }

  Formula conj() {
    Formula f = unit();
    while (eat_word("and")) f = f_and(f, unit());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (eat_word("or")) f = f_or(f, conj());
    return f;
  }

  Formula formula() {
    ws();
    bool fa = false;
    if (eat_word("forall")) fa = true;
    else if (!eat_word("exists")) return disj();
    std::string name = ident();
    expect_char('.');
    uint64_t id = next_id++;
    auto old = scope.find(name);
    std::optional<uint64_t> saved;
    if (old != scope.end()) saved = old->second;
    scope[name] = id;
    Formula body = formula();
    if (saved) scope[name] = *saved; else scope.erase(name);
    return fa ? f_forall(id, body) : f_exists(id, body);
  }
};

} // namespace detail

inline Formula parse_formula(std::string_view text, bool allow_free = false) {
  detail::FormulaParser p(text, allow_free);
  // binder ids live far above literal x<N> ids; normalize() renumbers them anyway
  p.next_id = 1ull << 40;
  Formula f = p.formula();
  p.ws();
  if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
  return normalize(f);
}

inline Formula parse_sentence(std::string_view text) { return parse_formula(text, false); }

} // namespace wol
