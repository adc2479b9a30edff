#pragma once

// Ordinals below epsilon_0 in Cantor normal form: a strictly decreasing list
// of exponents (themselves CNF terms) with positive coefficients. Text form
// uses 'w' for omega: w^(w)·2 + w·3 + 5; the parser also accepts '*'.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bignat.hpp"

namespace wol {

class CnfOrdinal {
public:
  struct CnfTerm {
    CnfOrdinal exponent() const;
    BigNat coeff;
    std::shared_ptr<const std::vector<CnfTerm>> exp_terms;  // exponent's term list
  };

  CnfOrdinal() = default;  // zero
  static CnfOrdinal finite(const BigNat& n) {
    CnfOrdinal r;
    if (!n.is_zero()) r.terms_.push_back(term(CnfOrdinal(), n));
    return r;
  }
  static CnfOrdinal finite(uint64_t n) { return finite(BigNat(n)); }
  static CnfOrdinal omega() { return omega_pow(finite(1)); }
  static CnfOrdinal omega_pow(const CnfOrdinal& e) {
    CnfOrdinal r;
    r.terms_.push_back(term(e, BigNat(1)));
    return r;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp_terms->empty()); }
  BigNat finite_value() const {
    if (!is_finite()) throw std::domain_error("CnfOrdinal: not finite");
    return terms_.empty() ? BigNat(0) : terms_[0].coeff;
  }

  // A successor ordinal has a finite part; a limit has none (and is nonzero).
  bool is_successor() const { return !terms_.empty() && terms_.back().exp_terms->empty(); }
  bool is_limit() const { return !terms_.empty() && !terms_.back().exp_terms->empty(); }

  static int compare(const CnfOrdinal& a, const CnfOrdinal& b) {
    size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (size_t i = 0; i < n; i++) {
      int c = compare_lists(*a.terms_[i].exp_terms, *b.terms_[i].exp_terms);
      if (c) return c;
      c = BigNat::cmp(a.terms_[i].coeff, b.terms_[i].coeff);
      if (c) return c;
    }
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
  }

  bool operator==(const CnfOrdinal& o) const { return compare(*this, o) == 0; }
  bool operator!=(const CnfOrdinal& o) const { return compare(*this, o) != 0; }
  bool operator<(const CnfOrdinal& o) const { return compare(*this, o) < 0; }
  bool operator<=(const CnfOrdinal& o) const { return compare(*this, o) <= 0; }

  static CnfOrdinal add(const CnfOrdinal& a, const CnfOrdinal& b) {
    if (b.is_zero()) return a;
    CnfOrdinal r;
    const auto& lead = *b.terms_[0].exp_terms;
    for (const auto& t : a.terms_) {
      int c = compare_lists(*t.exp_terms, lead);
      if (c < 0) break;  // absorbed by b's leading term
      if (c == 0) {
        // merge coefficients with b's first term, then append the rest of b
        r.terms_.push_back(term_from_list(t.exp_terms, BigNat::add(t.coeff, b.terms_[0].coeff)));
        for (size_t i = 1; i < b.terms_.size(); i++) r.terms_.push_back(b.terms_[i]);
        return r;
      }
      r.terms_.push_back(t);
    }
    for (const auto& t : b.terms_) r.terms_.push_back(t);
    return r;
  }

  static CnfOrdinal mul(const CnfOrdinal& a, const CnfOrdinal& b) {
    if (a.is_zero() || b.is_zero()) return CnfOrdinal();
    CnfOrdinal r;
    const auto& alead = a.terms_[0];
    for (const auto& bt : b.terms_) {
      if (!bt.exp_terms->empty()) {
        // a * w^beta * c = w^(alpha1 + beta) * c for beta > 0
        CnfOrdinal e = add(alead.exponent(), exponent_of(bt));
        r = add(r, scaled_power(e, bt.coeff));
      } else {
        // a * k = w^alpha1 * (c1 * k) + tail(a)
        CnfOrdinal part;
        part.terms_.push_back(term_from_list(alead.exp_terms, BigNat::mul(alead.coeff, bt.coeff)));
        for (size_t i = 1; i < a.terms_.size(); i++) part.terms_.push_back(a.terms_[i]);
        r = add(r, part);
      }
    }
    return r;
  }

  // Standard fundamental sequences:
  //   (gamma + w^(b+1))[n] = gamma + w^b * n
  //   (gamma + w^lambda)[n] = gamma + w^(lambda[n])
  // applied to the last CNF term, peeling one unit of its coefficient.
  CnfOrdinal fundamental_sequence(uint64_t n) const {
    if (!is_limit()) throw std::domain_error("fundamental_sequence: not a limit ordinal");
    CnfOrdinal prefix;
    prefix.terms_ = terms_;
    const CnfTerm last = prefix.terms_.back();
    if (BigNat::cmp(last.coeff, BigNat(1)) == 0) prefix.terms_.pop_back();
    else prefix.terms_.back() = term_from_list(last.exp_terms, BigNat::sub(last.coeff, BigNat(1)));

    CnfOrdinal beta = last.exponent();
    CnfOrdinal step;
    if (beta.is_successor()) {
      CnfOrdinal bm1 = beta.pred();
      step = mul(omega_pow(bm1), finite(n));
    } else {
      step = omega_pow(beta.fundamental_sequence(n));
    }
    return add(prefix, step);
  }

  // Predecessor of a successor ordinal.
  CnfOrdinal pred() const {
    if (!is_successor()) throw std::domain_error("pred: not a successor");
    CnfOrdinal r;
    r.terms_ = terms_;
    if (BigNat::cmp(r.terms_.back().coeff, BigNat(1)) == 0) r.terms_.pop_back();
    else r.terms_.back() = term_from_list(r.terms_.back().exp_terms, BigNat::sub(r.terms_.back().coeff, BigNat(1)));
    return r;
  }

  // Leading exponent's degree as a term list; for printing and sup patterns.
  const std::vector<CnfTerm>& terms() const { return terms_; }
  CnfOrdinal leading_exponent() const {
    if (is_zero()) throw std::domain_error("leading_exponent: zero");
    return terms_[0].exponent();
  }

  std::string to_text() const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); i++) {
      if (i) out += " + ";
      const auto& t = terms_[i];
      CnfOrdinal e = t.exponent();
      if (e.is_zero()) {
        out += t.coeff.to_dec();
      } else if (e == finite(1)) {
        out += "w";
        if (BigNat::cmp(t.coeff, BigNat(1)) != 0) out += "\xc2\xb7" + t.coeff.to_dec();
      } else {
        out += "w^(" + e.to_text() + ")";
        if (BigNat::cmp(t.coeff, BigNat(1)) != 0) out += "\xc2\xb7" + t.coeff.to_dec();
      }
    }
    return out;
  }

  static CnfOrdinal parse(std::string_view s) {
    size_t pos = 0;
    CnfOrdinal r = parse_sum(s, pos);
    skip_ws(s, pos);
    if (pos != s.size()) throw std::invalid_argument("ordinal parse: trailing input");
    return r;
  }

private:
  std::vector<CnfTerm> terms_;

  static CnfTerm term(const CnfOrdinal& e, const BigNat& c) {
    return CnfTerm{c, std::make_shared<std::vector<CnfTerm>>(e.terms_)};
  }
  static CnfTerm term_from_list(const std::shared_ptr<const std::vector<CnfTerm>>& e, const BigNat& c) {
    return CnfTerm{c, e};
  }
  static CnfOrdinal exponent_of(const CnfTerm& t) {
    CnfOrdinal r;
    r.terms_ = *t.exp_terms;
    return r;
  }
  static CnfOrdinal scaled_power(const CnfOrdinal& e, const BigNat& c) {
    CnfOrdinal r;
    r.terms_.push_back(term(e, c));
    return r;
  }
  static int compare_lists(const std::vector<CnfTerm>& a, const std::vector<CnfTerm>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; i++) {
      int c = compare_lists(*a[i].exp_terms, *b[i].exp_terms);
      if (c) return c;
      c = BigNat::cmp(a[i].coeff, b[i].coeff);
      if (c) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
  }

  static void skip_ws(std::string_view s, size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) pos++;
  }

  static CnfOrdinal parse_sum(std::string_view s, size_t& pos) {
    CnfOrdinal r = parse_term(s, pos);
    while (true) {
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == '+') {
        pos++;
        r = add(r, parse_term(s, pos));
      } else {
        break;
      }
    }
    return r;
  }

  static BigNat parse_nat(std::string_view s, size_t& pos) {
    skip_ws(s, pos);
    size_t start = pos;
    std::string digits;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') digits += s[pos++];
    if (digits.empty()) throw std::invalid_argument("ordinal parse: expected number at " + std::to_string(start));
    return BigNat::from_dec(digits);
  }

  static bool eat_dot(std::string_view s, size_t& pos) {
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '*') { pos++; return true; }
    if (pos + 1 < s.size() && static_cast<unsigned char>(s[pos]) == 0xc2 &&
        static_cast<unsigned char>(s[pos + 1]) == 0xb7) { pos += 2; return true; }
    return false;
  }

  static CnfOrdinal parse_term(std::string_view s, size_t& pos) {
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == 'w') {
      pos++;
      CnfOrdinal e = finite(1);
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == '^') {
        pos++;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == '(') {
          pos++;
          e = parse_sum(s, pos);
          skip_ws(s, pos);
          if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("ordinal parse: expected ')'");
          pos++;
        } else {
          e = finite(parse_nat(s, pos));
        }
      }
      BigNat c(1);
      if (eat_dot(s, pos)) c = parse_nat(s, pos);
      if (c.is_zero()) return CnfOrdinal();
      return scaled_power(e, c);
    }
    return finite(parse_nat(s, pos));
  }
};

inline CnfOrdinal CnfOrdinal::CnfTerm::exponent() const {
  CnfOrdinal r;
  r.terms_ = *exp_terms;
  return r;
}

} // namespace wol
