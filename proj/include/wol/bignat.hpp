#pragma once

// Arbitrary-precision natural numbers.
// Little-endian 32-bit limbs, no trailing zero limbs. Subtraction truncates at 0.

#include <cstdint>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>
#include <stdexcept>
#include <algorithm>

namespace wol {

class BigNat {
public:
  BigNat() = default;
  BigNat(uint64_t v) {
    if (v) {
      limbs_.push_back(static_cast<uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
    }
  }

  static BigNat from_dec(std::string_view s) {
    BigNat r;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("BigNat: bad decimal digit");
      r = r.mul_small(10);
      r = add(r, BigNat(static_cast<uint64_t>(c - '0')));
    }
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool fits_u64() const { return limbs_.size() <= 2; }
  uint64_t as_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigNat: does not fit in 64 bits");
    uint64_t v = 0;
    if (limbs_.size() > 0) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
    return v;
  }

  size_t bit_length() const {
    if (limbs_.empty()) return 0;
    uint32_t top = limbs_.back();
    size_t b = 0;
    while (top) { b++; top >>= 1; }
    return (limbs_.size() - 1) * 32 + b;
  }

  bool bit(size_t i) const {
    size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
  }

  void set_bit(size_t i) {
    size_t limb = i / 32;
    if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= (1u << (i % 32));
  }

  static int cmp(const BigNat& a, const BigNat& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
  }

  static BigNat add(const BigNat& a, const BigNat& b) {
    BigNat r;
    size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.resize(n, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; i++) {
      uint64_t s = carry;
      if (i < a.limbs_.size()) s += a.limbs_[i];
      if (i < b.limbs_.size()) s += b.limbs_[i];
      r.limbs_[i] = static_cast<uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    return r;
  }

  // Truncated subtraction: returns 0 when b >= a.
  static BigNat sub(const BigNat& a, const BigNat& b) {
    if (cmp(a, b) <= 0) return BigNat();
    BigNat r;
    r.limbs_.resize(a.limbs_.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); i++) {
      int64_t d = static_cast<int64_t>(a.limbs_[i]) - borrow -
                  (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
      if (d < 0) { d += (int64_t(1) << 32); borrow = 1; } else borrow = 0;
      r.limbs_[i] = static_cast<uint32_t>(d);
    }
    r.trim();
    return r;
  }

  static BigNat mul(const BigNat& a, const BigNat& b) {
    if (a.is_zero() || b.is_zero()) return BigNat();
    BigNat r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); i++) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); j++) {
        uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                       r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      size_t k = i + b.limbs_.size();
      while (carry) {
        uint64_t cur = r.limbs_[k] + carry;
        r.limbs_[k] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
        k++;
      }
    }
    r.trim();
    return r;
  }

  BigNat mul_small(uint32_t m) const {
    BigNat r;
    uint64_t carry = 0;
    r.limbs_.resize(limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); i++) {
      uint64_t cur = static_cast<uint64_t>(limbs_[i]) * m + carry;
      r.limbs_[i] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    r.trim();
    return r;
  }

  // Division by a single 32-bit value; returns quotient, sets rem.
  BigNat div_small(uint32_t d, uint32_t& rem) const {
    if (d == 0) throw std::domain_error("BigNat: division by zero");
    BigNat q;
    q.limbs_.resize(limbs_.size(), 0);
    uint64_t r = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      uint64_t cur = (r << 32) | limbs_[i];
      q.limbs_[i] = static_cast<uint32_t>(cur / d);
      r = cur % d;
    }
    q.trim();
    rem = static_cast<uint32_t>(r);
    return q;
  }

  static void divmod(const BigNat& a, const BigNat& b, BigNat& q, BigNat& r) {
    if (b.is_zero()) throw std::domain_error("BigNat: division by zero");
    if (cmp(a, b) < 0) { q = BigNat(); r = a; return; }
    if (b.limbs_.size() == 1) {
      uint32_t rem = 0;
      q = a.div_small(b.limbs_[0], rem);
      r = BigNat(rem);
      return;
    }
    // Shift-and-subtract long division; fine at the sizes this project sees.
    q = BigNat();
    r = BigNat();
    for (size_t i = a.bit_length(); i-- > 0;) {
      r = shl(r, 1);
      if (a.bit(i)) r.set_bit(0);
      if (cmp(r, b) >= 0) {
        r = sub(r, b);
        q.set_bit(i);
      }
    }
    q.trim();
    r.trim();
  }

  static BigNat shl(const BigNat& a, size_t bits) {
    if (a.is_zero() || bits == 0) return a;
    BigNat r;
    size_t limb_shift = bits / 32, bit_shift = bits % 32;
    r.limbs_.assign(a.limbs_.size() + limb_shift + 1, 0);
    for (size_t i = 0; i < a.limbs_.size(); i++) {
      uint64_t v = static_cast<uint64_t>(a.limbs_[i]) << bit_shift;
      r.limbs_[i + limb_shift] |= static_cast<uint32_t>(v);
      r.limbs_[i + limb_shift + 1] |= static_cast<uint32_t>(v >> 32);
    }
    r.trim();
    return r;
  }

  static BigNat shr(const BigNat& a, size_t bits) {
    size_t limb_shift = bits / 32, bit_shift = bits % 32;
    if (limb_shift >= a.limbs_.size()) return BigNat();
    BigNat r;
    r.limbs_.assign(a.limbs_.size() - limb_shift, 0);
    for (size_t i = 0; i < r.limbs_.size(); i++) {
      uint64_t v = a.limbs_[i + limb_shift];
      if (bit_shift) {
        v >>= bit_shift;
        if (i + limb_shift + 1 < a.limbs_.size())
          v |= static_cast<uint64_t>(a.limbs_[i + limb_shift + 1]) << (32 - bit_shift);
      }
      r.limbs_[i] = static_cast<uint32_t>(v);
    }
    r.trim();
    return r;
  }

  // a^e with a hard cap on the result's bit length.
  static BigNat pow_guarded(const BigNat& a, const BigNat& e, size_t max_bits) {
    if (e.is_zero()) return BigNat(1);
    if (a.is_zero()) return BigNat();
    if (!e.fits_u64()) throw std::overflow_error("BigNat: exponent too large");
    uint64_t n = e.as_u64();
    if (a.bit_length() > 1 && n > max_bits)
      throw std::overflow_error("BigNat: power exceeds size limit");
    BigNat r(1), base = a;
    while (n) {
      if (n & 1) {
        r = mul(r, base);
        if (r.bit_length() > max_bits) throw std::overflow_error("BigNat: power exceeds size limit");
      }
      n >>= 1;
      if (n) {
        base = mul(base, base);
        if (base.bit_length() > max_bits) throw std::overflow_error("BigNat: power exceeds size limit");
      }
    }
    return r;
  }

  std::string to_dec() const {
    if (is_zero()) return "0";
    std::string out;
    BigNat cur = *this;
    while (!cur.is_zero()) {
      uint32_t rem = 0;
      cur = cur.div_small(1000000000u, rem);
      if (cur.is_zero()) {
        out = std::to_string(rem) + out;
      } else {
        std::string chunk = std::to_string(rem);
        out = std::string(9 - chunk.size(), '0') + chunk + out;
      }
    }
    return out;
  }

  uint64_t fnv_hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t l : limbs_) {
      for (int i = 0; i < 4; i++) {
        h ^= (l >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return h;
  }

  bool operator==(const BigNat& o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigNat& o) const { return limbs_ != o.limbs_; }
  bool operator<(const BigNat& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const BigNat& o) const { return cmp(*this, o) <= 0; }
  bool operator>(const BigNat& o) const { return cmp(*this, o) > 0; }
  bool operator>=(const BigNat& o) const { return cmp(*this, o) >= 0; }

private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<uint32_t> limbs_;
};

// Numeric value used throughout the evaluators: u64 fast path, BigNat on overflow.
class Val {
public:
  Val() : small_(0) {}
  Val(uint64_t v) : small_(v) {}
  Val(const BigNat& b) {
    if (b.fits_u64()) small_ = b.as_u64();
    else { small_ = 0; big_ = std::make_shared<BigNat>(b); }
  }

  bool is_small() const { return !big_; }
  bool is_zero() const { return is_small() ? small_ == 0 : big_->is_zero(); }
  uint64_t small() const { return small_; }

  BigNat to_big() const { return big_ ? *big_ : BigNat(small_); }
  bool fits_u64() const { return is_small(); }
  uint64_t as_u64() const {
    if (!is_small()) throw std::overflow_error("Val: does not fit in 64 bits");
    return small_;
  }
  size_t bit_length() const {
    if (!is_small()) return big_->bit_length();
    size_t b = 0;
    uint64_t v = small_;
    while (v) { b++; v >>= 1; }
    return b;
  }

  static int cmp(const Val& a, const Val& b) {
    if (a.is_small() && b.is_small())
      return a.small_ < b.small_ ? -1 : (a.small_ > b.small_ ? 1 : 0);
    return BigNat::cmp(a.to_big(), b.to_big());
  }

  static Val add(const Val& a, const Val& b) {
    if (a.is_small() && b.is_small()) {
      uint64_t s = a.small_ + b.small_;
      if (s >= a.small_) return Val(s);
    }
    return Val(BigNat::add(a.to_big(), b.to_big()));
  }

  static Val sub(const Val& a, const Val& b) {
    if (a.is_small() && b.is_small())
      return Val(a.small_ > b.small_ ? a.small_ - b.small_ : 0);
    return Val(BigNat::sub(a.to_big(), b.to_big()));
  }

  static Val mul(const Val& a, const Val& b) {
    if (a.is_small() && b.is_small()) {
      if (a.small_ == 0 || b.small_ == 0) return Val(uint64_t(0));
      if (a.small_ <= UINT32_MAX && b.small_ <= UINT32_MAX)
        return Val(a.small_ * b.small_);
    }
    return Val(BigNat::mul(a.to_big(), b.to_big()));
  }

  static Val div(const Val& a, const Val& b) {
    if (b.is_zero()) throw std::domain_error("Val: division by zero");
    if (a.is_small() && b.is_small()) return Val(a.small_ / b.small_);
    BigNat q, r;
    BigNat::divmod(a.to_big(), b.to_big(), q, r);
    return Val(q);
  }

  static Val mod(const Val& a, const Val& b) {
    if (b.is_zero()) throw std::domain_error("Val: division by zero");
    if (a.is_small() && b.is_small()) return Val(a.small_ % b.small_);
    BigNat q, r;
    BigNat::divmod(a.to_big(), b.to_big(), q, r);
    return Val(r);
  }

  bool operator==(const Val& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const Val& o) const { return cmp(*this, o) != 0; }
  bool operator<(const Val& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const Val& o) const { return cmp(*this, o) <= 0; }

  // stable identity of the shared big payload, if any
  const void* identity() const { return big_.get(); }

  std::string to_dec() const { return is_small() ? std::to_string(small_) : big_->to_dec(); }

private:
  uint64_t small_;
  std::shared_ptr<const BigNat> big_;
};

} // namespace wol
