#include "cellcert/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace cellcert {

BigUint::BigUint(std::uint64_t v) {
  if (v == 0) return;
  limbs_.push_back(static_cast<std::uint32_t>(v));
  if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
}

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
  const std::size_t n = std::max(limbs_.size(), rhs.limbs_.size());
  limbs_.resize(n, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = carry + limbs_[i];
    if (i < rhs.limbs_.size()) s += rhs.limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(s);
    carry = s >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
  if (*this < rhs) throw std::underflow_error("BigUint subtraction underflow");
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::int64_t s = static_cast<std::int64_t>(limbs_[i]) - borrow;
    if (i < rhs.limbs_.size()) s -= rhs.limbs_[i];
    borrow = 0;
    if (s < 0) {
      s += (std::int64_t{1} << 32);
      borrow = 1;
    }
    limbs_[i] = static_cast<std::uint32_t>(s);
  }
  trim();
  return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
  BigUint out;
  if (a.is_zero() || b.is_zero()) return out;
  out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      std::uint64_t cur = out.limbs_[i + j] + carry +
                          static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j];
      out.limbs_[i + j] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    out.limbs_[i + b.limbs_.size()] = static_cast<std::uint32_t>(carry);
  }
  out.trim();
  return out;
}

BigUint& BigUint::mul_small(std::uint32_t m) {
  if (m == 0) {
    limbs_.clear();
    return *this;
  }
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
    limb = static_cast<std::uint32_t>(cur);
    carry = cur >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

std::uint32_t BigUint::div_small(std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("BigUint division by zero");
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    const std::uint64_t cur = (rem << 32) | limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / m);
    rem = cur % m;
  }
  trim();
  return static_cast<std::uint32_t>(rem);
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
  if (limbs_.size() != rhs.limbs_.size())
    return limbs_.size() <=> rhs.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t BigUint::bit_length() const {
  if (limbs_.empty()) return 0;
  return 32 * (limbs_.size() - 1) +
         (32 - static_cast<std::size_t>(std::countl_zero(limbs_.back())));
}

double BigUint::to_double() const {
  if (limbs_.empty()) return 0.0;
  // Top 64 bits give a faithful mantissa; ldexp restores the scale.
  const std::size_t bl = bit_length();
  if (bl <= 64) {
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;)
      v = (v << 32) | limbs_[i];
    return static_cast<double>(v);
  }
  const std::size_t drop = bl - 64;  // bits below the mantissa window
  std::uint64_t v = 0;
  for (std::size_t taken = 0; taken < 64; ++taken) {
    const std::size_t bit_index = bl - 1 - taken;
    const std::uint32_t limb = limbs_[bit_index / 32];
    v = (v << 1) | ((limb >> (bit_index % 32)) & 1u);
  }
  return std::ldexp(static_cast<double>(v), static_cast<int>(drop));
}

std::uint64_t BigUint::to_u64() const {
  if (bit_length() > 64) throw std::overflow_error("BigUint does not fit u64");
  std::uint64_t v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
  return v;
}

std::string BigUint::to_string() const {
  if (is_zero()) return "0";
  BigUint tmp = *this;
  std::string out;
  while (!tmp.is_zero()) {
    const std::uint32_t rem = tmp.div_small(1000000000u);
    if (tmp.is_zero()) {
      out = std::to_string(rem) + out;
    } else {
      std::string chunk = std::to_string(rem);
      out = std::string(9 - chunk.size(), '0') + chunk + out;
    }
  }
  return out;
}

std::vector<std::uint8_t> BigUint::to_bytes_be() const {
  std::vector<std::uint8_t> out;
  if (is_zero()) return out;
  const std::size_t nbytes = (bit_length() + 7) / 8;
  out.resize(nbytes);
  for (std::size_t i = 0; i < nbytes; ++i) {
    const std::size_t byte_index = nbytes - 1 - i;  // position from LSB
    const std::uint32_t limb = limbs_[byte_index / 4];
    out[i] = static_cast<std::uint8_t>(limb >> (8 * (byte_index % 4)));
  }
  return out;
}

BigUint BigUint::from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigUint out;
  for (const std::uint8_t b : bytes) {
    out.mul_small(256);
    out += BigUint(b);
  }
  return out;
}

BigUint BigUint::binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return BigUint(0);
  if (k > n - k) k = n - k;
  BigUint res(1);
  for (std::uint32_t i = 0; i < k; ++i) {
    res.mul_small(n - i);
    const std::uint32_t rem = res.div_small(i + 1);
    if (rem != 0) throw std::logic_error("binomial: inexact division");
  }
  return res;
}

std::size_t ceil_log2(const BigUint& x) {
  if (x.is_zero()) throw std::invalid_argument("ceil_log2: x must be >= 1");
  const std::size_t bl = x.bit_length();
  // Power of two iff only the top bit is set.
  bool power_of_two = true;
  for (std::size_t i = 0; i + 1 < x.limbs().size(); ++i) {
    if (x.limbs()[i] != 0) {
      power_of_two = false;
      break;
    }
  }
  if (power_of_two) {
    const std::uint32_t top = x.limbs().back();
    power_of_two = (top & (top - 1)) == 0;
  }
  return power_of_two ? bl - 1 : bl;
}

double Rational::to_double() const {
  if (den.is_zero()) throw std::invalid_argument("Rational: zero denominator");
  if (num.is_zero()) return 0.0;
  // Scale both to ~2^60 and divide; exponent bookkeeping keeps huge values
  // representable.
  const auto top_bits = [](const BigUint& v, int width) {
    const std::size_t bl = v.bit_length();
    double mant = 0.0;
    for (std::size_t taken = 0;
         taken < static_cast<std::size_t>(width) && taken < bl; ++taken) {
      const std::size_t bit_index = bl - 1 - taken;
      const std::uint32_t limb = v.limbs()[bit_index / 32];
      const std::uint32_t bit = (limb >> (bit_index % 32)) & 1u;
      mant = mant * 2.0 + bit;
    }
    return mant;
  };
  const int w = 60;
  const double mn = top_bits(num, w);
  const double md = top_bits(den, w);
  const auto en = static_cast<long>(num.bit_length()) -
                  std::min<long>(w, static_cast<long>(num.bit_length()));
  const auto ed = static_cast<long>(den.bit_length()) -
                  std::min<long>(w, static_cast<long>(den.bit_length()));
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

}  // namespace cellcert
