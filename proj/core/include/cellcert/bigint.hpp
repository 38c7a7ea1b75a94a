#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cellcert {

/// Unsigned arbitrary-precision integer on 32-bit limbs (little-endian).
/// Sized for combinatorial quantities: binomial sums and subset ranks up to a
/// few thousand bits.
class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t v);  // NOLINT: implicit by design, mirrors int literals

  static BigUint binomial(std::uint32_t n, std::uint32_t k);

  bool is_zero() const { return limbs_.empty(); }

  BigUint& operator+=(const BigUint& rhs);
  BigUint& operator-=(const BigUint& rhs);  // requires *this >= rhs
  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
  friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
  friend BigUint operator*(const BigUint& a, const BigUint& b);

  BigUint& mul_small(std::uint32_t m);
  /// Divides in place, returns the remainder.
  std::uint32_t div_small(std::uint32_t m);

  std::strong_ordering operator<=>(const BigUint& rhs) const;
  bool operator==(const BigUint& rhs) const = default;

  /// Number of bits in the binary representation; 0 for zero.
  std::size_t bit_length() const;

  /// Nearest double; +inf when out of range.
  double to_double() const;

  /// Exact value as u64; throws std::overflow_error when it does not fit.
  std::uint64_t to_u64() const;

  std::string to_string() const;  // decimal

  /// Big-endian bytes, minimal length (empty for zero).
  std::vector<std::uint8_t> to_bytes_be() const;
  static BigUint from_bytes_be(std::span<const std::uint8_t> bytes);

  const std::vector<std::uint32_t>& limbs() const { return limbs_; }

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;
};

/// ceil(log2(x)) for x >= 1.
std::size_t ceil_log2(const BigUint& x);

/// Non-negative rational as an exact pair; not reduced.
struct Rational {
  BigUint num;
  BigUint den;
  double to_double() const;
};

}  // namespace cellcert
