#include "cellcert/combinatorics.hpp"

#include <stdexcept>

namespace cellcert {

BigUint schlafli_cell_count(int M, int d) {
  if (M < 1 || d < 1)
    throw std::invalid_argument("schlafli_cell_count: need M >= 1, d >= 1");
  BigUint sum(0);
  for (int i = 0; i < d; ++i)
    sum += BigUint::binomial(static_cast<std::uint32_t>(M - 1),
                             static_cast<std::uint32_t>(i));
  sum.mul_small(2);
  return sum;
}

TailRatioBound binom_tail_ratio_bound(int M, int d) {
  if (M < 1 || d < 0)
    throw std::invalid_argument("binom_tail_ratio_bound: need M >= 1, d >= 0");
  if (M - 2 * d + 1 <= 0)
    throw std::invalid_argument(
        "binom_tail_ratio_bound: requires M - 2d + 1 > 0");
  TailRatioBound out;
  out.lhs = BigUint(0);
  for (int i = 0; i <= d; ++i)
    out.lhs += BigUint::binomial(static_cast<std::uint32_t>(M),
                                 static_cast<std::uint32_t>(i));
  BigUint num = BigUint::binomial(static_cast<std::uint32_t>(M),
                                  static_cast<std::uint32_t>(d));
  num.mul_small(static_cast<std::uint32_t>(M - d + 1));
  out.rhs = Rational{std::move(num),
                     BigUint(static_cast<std::uint64_t>(M - 2 * d + 1))};
  return out;
}

bool TailRatioBound::holds() const {
  // lhs <= num/den  <=>  lhs * den <= num.
  return lhs * rhs.den <= rhs.num;
}

Rational expected_face_count(int M, int d) {
  if (M < 2 || d < 2)
    throw std::invalid_argument("expected_face_count: need M >= 2, d >= 2");
  BigUint num(0);
  for (int i = 0; i <= d - 2; ++i)
    num += BigUint::binomial(static_cast<std::uint32_t>(M - 2),
                             static_cast<std::uint32_t>(i));
  num.mul_small(2);
  num.mul_small(static_cast<std::uint32_t>(M));
  BigUint den(0);
  for (int i = 0; i <= d - 1; ++i)
    den += BigUint::binomial(static_cast<std::uint32_t>(M - 1),
                             static_cast<std::uint32_t>(i));
  return Rational{std::move(num), std::move(den)};
}

}  // namespace cellcert
