#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cellcert/codec.hpp"
#include "cellcert/errors.hpp"
#include "cellcert/lab.hpp"

using namespace cellcert;
using namespace cellcert::codec;

namespace {

// All k-subsets of [0, n) in colexicographic order, by direct enumeration.
std::vector<std::vector<int>> colex_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  const auto rec = [&](auto&& self, int pos, int max_val) -> void {
    if (pos < 0) {
      out.push_back(cur);
      return;
    }
    // Colex: generate by the largest element last.
    for (int v = pos; v <= max_val; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos - 1, v - 1);
    }
  };
  if (k == 0) {
    out.push_back({});
    return out;
  }
  rec(rec, k - 1, n - 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    for (std::size_t j = a.size(); j-- > 0;)
      if (a[j] != b[j]) return a[j] < b[j];
    return false;
  });
  return out;
}

// Pascal-triangle binomial: the addition-only oracle, independent of the
// multiply/divide route inside BigUint::binomial.
BigUint pascal_binomial(int n, int k) {
  if (k < 0 || k > n) return BigUint(0);
  std::vector<BigUint> row{BigUint(1)};
  for (int i = 1; i <= n; ++i) {
    std::vector<BigUint> next(static_cast<std::size_t>(std::min(i, k)) + 1);
    next[0] = BigUint(1);
    for (std::size_t j = 1; j < next.size(); ++j) {
      next[j] = j < row.size() ? row[j] : BigUint(0);
      if (j - 1 < row.size()) next[j] += row[j - 1];
    }
    row = std::move(next);
  }
  return k < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(k)]
                                          : BigUint(0);
}

}  // namespace

TEST_CASE("subset_rank: colex examples and enumeration order") {
  CHECK(subset_rank(std::vector<int>{0, 1, 2}).to_u64() == 0);
  CHECK(subset_rank(std::vector<int>{1, 2, 3}).to_u64() == 3);
  CHECK(subset_rank(std::vector<int>{}).to_u64() == 0);

  const auto subsets = colex_subsets(5, 3);
  REQUIRE(subsets.size() == 10);
  for (std::size_t r = 0; r < subsets.size(); ++r)
    CHECK(subset_rank(subsets[r]).to_u64() == r);

  CHECK_THROWS_AS(subset_rank(std::vector<int>{2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(subset_rank(std::vector<int>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(subset_rank(std::vector<int>{-1, 2}), std::invalid_argument);
}

TEST_CASE("subset_unrank: inverse on C(8,3) and random large cases") {
  for (std::uint64_t r = 0; r < 56; ++r) {
    const auto s = subset_unrank(BigUint(r), 8, 3);
    CHECK(subset_rank(s).to_u64() == r);
    for (std::size_t j = 1; j < s.size(); ++j) CHECK(s[j - 1] < s[j]);
    CHECK(s.back() < 8);
  }
  CHECK_THROWS_AS(subset_unrank(BigUint(56), 8, 3), std::invalid_argument);

  RngCursor rng(RngStream{55, 0});
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> s = sample_without_replacement(5000, 40, rng);
    const auto back = subset_unrank(subset_rank(s), 5000, 40);
    CHECK(back == s);
  }
}

TEST_CASE("bit_cost: frozen values and ceiling bounds") {
  CHECK(bit_cost(8, 2) == 7);  // ceil(log2 28) = 5, plus 2 sign bits
  CHECK(bit_cost(64, 0) == 0);
  CHECK(bit_cost(64, 64) == 64);
  for (int k = 0; k <= 24; ++k) {
    const double lg = std::log2(pascal_binomial(24, k).to_double());
    const double cost = static_cast<double>(bit_cost(24, k));
    CHECK(cost >= lg + k - 1.0 - 1e-9);
    CHECK(cost <= lg + k + 1.0 + 1e-9);
  }
  CHECK_THROWS_AS(bit_cost(8, 9), std::invalid_argument);
}

TEST_CASE("encode: projection consistency, determinism, bit accounting") {
  ConstantsConfig cfg;
  RngCursor xr(RngStream{60, 0});
  const UnitVector x(random_unit(xr, 8));
  const auto e1 = encode(x, 8, 512, cfg, RngStream{61, 0});
  const auto e2 = encode(x, 8, 512, cfg, RngStream{61, 0});
  CHECK(e1.rank == e2.rank);
  CHECK(e1.sign_bits == e2.sign_bits);
  CHECK(e1.k == e2.k);
  CHECK(serialize(e1) == serialize(e2));

  // Sign bits equal the full pattern restricted to the subset.
  const auto frame = frame_for(e1);
  const auto pattern = sign_encode(frame, x);
  const auto subset = subset_unrank(e1.rank, e1.M, e1.k);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const int want = pattern.bits[static_cast<std::size_t>(subset[i])] > 0 ? 1 : 0;
    CHECK(e1.sign_bits[i] == want);
  }

  // Bit cost against the addition-only binomial oracle.
  const BigUint count = pascal_binomial(e1.M, e1.k);
  CHECK(e1.bit_cost() == static_cast<long>(ceil_log2(count)) + e1.k);
}

TEST_CASE("encode at production scale: bit cost against the Pascal oracle") {
  ConstantsConfig cfg;
  RngCursor xr(RngStream{59, 0});
  const UnitVector x(random_unit(xr, 8));
  const auto e = encode(x, 8, 4096, cfg, RngStream{58, 0});
  CHECK(e.k > 0);
  const BigUint count = pascal_binomial(e.M, e.k);
  CHECK(e.bit_cost() == static_cast<long>(ceil_log2(count)) + e.k);
  CHECK(e.rank < count);
}

TEST_CASE("decode: round trip lands in the transmitted cell") {
  ConstantsConfig cfg;
  RngCursor xr(RngStream{62, 0});
  for (int rep = 0; rep < 3; ++rep) {
    const UnitVector x(random_unit(xr, 8));
    const auto e = encode(x, 8, 512, cfg,
                          RngStream{63, static_cast<std::uint64_t>(rep)});
    const auto result = decode(e);
    CHECK(distance(x, result.x_hat) < 1.0);
    CHECK(distance(x, result.x_hat) <= 2.0 * result.certificate.radius + 1e-9);

    // The decoded point satisfies every transmitted sign.
    const auto frame = frame_for(e);
    const auto subset = subset_unrank(e.rank, e.M, e.k);
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const double ip = frame.row_dot(subset[i], result.x_hat.coords());
      if (e.sign_bits[i])
        CHECK(ip >= -1e-9);
      else
        CHECK(ip <= 1e-9);
    }
    // Determinism end to end.
    const auto again = decode(e);
    CHECK(distance(again.x_hat, result.x_hat) == 0.0);
  }
}

TEST_CASE("decode: zero-information code returns some unit vector") {
  EncodedVector e;
  e.frame_seed = RngStream{1, 0};
  e.d = 8;
  e.M = 512;
  e.k = 0;
  e.tau = 0.05;
  const auto result = decode(e);
  CHECK(result.x_hat.dim() == 8);
  CHECK(result.certificate.radius == 2.0);
}

TEST_CASE("decode: contradictory signs raise CorruptInput") {
  // Self-encoded vector, then flip every transmitted sign bit. With dozens of
  // band constraints the flipped cell is empty.
  ConstantsConfig cfg;
  RngCursor xr(RngStream{64, 0});
  const UnitVector x(random_unit(xr, 8));
  auto e = encode(x, 8, 512, cfg, RngStream{65, 0});
  REQUIRE(e.k >= 8);
  for (std::size_t i = 0; i < e.sign_bits.size(); i += 2) e.sign_bits[i] ^= 1u;
  CHECK_THROWS_AS(decode(e), CorruptInput);
}

TEST_CASE("wire format: golden bytes and validation") {
  EncodedVector e;
  e.d = 3;
  e.M = 8;
  e.k = 2;
  e.rank = BigUint(3);  // subset {1,3} in colex? unrank checks below
  e.sign_bits = {1, 0};
  e.tau = 0.5;
  e.frame_seed = RngStream{1, 2};

  const auto bytes = serialize(e);
  const std::vector<std::uint8_t> expect{
      'C', 'C', 'E', '1',
      3, 0, 0, 0, 0, 0, 0, 0,            // d
      8, 0, 0, 0, 0, 0, 0, 0,            // M
      0, 0, 0, 0, 0, 0, 0xE0, 0x3F,      // tau = 0.5, f64 LE
      2, 0, 0, 0, 0, 0, 0, 0,            // k
      1, 0,                              // rank length prefix
      3,                                 // rank big-endian
      0x01,                              // sign bits LSB-first
      1, 0, 0, 0, 0, 0, 0, 0,            // master_seed
      2, 0, 0, 0, 0, 0, 0, 0,            // stream_id
  };
  CHECK(bytes == expect);

  const auto back = deserialize(bytes);
  CHECK(back.d == e.d);
  CHECK(back.M == e.M);
  CHECK(back.k == e.k);
  CHECK(back.tau == e.tau);
  CHECK(back.rank == e.rank);
  CHECK(back.sign_bits == e.sign_bits);
  CHECK(back.frame_seed == e.frame_seed);

  auto bad_magic = bytes;
  bad_magic[3] = '2';
  CHECK_THROWS_AS(deserialize(bad_magic), CorruptInput);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(deserialize(truncated), CorruptInput);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize(trailing), CorruptInput);

  // Rank beyond C(M, k) is rejected.
  EncodedVector big = e;
  big.rank = BigUint(28);  // C(8,2) = 28
  CHECK_THROWS_AS(deserialize(serialize(big)), CorruptInput);
}

TEST_CASE("encode/decode round trips through the wire") {
  ConstantsConfig cfg;
  RngCursor xr(RngStream{66, 0});
  const UnitVector x(random_unit(xr, 6));
  const auto e = encode(x, 6, 128, cfg, RngStream{67, 0});
  const auto back = deserialize(serialize(e));
  CHECK(back.rank == e.rank);
  CHECK(back.sign_bits == e.sign_bits);
  const auto r1 = decode(e);
  const auto r2 = decode(back);
  CHECK(distance(r1.x_hat, r2.x_hat) == 0.0);
}

TEST_CASE("rate_distortion_experiment: decreasing medians on a small grid") {
  ConstantsConfig cfg;
  RateDistortionSummary s;
  const std::vector<int> ms{64, 256, 1024};
  const auto rows =
      rate_distortion_experiment(5, ms, cfg, 8, RngStream{68, 0}, &s, 0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].median_error > rows[2].median_error);
  CHECK(rows[0].median_bits < rows[2].median_bits);
  CHECK(s.slope_ln_error_vs_ln_M < 0.0);

  const std::vector<int> bad{256, 128};
  CHECK_THROWS_AS(rate_distortion_experiment(5, bad, cfg, 4, RngStream{69, 0}),
                  std::invalid_argument);
  const std::vector<int> too_small{10};
  CHECK_THROWS_AS(
      rate_distortion_experiment(5, too_small, cfg, 4, RngStream{69, 0}),
      std::invalid_argument);
}
