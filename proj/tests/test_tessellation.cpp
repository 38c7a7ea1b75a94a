#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "cellcert/combinatorics.hpp"
#include "cellcert/errors.hpp"
#include "cellcert/frame.hpp"
#include "cellcert/io.hpp"
#include "cellcert/oracle_d2.hpp"
#include "cellcert/subsets.hpp"

using namespace cellcert;

namespace {

// The worked 4-row planar example used across several contracts.
GaussianFrame four_row_frame() {
  Matrix rows(4, 2);
  rows.at(0, 0) = -0.1;
  rows.at(0, 1) = 0.9;
  rows.at(1, 0) = 0.5;
  rows.at(1, 1) = -0.2;
  rows.at(2, 0) = -0.05;
  rows.at(2, 1) = 0.3;
  rows.at(3, 0) = 0.7;
  rows.at(3, 1) = 0.1;
  return GaussianFrame::from_rows(std::move(rows));
}

}  // namespace

TEST_CASE("make_frame: preconditions, moments, determinism") {
  CHECK_THROWS_AS(make_frame(3, 5, RngStream{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_frame(3, 6, RngStream{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_frame(2, 10, RngStream{1, 0}), std::invalid_argument);

  const auto f = make_frame(4, 1024, RngStream{1, 0});
  double mean_norm = 0.0;
  for (int i = 0; i < f.M(); ++i) mean_norm += norm2(f.row(i));
  mean_norm /= f.M();
  CHECK(mean_norm > 0.9);
  CHECK(mean_norm < 1.1);

  const auto g = make_frame(4, 1024, RngStream{1, 0});
  CHECK(f.rows().data() == g.rows().data());
}

TEST_CASE("sign_encode: hand examples and symmetry") {
  const auto frame = four_row_frame();
  const UnitVector x(std::vector<double>{1.0, 0.0});
  const auto p = sign_encode(frame, x);
  CHECK(p.bits == std::vector<std::int8_t>{-1, 1, -1, 1});
  CHECK(p.zero_count == 0);

  // Single row equal to x.
  Matrix one(1, 2);
  one.at(0, 0) = 1.0;
  const auto single = GaussianFrame::from_rows(std::move(one));
  CHECK(sign_encode(single, x).bits == std::vector<std::int8_t>{1});

  // Antipodal query flips every bit.
  const UnitVector neg_x(std::vector<double>{-1.0, 0.0});
  const auto q = sign_encode(frame, neg_x);
  for (std::size_t i = 0; i < p.bits.size(); ++i)
    CHECK(q.bits[i] == -p.bits[i]);

  const UnitVector wrong_dim(std::vector<double>{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(sign_encode(frame, wrong_dim), std::invalid_argument);
}

TEST_CASE("sign_encode: exact zeros flagged or rejected") {
  Matrix rows(1, 2);
  rows.at(0, 1) = 1.0;  // orthogonal to x = e1
  const auto frame = GaussianFrame::from_rows(std::move(rows));
  const UnitVector x(std::vector<double>{1.0, 0.0});
  const auto p = sign_encode(frame, x);
  CHECK(p.bits == std::vector<std::int8_t>{1});
  CHECK(p.zero_count == 1);
  CHECK_THROWS_AS(sign_encode(frame, x, ZeroSignPolicy::strict),
                  DegenerateInput);
}

TEST_CASE("tau_of: frozen value, config gate, monotone in M") {
  ConstantsConfig cfg;
  CHECK(std::abs(tau_of(4, 1024, cfg) - 0.0187676) < 1e-6);
  cfg.C2 = 2.5;
  CHECK(tau_of(4, 1024, cfg) ==
        doctest::Approx(2.5 * 0.018767695856).epsilon(1e-9));
  cfg.C2 = 0.0;
  CHECK_THROWS_AS(tau_of(4, 1024, cfg), std::invalid_argument);
  cfg.C2 = 1.0;
  CHECK_THROWS_AS(tau_of(2, 1024, cfg), std::invalid_argument);
  CHECK_THROWS_AS(tau_of(4, 7, cfg), std::invalid_argument);
  for (int m = 8; m <= 1 << 15; m *= 2)
    CHECK(tau_of(5, 2 * m, cfg) < tau_of(5, m, cfg));
}

TEST_CASE("select_subsets: band membership and fixed V") {
  const auto frame = four_row_frame();
  const UnitVector x(std::vector<double>{1.0, 0.0});
  ConstantsConfig cfg;
  cfg.C1 = 0.1;  // |V| = round(0.1 * 2 * ln 2) = 0

  const auto sel = select_subsets(frame, x, 0.2, cfg, RngStream{3, 0});
  CHECK(sel.V.empty());
  CHECK(sel.W == std::vector<int>{0, 2});
  CHECK(sel.S == std::vector<int>{0, 2});
  CHECK(sel.variant == BandVariant::negative_band);

  // Vanishing band.
  const auto tiny = select_subsets(frame, x, 1e-300, cfg, RngStream{3, 0});
  CHECK(tiny.W.empty());

  // V is a function of the stream alone.
  cfg.C1 = 1.5;  // |V| = round(1.5 * 2 * ln 2) = 2
  const auto a = select_subsets(frame, x, 0.2, cfg, RngStream{3, 9});
  const auto b = select_subsets(frame, x, 0.2, cfg, RngStream{3, 9});
  CHECK(a.V == b.V);
  CHECK(a.V.size() == 2);
  CHECK(a.S.size() >= a.W.size());
  CHECK(a.overlap_count() ==
        static_cast<int>(a.V.size() + a.W.size() - a.S.size()));

  cfg.C1 = 100.0;  // requested |V| beyond M
  CHECK_THROWS_AS(select_subsets(frame, x, 0.2, cfg, RngStream{3, 0}),
                  std::invalid_argument);
}

TEST_CASE("select_half_band: strict boundaries and nesting") {
  const auto frame = four_row_frame();
  const UnitVector x(std::vector<double>{1.0, 0.0});

  CHECK(select_half_band(frame, x, 0.12).S == std::vector<int>{0});
  CHECK(select_half_band(frame, x, 0.2).S.empty());

  // Nesting against the negative band and the symmetric band at the same tau.
  ConstantsConfig cfg;
  cfg.C1 = 0.1;
  const auto f = make_frame(6, 4096, RngStream{17, 0});
  RngCursor rng(RngStream{18, 0});
  for (int rep = 0; rep < 5; ++rep) {
    const UnitVector y(random_unit(rng, 6));
    const double tau = tau_of(6, 4096, cfg) * 40;  // widen so the bands fill
    const auto half = select_half_band(f, y, tau);
    const auto neg = select_subsets(f, y, tau, cfg, RngStream{19, 0});
    std::set<int> w_set(neg.W.begin(), neg.W.end());
    for (const int i : half.S) CHECK(w_set.contains(i));
    for (const int i : neg.W) {
      const double ip = f.row_dot(i, y.coords());
      CHECK(std::abs(ip) < tau);  // W sits inside the symmetric band
      CHECK(ip < 0.0);
    }
  }
}

TEST_CASE("subset projection consistency") {
  const auto f = make_frame(5, 128, RngStream{23, 0});
  RngCursor rng(RngStream{24, 0});
  const UnitVector x(random_unit(rng, 5));
  const auto pattern = sign_encode(f, x);
  ConstantsConfig cfg;
  const auto sel = select_subsets(f, x, 0.3, cfg, RngStream{25, 0});
  for (const int i : sel.S) {
    const double ip = f.row_dot(i, x.coords());
    const int expect = ip > 0 ? 1 : -1;
    CHECK(pattern.bits[static_cast<std::size_t>(i)] == expect);
  }
}

TEST_CASE("schlafli_cell_count: frozen values and the d=2 law") {
  CHECK(schlafli_cell_count(1, 3).to_u64() == 2);
  CHECK(schlafli_cell_count(1, 7).to_u64() == 2);
  CHECK(schlafli_cell_count(3, 2).to_u64() == 6);
  CHECK(schlafli_cell_count(4, 3).to_u64() == 14);
  for (int m = 1; m <= 64; ++m)
    CHECK(schlafli_cell_count(m, 2).to_u64() ==
          2 * static_cast<std::uint64_t>(m));
}

TEST_CASE("schlafli_cell_count: sampled sign patterns in d=3") {
  const int M = 4;
  RngCursor rng(RngStream{31, 0});
  // Rows on the sphere at random; general position almost surely.
  Matrix rows(M, 3);
  for (int i = 0; i < M; ++i) {
    const auto v = random_unit(rng, 3);
    for (int j = 0; j < 3; ++j) rows.at(i, j) = v[static_cast<std::size_t>(j)];
  }
  const auto frame = GaussianFrame::from_rows(std::move(rows));
  std::set<unsigned> patterns;
  for (int s = 0; s < 200000; ++s) {
    const auto p = random_unit(rng, 3);
    unsigned key = 0;
    for (int i = 0; i < M; ++i)
      if (frame.row_dot(i, p) > 0) key |= 1u << i;
    patterns.insert(key);
  }
  CHECK(patterns.size() == schlafli_cell_count(M, 3).to_u64());
}

TEST_CASE("binom_tail_ratio_bound: frozen values and gates") {
  const auto b = binom_tail_ratio_bound(10, 3);
  CHECK(b.lhs.to_u64() == 176);
  CHECK(b.rhs.num.to_u64() == 960);  // C(10,3) * 8
  CHECK(b.rhs.den.to_u64() == 5);
  CHECK(b.holds());

  const auto d0 = binom_tail_ratio_bound(10, 0);
  CHECK(d0.lhs.to_u64() == 1);
  CHECK(std::abs(d0.rhs.to_double() - 1.0) < 1e-15);

  CHECK_NOTHROW(binom_tail_ratio_bound(6, 3));
  CHECK_THROWS_AS(binom_tail_ratio_bound(5, 3), std::invalid_argument);

  for (int m = 2; m <= 40; ++m)
    for (int d = 0; 2 * d <= m; ++d) CHECK(binom_tail_ratio_bound(m, d).holds());
}

TEST_CASE("expected_face_count: planar exactness and frozen ratio") {
  for (int m = 3; m <= 40; ++m) {
    const auto r = expected_face_count(m, 2);
    BigUint twice = r.den;
    twice.mul_small(2);
    CHECK(r.num == twice);  // exactly 2 faces per planar cell
  }
  const auto r = expected_face_count(10, 3);
  CHECK(r.num.to_u64() == 180);
  CHECK(r.den.to_u64() == 46);

  const double big = expected_face_count(1000000, 3).to_double();
  CHECK(big >= 3.99);
  CHECK(big <= 4.0);
}

TEST_CASE("exact_cell_d2: hand geometry") {
  const double pi = std::numbers::pi;
  const std::vector<double> normals{0.0, pi / 2};
  const auto arc = exact_cell_d2(normals, pi / 4);
  CHECK(arc.radius == doctest::Approx(0.7653669).epsilon(1e-6));
  CHECK(arc.cw_boundary == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(arc.ccw_boundary == doctest::Approx(pi / 2).epsilon(1e-12));

  // One hyperplane: hemisphere arcs of length pi.
  const std::vector<double> single{0.0};
  const auto hemi = exact_cell_d2(single, 0.3);
  CHECK(hemi.radius ==
        doctest::Approx(2.0 * std::sin((pi / 2 + 0.3) / 2)).epsilon(1e-12));

  CHECK(cell_boundaries_d2(normals).size() == 4);
  CHECK_THROWS_AS(exact_cell_d2(normals, pi / 2), DegenerateInput);
}

TEST_CASE("exact_cell_d2: every point of the arc shares x's sign pattern") {
  RngCursor rng(RngStream{37, 0});
  for (int rep = 0; rep < 20; ++rep) {
    const int M = 12;
    std::vector<double> angles(M);
    for (auto& a : angles) a = rng.uniform() * 2 * std::numbers::pi;
    const double x_angle = rng.uniform() * 2 * std::numbers::pi;
    const auto arc = exact_cell_d2(angles, x_angle);

    Matrix rows(M, 2);
    for (int i = 0; i < M; ++i) {
      rows.at(i, 0) = std::cos(angles[static_cast<std::size_t>(i)]);
      rows.at(i, 1) = std::sin(angles[static_cast<std::size_t>(i)]);
    }
    const auto frame = GaussianFrame::from_rows(std::move(rows));
    const UnitVector x(std::vector<double>{std::cos(x_angle), std::sin(x_angle)});
    const auto want = sign_encode(frame, x);

    const double lo = arc.cw_boundary;
    double width = arc.ccw_boundary - arc.cw_boundary;
    if (width < 0) width += 2 * std::numbers::pi;
    for (int s = 1; s < 40; ++s) {
      const double theta = lo + width * s / 40.0;
      const UnitVector p(std::vector<double>{std::cos(theta), std::sin(theta)});
      CHECK(sign_encode(frame, p).bits == want.bits);
    }
  }
}

TEST_CASE("frame file round trip with golden header") {
  const auto f = make_frame(3, 8, RngStream{0xAB, 0xCD});
  const auto bytes = io::serialize_frame(f);
  CHECK(bytes[0] == 'C');
  CHECK(bytes[1] == 'C');
  CHECK(bytes[2] == 'F');
  CHECK(bytes[3] == '1');
  CHECK(bytes[4] == 3);   // d, little-endian
  CHECK(bytes[12] == 8);  // M
  CHECK(bytes[20] == 0xAB);
  CHECK(bytes[28] == 0xCD);
  CHECK(bytes.size() == 4 + 4 * 8 + 3 * 8 * 8);

  const auto g = io::deserialize_frame(bytes);
  CHECK(g.d() == f.d());
  CHECK(g.M() == f.M());
  CHECK(g.seed() == f.seed());
  CHECK(g.rows().data() == f.rows().data());

  auto corrupt = bytes;
  corrupt[0] = 'X';
  CHECK_THROWS_AS(io::deserialize_frame(corrupt), CorruptInput);
}

TEST_CASE("sign pattern file round trip") {
  SignPattern p;
  p.bits = {1, -1, -1, 1, 1, 1, -1, 1, 1};
  const auto bytes = io::serialize_signs(p);
  CHECK(bytes[0] == 'C');
  CHECK(bytes[3] == '1');
  CHECK(bytes[4] == 9);
  CHECK(bytes.size() == 4 + 8 + 2);
  // LSB-first packing: bits 0,3,4,5,7 set -> 0b10111001.
  CHECK(bytes[12] == 0xB9);
  CHECK(bytes[13] == 0x01);
  const auto q = io::deserialize_signs(bytes);
  CHECK(q.bits == p.bits);
}
