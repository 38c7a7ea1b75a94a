#include "cellcert/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "cellcert/errors.hpp"
#include "cellcert/lab.hpp"
#include "cellcert/parallel.hpp"

namespace cellcert::codec {
namespace {

enum StreamSalt : std::uint64_t {
  kSaltFrame = 0xF0A31,
  kSaltVSel = 0xB5E1,
  kSaltX = 0xAC5E,
  kSaltFeasible = 0xFEA5,
  kSaltWitness = 0x817E55,
  kSaltRate = 0x58,
};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw CorruptInput("decode: truncated payload");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(in[pos + static_cast<std::size_t>(i)]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

BigUint subset_rank(std::span<const int> indices) {
  BigUint rank(0);
  int prev = -1;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int c = indices[j];
    if (c <= prev)
      throw std::invalid_argument(
          "subset_rank: indices must be strictly increasing");
    if (c < 0) throw std::invalid_argument("subset_rank: negative index");
    rank += BigUint::binomial(static_cast<std::uint32_t>(c),
                              static_cast<std::uint32_t>(j + 1));
    prev = c;
  }
  return rank;
}

std::vector<int> subset_unrank(const BigUint& rank, int M, int k) {
  if (k < 0 || k > M) throw std::invalid_argument("subset_unrank: bad k");
  if (rank >= BigUint::binomial(static_cast<std::uint32_t>(M),
                                static_cast<std::uint32_t>(k)))
    throw std::invalid_argument("subset_unrank: rank out of range");
  std::vector<int> out(static_cast<std::size_t>(k));
  BigUint remaining = rank;
  int ceiling = M;  // elements must stay below previous picks
  for (int j = k; j >= 1; --j) {
    // Largest c < ceiling with C(c, j) <= remaining, by binary search
    // (C(., j) is nondecreasing). C(j-1, j) = 0 <= remaining always holds.
    int lo = j - 1;
    int hi = ceiling - 1;
    while (lo < hi) {
      const int mid = lo + (hi - lo + 1) / 2;
      if (BigUint::binomial(static_cast<std::uint32_t>(mid),
                            static_cast<std::uint32_t>(j)) <= remaining)
        lo = mid;
      else
        hi = mid - 1;
    }
    const int c = lo;
    remaining -= BigUint::binomial(static_cast<std::uint32_t>(c),
                                   static_cast<std::uint32_t>(j));
    out[static_cast<std::size_t>(j - 1)] = c;
    ceiling = c;
  }
  if (!remaining.is_zero())
    throw std::logic_error("subset_unrank: nonzero remainder");
  return out;
}

long bit_cost(int M, int k) {
  if (k < 0 || k > M) throw std::invalid_argument("bit_cost: need 0 <= k <= M");
  const BigUint count = BigUint::binomial(static_cast<std::uint32_t>(M),
                                          static_cast<std::uint32_t>(k));
  return static_cast<long>(ceil_log2(count)) + k;
}

EncodedVector encode(const UnitVector& x, int d, int M,
                     const ConstantsConfig& cfg, RngStream stream) {
  const auto frame = make_frame(d, M, stream.derive(kSaltFrame));
  if (x.dim() != d) throw std::invalid_argument("encode: dimension mismatch");
  const double tau = tau_of(d, M, cfg);
  const auto sel = select_subsets(frame, x, tau, cfg, stream.derive(kSaltVSel));
  const auto pattern = sign_encode(frame, x);

  EncodedVector e;
  e.frame_seed = stream;
  e.d = d;
  e.M = M;
  e.k = static_cast<int>(sel.S.size());
  e.tau = tau;
  e.rank = subset_rank(sel.S);
  e.sign_bits.resize(sel.S.size());
  for (std::size_t i = 0; i < sel.S.size(); ++i)
    e.sign_bits[i] =
        pattern.bits[static_cast<std::size_t>(sel.S[i])] > 0 ? 1 : 0;
  return e;
}

GaussianFrame frame_for(const EncodedVector& encoded) {
  return make_frame(encoded.d, encoded.M, encoded.frame_seed.derive(kSaltFrame));
}

DecodeResult decode(const EncodedVector& encoded, const SolverOptions& opts) {
  if (encoded.d < 2 || encoded.M < 1 || encoded.k < 0 ||
      encoded.k > encoded.M ||
      encoded.sign_bits.size() != static_cast<std::size_t>(encoded.k))
    throw CorruptInput("decode: malformed encoded vector");

  if (encoded.k == 0) {
    // No information: any unit vector is consistent.
    const UnitVector arbitrary = UnitVector::axis(encoded.d, 0);
    std::vector<double> anti(arbitrary.coords().begin(),
                             arbitrary.coords().end());
    for (auto& c : anti) c = -c;
    CellCertificate cert{UnitVector(std::move(anti)), 2.0, 0, 0.0, true};
    return DecodeResult{arbitrary, cert};
  }

  const auto frame = frame_for(encoded);
  const auto subset = subset_unrank(encoded.rank, encoded.M, encoded.k);
  std::vector<std::int8_t> signs(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i)
    signs[i] = encoded.sign_bits[i] ? 1 : -1;

  const RngStream solver_stream =
      encoded.frame_seed.derive(kSaltFeasible).derive(opts.seed);
  const auto anchor =
      feasible_point(frame, subset, signs, solver_stream);
  if (!anchor)
    throw CorruptInput("decode: sign pattern describes an empty cell");

  // Cell center surrogate: normalized average of far-point witnesses from
  // random restarts. Each witness lies in the (convex) cone, so the
  // normalized average stays inside the cell.
  SolverOptions run = opts;
  run.reflection_starts = 0;
  run.random_starts = 1;
  run.antipode_start = false;
  std::vector<double> acc(static_cast<std::size_t>(encoded.d), 0.0);
  RngCursor seeds(encoded.frame_seed.derive(kSaltWitness).derive(opts.seed));
  for (int r = 0; r < 32; ++r) {
    run.seed = seeds.next_u64();
    const auto cert = cell_radius_signed(frame, subset, signs, *anchor, run);
    for (int j = 0; j < encoded.d; ++j)
      acc[static_cast<std::size_t>(j)] += cert.witness[j];
  }
  if (norm2(acc) < 1e-12)
    acc[0] = 1.0;  // witnesses cancelled; fall back to the anchor direction
  UnitVector x_hat{std::vector<double>(acc)};

  const auto certificate = cell_radius_signed(frame, subset, signs, x_hat, opts);
  return DecodeResult{x_hat, certificate};
}

std::vector<std::uint8_t> serialize(const EncodedVector& e) {
  std::vector<std::uint8_t> out;
  out.push_back('C');
  out.push_back('C');
  out.push_back('E');
  out.push_back('1');
  put_u64(out, static_cast<std::uint64_t>(e.d));
  put_u64(out, static_cast<std::uint64_t>(e.M));
  std::uint64_t tau_bits;
  static_assert(sizeof(double) == 8);
  std::memcpy(&tau_bits, &e.tau, 8);
  put_u64(out, tau_bits);
  put_u64(out, static_cast<std::uint64_t>(e.k));
  const auto rank_bytes = e.rank.to_bytes_be();
  if (rank_bytes.size() > 0xFFFF)
    throw std::invalid_argument("serialize: rank too large");
  out.push_back(static_cast<std::uint8_t>(rank_bytes.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(rank_bytes.size() >> 8));
  out.insert(out.end(), rank_bytes.begin(), rank_bytes.end());
  std::vector<std::uint8_t> packed((e.sign_bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < e.sign_bits.size(); ++i)
    if (e.sign_bits[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  out.insert(out.end(), packed.begin(), packed.end());
  put_u64(out, e.frame_seed.master_seed);
  put_u64(out, e.frame_seed.stream_id);
  return out;
}

EncodedVector deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 4 || bytes[0] != 'C' || bytes[1] != 'C' ||
      bytes[2] != 'E' || bytes[3] != '1')
    throw CorruptInput("deserialize: bad magic");
  pos = 4;
  EncodedVector e;
  e.d = static_cast<int>(get_u64(bytes, pos));
  e.M = static_cast<int>(get_u64(bytes, pos));
  const std::uint64_t tau_bits = get_u64(bytes, pos);
  std::memcpy(&e.tau, &tau_bits, 8);
  e.k = static_cast<int>(get_u64(bytes, pos));
  if (e.d < 2 || e.M < 1 || e.k < 0 || e.k > e.M)
    throw CorruptInput("deserialize: invalid header fields");
  if (pos + 2 > bytes.size()) throw CorruptInput("deserialize: truncated rank");
  const std::size_t rank_len =
      bytes[pos] | (static_cast<std::size_t>(bytes[pos + 1]) << 8);
  pos += 2;
  if (pos + rank_len > bytes.size())
    throw CorruptInput("deserialize: truncated rank bytes");
  e.rank = BigUint::from_bytes_be(bytes.subspan(pos, rank_len));
  pos += rank_len;
  if (e.rank >= BigUint::binomial(static_cast<std::uint32_t>(e.M),
                                  static_cast<std::uint32_t>(e.k)))
    throw CorruptInput("deserialize: rank out of range");
  const std::size_t packed_len = (static_cast<std::size_t>(e.k) + 7) / 8;
  if (pos + packed_len > bytes.size())
    throw CorruptInput("deserialize: truncated sign bits");
  e.sign_bits.resize(static_cast<std::size_t>(e.k));
  for (int i = 0; i < e.k; ++i)
    e.sign_bits[static_cast<std::size_t>(i)] =
        (bytes[pos + static_cast<std::size_t>(i) / 8] >> (i % 8)) & 1u;
  pos += packed_len;
  e.frame_seed.master_seed = get_u64(bytes, pos);
  e.frame_seed.stream_id = get_u64(bytes, pos);
  if (pos != bytes.size()) throw CorruptInput("deserialize: trailing bytes");
  return e;
}

std::vector<RateDistortionRow> rate_distortion_experiment(
    int d, std::span<const int> M_list, const ConstantsConfig& cfg, int trials,
    RngStream stream, RateDistortionSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument(
        "rate_distortion_experiment: trials must be >= 1");
  for (std::size_t i = 0; i + 1 < M_list.size(); ++i)
    if (M_list[i] >= M_list[i + 1])
      throw std::invalid_argument(
          "rate_distortion_experiment: M_list must be increasing");
  for (const int M : M_list)
    if (M <= 2 * d)
      throw std::invalid_argument(
          "rate_distortion_experiment: every M must exceed 2d");

  const long total = static_cast<long>(M_list.size()) * trials;
  std::vector<double> errors(static_cast<std::size_t>(total));
  std::vector<double> bits(static_cast<std::size_t>(total));

  parallel_for_index(total, threads, [&](long task) {
    const std::size_t mi = static_cast<std::size_t>(task) /
                           static_cast<std::size_t>(trials);
    const long t = task % trials;
    const int M = M_list[mi];
    const RngStream ts = stream.derive(kSaltRate)
                             .derive(static_cast<std::uint64_t>(d))
                             .derive(static_cast<std::uint64_t>(M))
                             .derive(static_cast<std::uint64_t>(t));
    RngCursor xrng(ts.derive(kSaltX));
    const UnitVector x(random_unit(xrng, d));
    const auto e = encode(x, d, M, cfg, ts);
    const auto result = decode(e);
    errors[static_cast<std::size_t>(task)] = distance(x, result.x_hat);
    bits[static_cast<std::size_t>(task)] =
        static_cast<double>(e.bit_cost());
  });

  std::vector<RateDistortionRow> rows;
  rows.reserve(M_list.size());
  for (std::size_t mi = 0; mi < M_list.size(); ++mi) {
    std::vector<double> err_m(errors.begin() + static_cast<long>(mi) * trials,
                              errors.begin() + static_cast<long>(mi + 1) * trials);
    std::vector<double> bits_m(bits.begin() + static_cast<long>(mi) * trials,
                               bits.begin() + static_cast<long>(mi + 1) * trials);
    rows.push_back({M_list[mi], lab::median(bits_m), lab::median(err_m)});
  }

  if (summary) {
    std::vector<double> ln_m, ln_err, sqrt_bits;
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ln_m.push_back(std::log(rows[i].M));
      ln_err.push_back(std::log(rows[i].median_error));
      sqrt_bits.push_back(std::sqrt(rows[i].median_bits));
      if (i > 0 && !(rows[i].median_error < rows[i - 1].median_error))
        decreasing = false;
    }
    if (rows.size() >= 2) {
      summary->slope_ln_error_vs_ln_M = lab::linear_fit(ln_m, ln_err).slope;
      const auto fit = lab::linear_fit(sqrt_bits, ln_err);
      summary->slope_ln_error_vs_sqrt_bits = fit.slope;
      summary->r_squared_sqrt_bits = fit.r_squared;
    }
    summary->medians_strictly_decreasing = decreasing;
  }
  return rows;
}

}  // namespace cellcert::codec
