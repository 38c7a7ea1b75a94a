#include "cellcert/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace cellcert {
namespace {

// splitmix64 finalizer; full-period 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::word_at(std::uint64_t counter) const {
  const std::uint64_t k1 = mix64(master_seed ^ 0x8BADF00D00C0FFEEull);
  const std::uint64_t k2 = mix64(stream_id ^ k1);
  return mix64(mix64(counter ^ k2) + k1);
}

RngStream RngStream::derive(std::uint64_t salt) const {
  return RngStream{master_seed, mix64(stream_id ^ mix64(salt ^ 0xD1CE5EEDull))};
}

std::uint64_t RngCursor::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngCursor::below: n must be > 0");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double RngCursor::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_oc();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RngCursor::gaussian(double variance) {
  return gaussian() * std::sqrt(variance);
}

std::vector<double> gaussian(const RngStream& stream, std::size_t n,
                             double variance) {
  if (!std::isfinite(variance) || variance <= 0.0)
    throw std::invalid_argument("gaussian: variance must be finite and > 0");
  std::vector<double> out(n);
  const double scale = std::sqrt(variance);
  // Pair 2p consumes words (2p, 2p+1) regardless of n's parity, so prefixes
  // of the same stream agree across calls.
  for (std::size_t p = 0; 2 * p < n; ++p) {
    const double u1 =
        static_cast<double>((stream.word_at(2 * p) >> 11) + 1) * 0x1p-53;
    const double u2 =
        static_cast<double>(stream.word_at(2 * p + 1) >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    out[2 * p] = scale * (r * std::cos(theta));
    if (2 * p + 1 < n) out[2 * p + 1] = scale * (r * std::sin(theta));
  }
  return out;
}

std::vector<double> random_unit(RngCursor& rng, int dim) {
  if (dim < 1) throw std::invalid_argument("random_unit: dim must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (;;) {
    double sq = 0.0;
    for (auto& c : v) {
      c = rng.gaussian();
      sq += c * c;
    }
    if (sq > 1e-24) {
      const double inv = 1.0 / std::sqrt(sq);
      for (auto& c : v) c *= inv;
      return v;
    }
  }
}

std::vector<int> sample_without_replacement(int n, int k, RngCursor& rng) {
  if (k < 0 || k > n)
    throw std::invalid_argument(
        "sample_without_replacement: need 0 <= k <= n");
  std::unordered_map<int, int> moved;
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const int r = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
    const auto it_r = moved.find(r);
    const int value_r = it_r == moved.end() ? r : it_r->second;
    const auto it_j = moved.find(j);
    const int value_j = it_j == moved.end() ? j : it_j->second;
    out[static_cast<std::size_t>(j)] = value_r;
    moved[r] = value_j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cellcert
