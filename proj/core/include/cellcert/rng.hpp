#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cellcert {

/// Counter-based random stream descriptor. A stream is fully identified by
/// (master_seed, stream_id); the i-th output word is a pure function of the
/// descriptor and i, so generation is stateless and order-independent.
/// Equal descriptors reproduce the same sequence on every platform.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Word at position `counter` in this stream.
  std::uint64_t word_at(std::uint64_t counter) const;

  /// Child stream with an unrelated sequence. Deriving with distinct salts
  /// (trial ids, purpose tags) partitions one master seed into independent
  /// streams.
  RngStream derive(std::uint64_t salt) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Sequential cursor over a stream. Cheap to copy; copying forks the position.
class RngCursor {
 public:
  explicit RngCursor(RngStream stream) : stream_(stream) {}

  std::uint64_t next_u64() { return stream_.word_at(counter_++); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  /// Uniform in (0, 1]; never zero, safe under log().
  double uniform_oc() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
  }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller; draws two uniforms per pair and caches
  /// the second value.
  double gaussian();

  /// Normal with the given variance.
  double gaussian(double variance);

  const RngStream& stream() const { return stream_; }
  std::uint64_t position() const { return counter_; }

 private:
  RngStream stream_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n i.i.d. N(0, variance) samples from the head of the stream. The i-th
/// sample depends only on (stream, i), so scaling the variance rescales the
/// exact same underlying normals.
std::vector<double> gaussian(const RngStream& stream, std::size_t n,
                             double variance);

/// Uniform point on S^{d-1} (normalized Gaussian vector).
std::vector<double> random_unit(RngCursor& rng, int dim);

/// k distinct indices drawn without replacement from [0, n), sorted.
std::vector<int> sample_without_replacement(int n, int k, RngCursor& rng);

}  // namespace cellcert
