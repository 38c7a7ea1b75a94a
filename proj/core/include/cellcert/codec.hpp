#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cellcert/bigint.hpp"
#include "cellcert/certifier.hpp"
#include "cellcert/frame.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/subsets.hpp"
#include "cellcert/unit_vector.hpp"

namespace cellcert::codec {

/// Colexicographic rank of a sorted k-subset of [0, M):
///   rank = sum_j C(c_j, j+1)  over  c_0 < c_1 < ... < c_{k-1}.
/// Throws on unsorted or duplicate indices.
BigUint subset_rank(std::span<const int> indices);

/// Inverse of subset_rank; throws when rank >= C(M, k).
std::vector<int> subset_unrank(const BigUint& rank, int M, int k);

/// Exact bit budget ceil(log2 C(M, k)) + k.
long bit_cost(int M, int k);

/// A unit vector represented by the indices of its selected band subset plus
/// one sign bit per index. The frame travels as its seed only (shared public
/// randomness), so seed bits are not part of bit_cost.
struct EncodedVector {
  RngStream frame_seed;
  int d = 0;
  int M = 0;
  int k = 0;
  BigUint rank;                        // subset rank in [0, C(M,k))
  std::vector<std::uint8_t> sign_bits; // one 0/1 per subset member, +1 -> 1
  double tau = 0.0;

  long bit_cost() const { return codec::bit_cost(M, k); }
};

/// Builds the frame from the stream, selects the band subset for x, and
/// stores the subset rank plus its sign bits. Deterministic.
EncodedVector encode(const UnitVector& x, int d, int M,
                     const ConstantsConfig& cfg, RngStream stream);

/// The shared frame an encoded vector refers to, regenerated from its seed.
GaussianFrame frame_for(const EncodedVector& encoded);

struct DecodeResult {
  UnitVector x_hat;
  CellCertificate certificate;
};

/// Regenerates the frame, reconstructs the subset, and returns an interior
/// surrogate for the cell center: the normalized average of 32 far-point
/// witnesses from random solver restarts. Throws CorruptInput when the
/// transmitted signs describe an empty cell.
DecodeResult decode(const EncodedVector& encoded,
                    const SolverOptions& opts = {});

/// Wire format (all integers little-endian): "CCE1", d u64, M u64, tau f64,
/// k u64, rank as 16-bit-length-prefixed big-endian bytes, sign bits packed
/// LSB-first, frame seed as two u64.
std::vector<std::uint8_t> serialize(const EncodedVector& encoded);
EncodedVector deserialize(std::span<const std::uint8_t> bytes);

struct RateDistortionRow {
  int M = 0;
  double median_bits = 0.0;
  double median_error = 0.0;
};

struct RateDistortionSummary {
  double slope_ln_error_vs_ln_M = 0.0;
  double slope_ln_error_vs_sqrt_bits = 0.0;
  double r_squared_sqrt_bits = 0.0;
  bool medians_strictly_decreasing = false;
};

std::vector<RateDistortionRow> rate_distortion_experiment(
    int d, std::span<const int> M_list, const ConstantsConfig& cfg, int trials,
    RngStream stream, RateDistortionSummary* summary = nullptr,
    int threads = 0);

}  // namespace cellcert::codec
