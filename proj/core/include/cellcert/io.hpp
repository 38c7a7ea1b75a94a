#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellcert/frame.hpp"
#include "cellcert/lab.hpp"

namespace cellcert::io {

/// Frame file "CCF1": magic, then d, M, master_seed, stream_id as u64 LE,
/// then M*d doubles LE row-major.
std::vector<std::uint8_t> serialize_frame(const GaussianFrame& frame);
GaussianFrame deserialize_frame(std::span<const std::uint8_t> bytes);

/// Sign pattern file "CCS1": magic, M as u64 LE, then bits packed LSB-first
/// (+1 -> set bit).
std::vector<std::uint8_t> serialize_signs(const SignPattern& pattern);
SignPattern deserialize_signs(std::span<const std::uint8_t> bytes);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

/// Doubles format as shortest round-trip decimal ("%.17g"); deterministic.
std::string format_double(double v);

/// CSV writer for TrialStatistics rows with the fixed header. Comment lines
/// (if any) are emitted first, each prefixed with '#'.
std::string trial_csv(std::span<const lab::TrialStatistics> rows,
                      std::span<const std::string> comments = {});

void write_text(const std::string& path, const std::string& text);

}  // namespace cellcert::io
