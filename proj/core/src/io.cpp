#include "cellcert/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cellcert/errors.hpp"

namespace cellcert::io {
namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw CorruptInput("file: truncated integer");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(in[pos + static_cast<std::size_t>(i)])
         << (8 * i);
  pos += 8;
  return v;
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

double get_f64(std::span<const std::uint8_t> in, std::size_t& pos) {
  const std::uint64_t bits = get_u64(in, pos);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void check_magic(std::span<const std::uint8_t> bytes, const char* magic) {
  if (bytes.size() < 4 || bytes[0] != magic[0] || bytes[1] != magic[1] ||
      bytes[2] != magic[2] || bytes[3] != magic[3])
    throw CorruptInput("file: bad magic");
}

}  // namespace

std::vector<std::uint8_t> serialize_frame(const GaussianFrame& frame) {
  std::vector<std::uint8_t> out{'C', 'C', 'F', '1'};
  put_u64(out, static_cast<std::uint64_t>(frame.d()));
  put_u64(out, static_cast<std::uint64_t>(frame.M()));
  put_u64(out, frame.seed().master_seed);
  put_u64(out, frame.seed().stream_id);
  for (int i = 0; i < frame.M(); ++i)
    for (const double v : frame.row(i)) put_f64(out, v);
  return out;
}

GaussianFrame deserialize_frame(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, "CCF1");
  std::size_t pos = 4;
  const auto d = static_cast<int>(get_u64(bytes, pos));
  const auto M = static_cast<int>(get_u64(bytes, pos));
  RngStream seed;
  seed.master_seed = get_u64(bytes, pos);
  seed.stream_id = get_u64(bytes, pos);
  if (d < 2 || M < 1) throw CorruptInput("frame file: bad shape");
  Matrix rows(M, d);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < d; ++j) rows.at(i, j) = get_f64(bytes, pos);
  if (pos != bytes.size()) throw CorruptInput("frame file: trailing bytes");
  return GaussianFrame::from_rows(std::move(rows), seed);
}

std::vector<std::uint8_t> serialize_signs(const SignPattern& pattern) {
  std::vector<std::uint8_t> out{'C', 'C', 'S', '1'};
  put_u64(out, static_cast<std::uint64_t>(pattern.bits.size()));
  std::vector<std::uint8_t> packed((pattern.bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < pattern.bits.size(); ++i)
    if (pattern.bits[i] > 0)
      packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  out.insert(out.end(), packed.begin(), packed.end());
  return out;
}

SignPattern deserialize_signs(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, "CCS1");
  std::size_t pos = 4;
  const auto M = get_u64(bytes, pos);
  const std::size_t packed_len = (static_cast<std::size_t>(M) + 7) / 8;
  if (bytes.size() != pos + packed_len)
    throw CorruptInput("sign file: wrong length");
  SignPattern pattern;
  pattern.bits.resize(static_cast<std::size_t>(M));
  for (std::size_t i = 0; i < M; ++i)
    pattern.bits[i] = ((bytes[pos + i / 8] >> (i % 8)) & 1u) ? 1 : -1;
  return pattern;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const auto size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw std::runtime_error("read failed: " + path);
  return bytes;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trial_csv(std::span<const lab::TrialStatistics> rows,
                      std::span<const std::string> comments) {
  std::string out;
  for (const auto& c : comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  out += lab::kTrialCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.trial_id);
    out += ',';
    out += std::to_string(r.d);
    out += ',';
    out += std::to_string(r.M);
    out += ',';
    out += format_double(r.tau);
    out += ',';
    out += format_double(r.eta);
    out += ',';
    out += std::to_string(r.size_V);
    out += ',';
    out += std::to_string(r.size_W);
    out += ',';
    out += std::to_string(r.size_S);
    out += ',';
    out += std::to_string(r.size_Stilde);
    out += ',';
    out += std::to_string(r.size_Shat);
    out += ',';
    out += format_double(r.sigma_min_sq);
    out += ',';
    out += format_double(r.op_norm_deviation);
    out += ',';
    out += format_double(r.theorem_bound);
    out += ',';
    out += format_double(r.certified_radius);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cellcert::io
