#include "cellcert/frame.hpp"

#include <stdexcept>

#include "cellcert/errors.hpp"

namespace cellcert {

GaussianFrame GaussianFrame::random(int d, int M, RngStream stream) {
  if (d < 3) throw std::invalid_argument("GaussianFrame: d must be >= 3");
  if (M <= 2 * d)
    throw std::invalid_argument("GaussianFrame: M must exceed 2d");
  auto entries = gaussian(stream, static_cast<std::size_t>(M) * d, 1.0 / d);
  return GaussianFrame(Matrix(M, d, std::move(entries)), stream);
}

GaussianFrame GaussianFrame::from_rows(Matrix rows, RngStream label) {
  if (rows.cols() < 2 || rows.rows() < 1)
    throw std::invalid_argument("GaussianFrame: need d >= 2 and M >= 1");
  if (!rows.all_finite())
    throw std::invalid_argument("GaussianFrame: non-finite row entries");
  return GaussianFrame(std::move(rows), label);
}

GaussianFrame make_frame(int d, int M, RngStream stream) {
  return GaussianFrame::random(d, M, stream);
}

SignPattern sign_encode(const GaussianFrame& frame, const UnitVector& x,
                        ZeroSignPolicy policy) {
  if (x.dim() != frame.d())
    throw std::invalid_argument("sign_encode: dimension mismatch");
  SignPattern pattern;
  pattern.bits.resize(static_cast<std::size_t>(frame.M()));
  for (int i = 0; i < frame.M(); ++i) {
    const double ip = frame.row_dot(i, x.coords());
    if (ip == 0.0) {
      if (policy == ZeroSignPolicy::strict)
        throw DegenerateInput("sign_encode: inner product exactly zero");
      ++pattern.zero_count;
      pattern.bits[static_cast<std::size_t>(i)] = 1;
    } else {
      pattern.bits[static_cast<std::size_t>(i)] = ip > 0 ? 1 : -1;
    }
  }
  return pattern;
}

}  // namespace cellcert
