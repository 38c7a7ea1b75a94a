#include "cellcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellcert {

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (rows < 0 || cols < 0 ||
      a_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw std::invalid_argument("Matrix: entry count does not match shape");
}

bool Matrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize_in_place(std::span<double> a) {
  const double n = norm2(a);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  for (auto& v : a) v /= n;
}

namespace {

// One-sided Jacobi (Hestenes): orthogonalize columns by plane rotations until
// all pairs are numerically orthogonal; column norms are the singular values.
std::vector<double> one_sided_jacobi(Matrix a) {
  const int m = a.rows();
  const int n = a.cols();
  // Column-major working copy for contiguous column access.
  std::vector<double> col(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      col[static_cast<std::size_t>(j) * m + i] = a.at(i, j);

  const double tol = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double* cp = col.data() + static_cast<std::size_t>(p) * m;
        double* cq = col.data() + static_cast<std::size_t>(q) * m;
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < m; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (std::abs(apq) <= tol * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double vp = cp[i];
          const double vq = cq[i];
          cp[i] = c * vp - s * vq;
          cq[i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double* cj = col.data() + static_cast<std::size_t>(j) * m;
    double sq = 0.0;
    for (int i = 0; i < m; ++i) sq += cj[i] * cj[i];
    sv[static_cast<std::size_t>(j)] = std::sqrt(sq);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

}  // namespace

std::vector<double> singular_values(const Matrix& g) {
  if (g.rows() < 1 || g.cols() < 1)
    throw std::invalid_argument("singular_values: empty matrix");
  if (!g.all_finite())
    throw std::invalid_argument("singular_values: non-finite entries");
  return g.rows() >= g.cols() ? one_sided_jacobi(g)
                              : one_sided_jacobi(transpose(g));
}

double min_singular_value(const Matrix& g) {
  const auto sv = singular_values(g);
  return sv.back();
}

std::vector<double> symmetric_eigenvalues(const Matrix& sym) {
  const int n = sym.rows();
  if (n < 1 || sym.cols() != n)
    throw std::invalid_argument("symmetric_eigenvalues: matrix must be square");
  if (!sym.all_finite())
    throw std::invalid_argument("symmetric_eigenvalues: non-finite entries");
  Matrix a = sym;

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
    if (std::sqrt(off) < 1e-300) break;
    double scale = 0.0;
    for (int p = 0; p < n; ++p) scale = std::max(scale, std::abs(a.at(p, p)));
    if (std::sqrt(off) < 1e-16 * std::max(scale, 1e-300)) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // A <- J^T A J on rows/cols p, q.
        for (int i = 0; i < n; ++i) {
          const double aip = a.at(i, p);
          const double aiq = a.at(i, q);
          a.at(i, p) = c * aip - s * aiq;
          a.at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a.at(p, i);
          const double aqi = a.at(q, i);
          a.at(p, i) = c * api - s * aqi;
          a.at(q, i) = s * api + c * aqi;
        }
      }
    }
  }

  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double operator_norm(const Matrix& sym) {
  const int n = sym.rows();
  if (n < 1 || sym.cols() != n)
    throw std::invalid_argument("operator_norm: matrix must be square");
  if (!sym.all_finite())
    throw std::invalid_argument("operator_norm: non-finite entries");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(sym.at(i, j) - sym.at(j, i)) > 1e-10)
        throw std::invalid_argument("operator_norm: matrix not symmetric");
  const auto eig = symmetric_eigenvalues(sym);
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

}  // namespace cellcert
