#pragma once

#include <span>
#include <vector>

namespace cellcert {

/// Point on S^{d-1}. The constructor normalizes, so the stored norm is 1 to
/// within 1e-12; zero or non-finite input is rejected.
class UnitVector {
 public:
  explicit UnitVector(std::vector<double> coords);

  static UnitVector axis(int dim, int k);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

double dot(const UnitVector& a, const UnitVector& b);
double distance(const UnitVector& a, const UnitVector& b);

}  // namespace cellcert
