#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace irlscut {

// LDL^T factorization of a dense symmetric matrix without pivoting. Intended
// for small SPD blocks; fails with ZeroPivot if a pivot vanishes.
class DenseLdlt {
 public:
  DenseLdlt() = default;
  DenseLdlt(std::span<const double> row_major, std::size_t n) { factor(row_major, n); }

  void factor(std::span<const double> row_major, std::size_t n);
  void solve(std::span<const double> rhs, std::span<double> out) const;
  std::size_t dimension() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> l_;  // unit lower triangle, row major
  std::vector<double> d_;
};

// Gaussian elimination with partial pivoting; used as an independent oracle.
std::vector<double> dense_solve(std::vector<double> row_major, std::vector<double> rhs);

}  // namespace irlscut
