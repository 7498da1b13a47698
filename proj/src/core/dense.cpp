#include "dense.hpp"

#include <cmath>
#include <utility>

#include "error.hpp"

namespace irlscut {

void DenseLdlt::factor(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) fail(ErrorCode::DimensionMismatch, "dense LDLT input is not n x n");
  n_ = n;
  l_.assign(n * n, 0.0);
  d_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double dj = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) dj -= l_[j * n + k] * l_[j * n + k] * d_[k];
    if (!(std::abs(dj) > 0.0) || !std::isfinite(dj)) {
      fail(ErrorCode::ZeroPivot, "dense LDLT pivot " + std::to_string(j) + " vanished");
    }
    d_[j] = dj;
    l_[j * n + j] = 1.0;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= l_[i * n + k] * l_[j * n + k] * d_[k];
      l_[i * n + j] = v / dj;
    }
  }
}

void DenseLdlt::solve(std::span<const double> rhs, std::span<double> out) const {
  if (rhs.size() != n_ || out.size() != n_) fail(ErrorCode::DimensionMismatch, "dense LDLT solve");
  std::vector<double> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l_[i * n_ + k] * y[k];
  }
  for (std::size_t i = 0; i < n_; ++i) y[i] /= d_[i];
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t k = i + 1; k < n_; ++k) y[i] -= l_[k * n_ + i] * y[k];
  }
  std::copy(y.begin(), y.end(), out.begin());
}

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) fail(ErrorCode::DimensionMismatch, "dense_solve input is not n x n");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (a[piv * n + col] == 0.0) fail(ErrorCode::ZeroPivot, "singular matrix in dense_solve");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= a[i * n + k] * x[k];
    x[i] = v / a[i * n + i];
  }
  return x;
}

}  // namespace irlscut
