#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "parallel.hpp"

namespace irlscut {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
};

// Row-compressed sparsity pattern with sorted column indices and an explicit
// diagonal entry in every row.
struct SparsityPattern {
  std::size_t dimension = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::uint32_t> cols;
  std::vector<std::size_t> diag;  // position of (i,i) in cols

  std::size_t nnz() const { return cols.size(); }
  // Position of (i,j) in cols, or npos.
  std::size_t find(std::uint32_t i, std::uint32_t j) const;
  bool operator==(const SparsityPattern& other) const {
    return dimension == other.dimension && row_offsets == other.row_offsets && cols == other.cols;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Symmetric sparse matrix in full (both triangles) CSR storage. The pattern is
// shared and fixed; only values change.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(std::shared_ptr<const SparsityPattern> pattern);

  // Duplicates are summed. Fails with DimensionMismatch if an index is out of
  // range and InvalidParams if the result is not symmetric.
  static SparseSymmetricMatrix from_triplets(std::size_t dimension, std::span<const Triplet> entries);

  std::size_t dimension() const { return pattern_ ? pattern_->dimension : 0; }
  std::size_t nnz() const { return values_.size(); }
  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }
  bool same_pattern(const SparseSymmetricMatrix& other) const {
    return pattern_ == other.pattern_ || (pattern_ && other.pattern_ && *pattern_ == *other.pattern_);
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double at(std::uint32_t i, std::uint32_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  // Row-chunked product; y rows in each chunk are written by one task.
  void multiply(std::span<const double> x, std::span<double> y, const WorkerPool& pool,
                std::span<const IndexRange> row_chunks) const;

  double max_asymmetry() const;

  // Symmetric reordering: row new_of[i] of the result is row i of this matrix.
  SparseSymmetricMatrix permuted(std::span<const std::uint32_t> new_of) const;

  // Dense row-major copy (tests and small oracles).
  std::vector<double> to_dense() const;

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

std::shared_ptr<SparsityPattern> build_pattern(std::size_t dimension,
                                               std::vector<std::pair<std::uint32_t, std::uint32_t>> entries);

// Matrix Market coordinate I/O ("real symmetric", lower triangle on write).
void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix& a);
SparseSymmetricMatrix read_matrix_market(std::istream& in);
// Dense vector in Matrix Market array format.
void write_matrix_market_vector(std::ostream& out, std::span<const double> v);
std::vector<double> read_matrix_market_vector(std::istream& in);

}  // namespace irlscut
