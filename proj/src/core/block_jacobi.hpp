#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "dense.hpp"
#include "parallel.hpp"
#include "sparse_matrix.hpp"

namespace irlscut {

enum class BlockStrategy { ExactLu, Ilu0 };

std::string_view block_strategy_name(BlockStrategy s);
BlockStrategy parse_block_strategy(std::string_view name);

// How a block is actually factorized. Exact blocks up to kDenseBlockLimit rows
// use a dense LDL^T, larger ones a sparse LDL^T with fill-reducing ordering.
enum class BlockMethod { DenseLdlt, SparseLdlt, Ilu0 };

inline constexpr std::size_t kDenseBlockLimit = 64;

// Block-diagonal preconditioner M = diag(M_1..M_p) extracted from a symmetric
// matrix over contiguous row ranges. Symbolic work happens once at
// construction; refresh() redoes only the numeric factorization.
class BlockJacobiPreconditioner {
 public:
  BlockJacobiPreconditioner(const SparseSymmetricMatrix& a, std::span<const IndexRange> block_ranges,
                            BlockStrategy strategy, const WorkerPool& pool = WorkerPool(1));
  ~BlockJacobiPreconditioner();
  BlockJacobiPreconditioner(BlockJacobiPreconditioner&&) noexcept;
  BlockJacobiPreconditioner& operator=(BlockJacobiPreconditioner&&) noexcept;

  // Numeric refactorization from a matrix with the construction-time pattern.
  // Fails with PatternChanged otherwise.
  void refresh(const SparseSymmetricMatrix& a, const WorkerPool& pool = WorkerPool(1));

  // z = M^{-1} r, one task per block.
  void apply(std::span<const double> r, std::span<double> z, const WorkerPool& pool = WorkerPool(1)) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::span<const IndexRange> block_ranges() const { return ranges_; }
  BlockStrategy strategy() const { return strategy_; }
  BlockMethod block_method(std::size_t b) const;
  // Number of ILU(0) blocks that fell back to an exact factorization.
  std::size_t ilu_fallbacks() const;

 private:
  struct Block;
  void factor_block(Block& block, std::span<const double> values) const;

  std::size_t dimension_ = 0;
  BlockStrategy strategy_ = BlockStrategy::ExactLu;
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<IndexRange> ranges_;
  std::vector<std::unique_ptr<Block>> blocks_;
};

}  // namespace irlscut
