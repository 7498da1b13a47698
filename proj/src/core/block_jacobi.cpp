#include "block_jacobi.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace irlscut {

std::string_view block_strategy_name(BlockStrategy s) {
  return s == BlockStrategy::ExactLu ? "exact_lu" : "ilu0";
}

BlockStrategy parse_block_strategy(std::string_view name) {
  if (name == "exact_lu" || name == "lu") return BlockStrategy::ExactLu;
  if (name == "ilu0") return BlockStrategy::Ilu0;
  fail(ErrorCode::InvalidParams, "unknown block strategy '" + std::string(name) + "'");
}

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using EigenLdlt = Eigen::SimplicialLDLT<EigenSparse, Eigen::Lower, Eigen::AMDOrdering<int>>;

// Pivot threshold relative to the largest magnitude in the pivot's row.
constexpr double kIluPivotFloor = 1e-14;

}  // namespace

struct BlockJacobiPreconditioner::Block {
  IndexRange range;
  BlockMethod method = BlockMethod::DenseLdlt;
  bool fell_back = false;

  // Local pattern of the diagonal block; gather[k] is the position of local
  // entry k in the global value array.
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> cols;
  std::vector<std::size_t> diag;
  std::vector<std::size_t> gather;

  DenseLdlt dense;

  EigenSparse eigen;
  std::vector<std::size_t> eigen_source;  // eigen value slot -> local entry
  std::unique_ptr<EigenLdlt> ldlt;

  struct Pivot {
    std::size_t lower_pos;  // position of l_ik
    std::uint32_t k;
    std::size_t update_begin;
    std::size_t update_end;
  };
  std::vector<Pivot> pivots;
  std::vector<std::pair<std::size_t, std::size_t>> updates;  // (a_ij, a_kj)
  std::vector<double> lu;

  std::size_t size() const { return range.size(); }
  std::size_t find(std::uint32_t i, std::uint32_t j) const {
    const auto first = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
    const auto last = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    return (it == last || *it != j) ? SparsityPattern::npos : static_cast<std::size_t>(it - cols.begin());
  }

  void build_ilu_symbolic() {
    pivots.clear();
    updates.clear();
    for (std::uint32_t i = 0; i < size(); ++i) {
      for (auto pik = offsets[i]; pik < offsets[i + 1] && cols[pik] < i; ++pik) {
        const auto k = cols[pik];
        Pivot pv{pik, k, updates.size(), 0};
        for (auto pij = pik + 1; pij < offsets[i + 1]; ++pij) {
          const auto pkj = find(k, cols[pij]);
          if (pkj != SparsityPattern::npos) updates.emplace_back(pij, pkj);
        }
        pv.update_end = updates.size();
        pivots.push_back(pv);
      }
    }
  }

  void build_sparse_symbolic() {
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(cols.size());
    for (std::uint32_t i = 0; i < size(); ++i) {
      for (auto k = offsets[i]; k < offsets[i + 1]; ++k) {
        trip.emplace_back(static_cast<int>(i), static_cast<int>(cols[k]), static_cast<double>(k));
      }
    }
    eigen.resize(static_cast<int>(size()), static_cast<int>(size()));
    eigen.setFromTriplets(trip.begin(), trip.end());
    eigen.makeCompressed();
    eigen_source.resize(static_cast<std::size_t>(eigen.nonZeros()));
    for (std::size_t j = 0; j < eigen_source.size(); ++j) {
      eigen_source[j] = static_cast<std::size_t>(eigen.valuePtr()[j]);
    }
    ldlt = std::make_unique<EigenLdlt>();
    ldlt->analyzePattern(eigen);
  }

  // Returns false on a vanishing pivot.
  bool factor_ilu(std::span<const double> values) {
    lu.resize(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) lu[k] = values[gather[k]];
    std::vector<double> row_scale(size(), 0.0);
    for (std::uint32_t i = 0; i < size(); ++i) {
      for (auto k = offsets[i]; k < offsets[i + 1]; ++k) row_scale[i] = std::max(row_scale[i], std::abs(lu[k]));
    }
    auto pivot_ok = [&](std::uint32_t k) {
      const double d = lu[diag[k]];
      return std::abs(d) >= kIluPivotFloor * row_scale[k] && d != 0.0;
    };
    for (const auto& pv : pivots) {
      if (!pivot_ok(pv.k)) return false;
      const double l = lu[pv.lower_pos] / lu[diag[pv.k]];
      lu[pv.lower_pos] = l;
      for (auto u = pv.update_begin; u < pv.update_end; ++u) lu[updates[u].first] -= l * lu[updates[u].second];
    }
    for (std::uint32_t i = 0; i < size(); ++i) {
      if (!pivot_ok(i)) return false;
    }
    return true;
  }

  void solve_ilu(std::span<const double> r, std::span<double> z) const {
    const auto n = size();
    for (std::uint32_t i = 0; i < n; ++i) {
      double v = r[i];
      for (auto k = offsets[i]; k < diag[i]; ++k) v -= lu[k] * z[cols[k]];
      z[i] = v;
    }
    for (std::uint32_t i = static_cast<std::uint32_t>(n); i-- > 0;) {
      double v = z[i];
      for (auto k = diag[i] + 1; k < offsets[i + 1]; ++k) v -= lu[k] * z[cols[k]];
      z[i] = v / lu[diag[i]];
    }
  }
};

BlockJacobiPreconditioner::BlockJacobiPreconditioner(const SparseSymmetricMatrix& a,
                                                     std::span<const IndexRange> block_ranges,
                                                     BlockStrategy strategy, const WorkerPool& pool)
    : dimension_(a.dimension()), strategy_(strategy), pattern_(a.shared_pattern()),
      ranges_(block_ranges.begin(), block_ranges.end()) {
  std::size_t expect = 0;
  for (const auto& r : ranges_) {
    if (r.begin != expect || r.end < r.begin) fail(ErrorCode::DimensionMismatch, "block ranges do not tile the matrix");
    expect = r.end;
  }
  if (expect != dimension_) fail(ErrorCode::DimensionMismatch, "block ranges do not cover the matrix");

  const auto& p = a.pattern();
  blocks_.resize(ranges_.size());
  for (std::size_t b = 0; b < ranges_.size(); ++b) {
    auto block = std::make_unique<Block>();
    block->range = ranges_[b];
    const auto lo = static_cast<std::uint32_t>(block->range.begin);
    const auto hi = static_cast<std::uint32_t>(block->range.end);
    block->offsets.push_back(0);
    for (auto i = lo; i < hi; ++i) {
      for (auto k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) {
        const auto j = p.cols[k];
        if (j < lo || j >= hi) continue;
        if (j == i) block->diag.push_back(block->cols.size());
        block->cols.push_back(j - lo);
        block->gather.push_back(k);
      }
      block->offsets.push_back(block->cols.size());
    }
    if (strategy == BlockStrategy::Ilu0) {
      block->method = BlockMethod::Ilu0;
      block->build_ilu_symbolic();
    } else if (block->size() <= kDenseBlockLimit) {
      block->method = BlockMethod::DenseLdlt;
    } else {
      block->method = BlockMethod::SparseLdlt;
      block->build_sparse_symbolic();
    }
    blocks_[b] = std::move(block);
  }
  refresh(a, pool);
}

BlockJacobiPreconditioner::~BlockJacobiPreconditioner() = default;
BlockJacobiPreconditioner::BlockJacobiPreconditioner(BlockJacobiPreconditioner&&) noexcept = default;
BlockJacobiPreconditioner& BlockJacobiPreconditioner::operator=(BlockJacobiPreconditioner&&) noexcept = default;

void BlockJacobiPreconditioner::factor_block(Block& block, std::span<const double> values) const {
  if (block.method == BlockMethod::Ilu0) {
    if (block.factor_ilu(values)) return;
    // Vanishing ILU(0) pivot: this block switches to an exact factorization.
    block.fell_back = true;
    block.method = block.size() <= kDenseBlockLimit ? BlockMethod::DenseLdlt : BlockMethod::SparseLdlt;
    if (block.method == BlockMethod::SparseLdlt) block.build_sparse_symbolic();
  }
  if (block.method == BlockMethod::DenseLdlt) {
    const auto n = block.size();
    std::vector<double> dense(n * n, 0.0);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (auto k = block.offsets[i]; k < block.offsets[i + 1]; ++k) dense[i * n + block.cols[k]] = values[block.gather[k]];
    }
    block.dense.factor(dense, n);
    return;
  }
  double* slots = block.eigen.valuePtr();
  for (std::size_t j = 0; j < block.eigen_source.size(); ++j) slots[j] = values[block.gather[block.eigen_source[j]]];
  block.ldlt->factorize(block.eigen);
  if (block.ldlt->info() != Eigen::Success) {
    fail(ErrorCode::ZeroPivot, "sparse LDLT failed on block starting at row " + std::to_string(block.range.begin));
  }
}

void BlockJacobiPreconditioner::refresh(const SparseSymmetricMatrix& a, const WorkerPool& pool) {
  if (a.dimension() != dimension_ || !(a.shared_pattern() == pattern_ || a.pattern() == *pattern_)) {
    fail(ErrorCode::PatternChanged, "matrix pattern differs from the factorized one");
  }
  const auto values = a.values();
  pool.run(blocks_.size(), [&](std::size_t b) { factor_block(*blocks_[b], values); });
}

void BlockJacobiPreconditioner::apply(std::span<const double> r, std::span<double> z, const WorkerPool& pool) const {
  if (r.size() != dimension_ || z.size() != dimension_) {
    fail(ErrorCode::PreconditionerDimensionMismatch, "preconditioner dimension " + std::to_string(dimension_) +
                                                         ", vector length " + std::to_string(r.size()));
  }
  pool.run(blocks_.size(), [&](std::size_t b) {
    const Block& block = *blocks_[b];
    const auto rb = r.subspan(block.range.begin, block.size());
    const auto zb = z.subspan(block.range.begin, block.size());
    switch (block.method) {
      case BlockMethod::DenseLdlt:
        block.dense.solve(rb, zb);
        break;
      case BlockMethod::Ilu0:
        block.solve_ilu(rb, zb);
        break;
      case BlockMethod::SparseLdlt: {
        Eigen::Map<const Eigen::VectorXd> rin(rb.data(), static_cast<Eigen::Index>(rb.size()));
        Eigen::Map<Eigen::VectorXd> zout(zb.data(), static_cast<Eigen::Index>(zb.size()));
        zout = block.ldlt->solve(rin);
        break;
      }
    }
  });
}

BlockMethod BlockJacobiPreconditioner::block_method(std::size_t b) const { return blocks_.at(b)->method; }

std::size_t BlockJacobiPreconditioner::ilu_fallbacks() const {
  return static_cast<std::size_t>(std::count_if(blocks_.begin(), blocks_.end(), [](const auto& b) { return b->fell_back; }));
}

}  // namespace irlscut
