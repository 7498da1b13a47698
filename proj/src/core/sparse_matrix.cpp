#include "sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"

namespace irlscut {

std::size_t SparsityPattern::find(std::uint32_t i, std::uint32_t j) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return npos;
  return static_cast<std::size_t>(it - cols.begin());
}

std::shared_ptr<SparsityPattern> build_pattern(std::size_t dimension,
                                               std::vector<std::pair<std::uint32_t, std::uint32_t>> entries) {
  for (std::uint32_t i = 0; i < dimension; ++i) entries.emplace_back(i, i);
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  auto p = std::make_shared<SparsityPattern>();
  p->dimension = dimension;
  p->row_offsets.assign(dimension + 1, 0);
  p->cols.reserve(entries.size());
  for (const auto& [r, c] : entries) {
    if (r >= dimension || c >= dimension) fail(ErrorCode::DimensionMismatch, "pattern entry out of range");
    ++p->row_offsets[r + 1];
    p->cols.push_back(c);
  }
  for (std::size_t i = 0; i < dimension; ++i) p->row_offsets[i + 1] += p->row_offsets[i];
  p->diag.resize(dimension);
  for (std::uint32_t i = 0; i < dimension; ++i) p->diag[i] = p->find(i, i);
  return p;
}

SparseSymmetricMatrix::SparseSymmetricMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

SparseSymmetricMatrix SparseSymmetricMatrix::from_triplets(std::size_t dimension,
                                                           std::span<const Triplet> entries) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  coords.reserve(2 * entries.size());
  for (const auto& t : entries) {
    if (t.row >= dimension || t.col >= dimension) fail(ErrorCode::DimensionMismatch, "triplet out of range");
    coords.emplace_back(t.row, t.col);
    coords.emplace_back(t.col, t.row);
  }
  SparseSymmetricMatrix a(build_pattern(dimension, std::move(coords)));
  for (const auto& t : entries) a.values_[a.pattern_->find(t.row, t.col)] += t.value;
  if (a.max_asymmetry() > 0.0) fail(ErrorCode::InvalidParams, "triplets do not describe a symmetric matrix");
  return a;
}

double SparseSymmetricMatrix::at(std::uint32_t i, std::uint32_t j) const {
  const auto pos = pattern_->find(i, j);
  return pos == SparsityPattern::npos ? 0.0 : values_[pos];
}

void SparseSymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const IndexRange all{0, dimension()};
  multiply(x, y, WorkerPool(1), std::span(&all, 1));
}

void SparseSymmetricMatrix::multiply(std::span<const double> x, std::span<double> y, const WorkerPool& pool,
                                     std::span<const IndexRange> row_chunks) const {
  if (x.size() != dimension() || y.size() != dimension()) fail(ErrorCode::DimensionMismatch, "matrix-vector product");
  const auto& p = *pattern_;
  pool.run(row_chunks.size(), [&](std::size_t c) {
    for (std::size_t i = row_chunks[c].begin; i < row_chunks[c].end; ++i) {
      double sum = 0.0;
      for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) sum += values_[k] * x[p.cols[k]];
      y[i] = sum;
    }
  });
}

double SparseSymmetricMatrix::max_asymmetry() const {
  const auto& p = *pattern_;
  double worst = 0.0;
  for (std::uint32_t i = 0; i < p.dimension; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) {
      const auto j = p.cols[k];
      const auto mirror = p.find(j, i);
      const double other = mirror == SparsityPattern::npos ? 0.0 : values_[mirror];
      worst = std::max(worst, std::abs(values_[k] - other));
    }
  }
  return worst;
}

SparseSymmetricMatrix SparseSymmetricMatrix::permuted(std::span<const std::uint32_t> new_of) const {
  const auto n = dimension();
  if (new_of.size() != n) fail(ErrorCode::DimensionMismatch, "permutation length differs from matrix dimension");
  std::vector<std::uint8_t> hit(n, 0);
  for (auto v : new_of) {
    if (v >= n || hit[v]) fail(ErrorCode::InvalidParams, "not a permutation");
    hit[v] = 1;
  }
  const auto& p = *pattern_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  coords.reserve(nnz());
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) coords.emplace_back(new_of[i], new_of[p.cols[k]]);
  }
  SparseSymmetricMatrix out(build_pattern(n, std::move(coords)));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) {
      out.values_[out.pattern_->find(new_of[i], new_of[p.cols[k]])] = values_[k];
    }
  }
  return out;
}

std::vector<double> SparseSymmetricMatrix::to_dense() const {
  const auto n = dimension();
  std::vector<double> d(n * n, 0.0);
  const auto& p = *pattern_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) d[i * n + p.cols[k]] = values_[k];
  }
  return d;
}

void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix& a) {
  const auto& p = a.pattern();
  std::size_t lower = 0;
  for (std::uint32_t i = 0; i < p.dimension; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) lower += p.cols[k] <= i;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << p.dimension << ' ' << p.dimension << ' ' << lower << '\n';
  out << std::setprecision(17);
  const auto vals = a.values();
  for (std::uint32_t i = 0; i < p.dimension; ++i) {
    for (std::size_t k = p.row_offsets[i]; k < p.row_offsets[i + 1]; ++k) {
      if (p.cols[k] <= i) out << i + 1 << ' ' << p.cols[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
}

namespace {

std::string read_banner(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner) || banner.rfind("%%MatrixMarket", 0) != 0) {
    fail(ErrorCode::ParseError, "missing %%MatrixMarket banner");
  }
  std::transform(banner.begin(), banner.end(), banner.begin(), [](unsigned char c) { return std::tolower(c); });
  return banner;
}

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') return line;
  }
  fail(ErrorCode::ParseError, "unexpected end of Matrix Market data");
}

}  // namespace

SparseSymmetricMatrix read_matrix_market(std::istream& in) {
  const auto banner = read_banner(in);
  if (banner.find("coordinate") == std::string::npos || banner.find("real") == std::string::npos) {
    fail(ErrorCode::ParseError, "only 'coordinate real' matrices are supported");
  }
  const bool symmetric = banner.find("symmetric") != std::string::npos;
  std::size_t rows = 0, cols = 0, entries = 0;
  {
    std::istringstream ls(next_data_line(in));
    if (!(ls >> rows >> cols >> entries) || rows != cols) fail(ErrorCode::ParseError, "bad size line");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(entries);
  for (std::size_t k = 0; k < entries; ++k) {
    std::istringstream ls(next_data_line(in));
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) fail(ErrorCode::ParseError, "bad entry");
    triplets.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1), v});
    if (symmetric && i != j) triplets.push_back({static_cast<std::uint32_t>(j - 1), static_cast<std::uint32_t>(i - 1), v});
  }
  return SparseSymmetricMatrix::from_triplets(rows, triplets);
}

void write_matrix_market_vector(std::ostream& out, std::span<const double> v) {
  out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n" << std::setprecision(17);
  for (double x : v) out << x << '\n';
}

std::vector<double> read_matrix_market_vector(std::istream& in) {
  const auto banner = read_banner(in);
  if (banner.find("array") == std::string::npos) fail(ErrorCode::ParseError, "expected array format");
  std::size_t rows = 0, cols = 0;
  {
    std::istringstream ls(next_data_line(in));
    if (!(ls >> rows >> cols) || cols != 1) fail(ErrorCode::ParseError, "bad vector size line");
  }
  std::vector<double> v(rows);
  for (auto& x : v) {
    std::istringstream ls(next_data_line(in));
    if (!(ls >> x)) fail(ErrorCode::ParseError, "bad vector entry");
  }
  return v;
}

}  // namespace irlscut
