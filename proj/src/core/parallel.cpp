#include "parallel.hpp"

#include <algorithm>

namespace irlscut {

std::vector<IndexRange> split_ranges(std::span<const IndexRange> ranges, std::size_t max_len) {
  std::vector<IndexRange> out;
  if (max_len == 0) max_len = 1;
  for (const auto& r : ranges) {
    if (r.size() == 0) continue;
    for (std::size_t b = r.begin; b < r.end; b += max_len) {
      out.push_back({b, std::min(r.end, b + max_len)});
    }
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace irlscut
