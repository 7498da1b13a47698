#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

namespace irlscut {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Fans independent tasks out to a fixed number of OpenMP threads. Task
// boundaries are chosen by the caller, never by the worker count, so any
// per-task arithmetic is identical for every worker count.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1) : workers_(workers < 1 ? 1 : workers) {}

  int workers() const { return workers_; }

  template <class Fn>
  void run(std::size_t task_count, Fn&& fn) const {
    if (workers_ == 1 || task_count < 2) {
      for (std::size_t i = 0; i < task_count; ++i) fn(i);
      return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    const long long count = static_cast<long long>(task_count);
#pragma omp parallel for schedule(static) num_threads(workers_)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  }

 private:
  int workers_;
};

// Splits each range into pieces of at most max_len, preserving order.
std::vector<IndexRange> split_ranges(std::span<const IndexRange> ranges, std::size_t max_len);

// Pairwise summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace irlscut
