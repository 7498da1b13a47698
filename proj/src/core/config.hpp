#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "irls.hpp"

namespace irlscut {

enum class RoundingChoice { Sweep, TwoLevel, Both };
std::string_view rounding_choice_name(RoundingChoice r);

struct SolverConfig {
  IrlsConfig irls;
  std::size_t blocks = 4;             // preconditioner blocks p, independent of workers
  double balance_tolerance = 0.05;
  std::uint64_t seed = 1;
  RoundingChoice rounding = RoundingChoice::Both;
  std::size_t max_coarse_nodes = 0;   // 0: no cap
  bool oracle = false;                // also run the exact solver and report delta

  // Sets one option by its key (see describe()); fails with InvalidParams.
  void set(std::string_view key, std::string_view value);
  // Flat key=value lines; '#' starts a comment.
  void load(std::istream& in);
  void load_file(const std::string& path);
  // One "key = value  # help" line per option, with current values.
  std::string describe() const;
  void validate() const;
};

}  // namespace irlscut
