#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "graph.hpp"

namespace irlscut {

enum class InstanceKind { Grid2d, Grid3d26, RandomGeometric, Path };
InstanceKind parse_instance_kind(std::string_view name);
std::string_view instance_kind_name(InstanceKind kind);

// How s and t attach to the generated nodes.
//   sides:   s to the first column (face), t to the last one
//   corners: s to the first node, t to the last node
//   blob:    every node gets one terminal edge; nodes inside a centred
//            disc/ball go to s, the rest to t, each flipped with probability `noise`
enum class TerminalMode { Sides, Corners, Blob };
TerminalMode parse_terminal_mode(std::string_view name);
std::string_view terminal_mode_name(TerminalMode mode);

struct InstanceParams {
  std::size_t rows = 4;
  std::size_t cols = 4;
  std::size_t depth = 4;
  std::size_t nodes = 200;          // random_geometric and path
  double base_weight = 1.0;         // edge weight = base + U(0,1)
  double terminal_scale = 1.0;      // terminal edge weight = scale * (base + U(0,1))
  TerminalMode terminals = TerminalMode::Blob;
  double noise = 0.1;
  double radius = 0.0;              // random_geometric; 0 picks sqrt(2 ln n / (pi n))
  double side_fraction = 0.1;       // random_geometric sides: x < f goes to s, x > 1-f to t
  std::size_t max_retries = 20;

  // key=value setter shared by the CLI and config files.
  void set(std::string_view key, std::string_view value);
};

// Default parameters for a kind (random_geometric uses base 0 and sides with scale 10).
InstanceParams default_params(InstanceKind kind);

// Deterministic for a given (kind, params, seed). Node ids: s = 0, t = 1,
// generated nodes from 2. Path instances of n nodes have weights n-1, ..., 1
// along s -> t.
WeightedGraph generate_instance(InstanceKind kind, const InstanceParams& params, std::uint64_t seed);

}  // namespace irlscut
