#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>

#include "error.hpp"

namespace irlscut {
namespace {

// Node- and edge-weighted graph used inside the multilevel scheme.
struct LevelGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;
  std::vector<long> node_weight;

  std::size_t size() const { return node_weight.size(); }
  long total_weight() const { return std::accumulate(node_weight.begin(), node_weight.end(), 0L); }
};

LevelGraph induced_subgraph(const NonterminalGraph& g, std::span<const std::uint32_t> nodes,
                            std::vector<std::uint32_t>& local_of) {
  LevelGraph out;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) local_of[nodes[i]] = i;
  out.node_weight.assign(nodes.size(), 1);
  const auto& adj = g.adjacency;
  for (std::uint32_t u : nodes) {
    const auto nbrs = adj.neighbors(u);
    const auto eids = adj.incident_edges(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const auto v = nbrs[k];
      if (local_of[v] == kNoNode) continue;
      out.targets.push_back(local_of[v]);
      out.weights.push_back(g.edges[eids[k]].capacity);
    }
    out.offsets.push_back(out.targets.size());
  }
  for (std::uint32_t u : nodes) local_of[u] = kNoNode;
  return out;
}

struct Coarsening {
  LevelGraph coarse;
  std::vector<std::uint32_t> coarse_of;  // fine node -> coarse node
};

Coarsening coarsen(const LevelGraph& g, long max_node_weight, std::mt19937_64& rng) {
  const auto n = g.size();
  std::vector<std::uint32_t> visit(n);
  std::iota(visit.begin(), visit.end(), 0u);
  std::shuffle(visit.begin(), visit.end(), rng);
  std::vector<std::uint32_t> mate(n, kNoNode);
  for (auto u : visit) {
    if (mate[u] != kNoNode) continue;
    std::uint32_t best = u;
    double best_w = -1.0;
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      const auto v = g.targets[k];
      if (v == u || mate[v] != kNoNode) continue;
      if (g.node_weight[u] + g.node_weight[v] > max_node_weight) continue;
      if (g.weights[k] > best_w || (g.weights[k] == best_w && v < best)) {
        best = v;
        best_w = g.weights[k];
      }
    }
    mate[u] = best;
    mate[best] = u;
  }
  Coarsening c;
  c.coarse_of.assign(n, kNoNode);
  std::uint32_t next = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (c.coarse_of[u] != kNoNode) continue;
    c.coarse_of[u] = next;
    c.coarse_of[mate[u]] = next;
    ++next;
  }
  auto& cg = c.coarse;
  cg.node_weight.assign(next, 0);
  std::vector<std::vector<std::uint32_t>> members(next);
  for (std::uint32_t u = 0; u < n; ++u) {
    cg.node_weight[c.coarse_of[u]] += g.node_weight[u];
    members[c.coarse_of[u]].push_back(u);
  }
  std::vector<double> acc(next, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t cu = 0; cu < next; ++cu) {
    touched.clear();
    for (auto u : members[cu]) {
      for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
        const auto cv = c.coarse_of[g.targets[k]];
        if (cv == cu) continue;
        if (acc[cv] == 0.0) touched.push_back(cv);
        acc[cv] += g.weights[k];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto cv : touched) {
      cg.targets.push_back(cv);
      cg.weights.push_back(acc[cv]);
      acc[cv] = 0.0;
    }
    cg.offsets.push_back(cg.targets.size());
  }
  return c;
}

struct Window {
  long lo = 0;
  long hi = 0;
  double target = 0.0;
};

double node_gain(const LevelGraph& g, const std::vector<std::uint8_t>& side, std::uint32_t u) {
  double ext = 0.0, in = 0.0;
  for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
    (side[g.targets[k]] == side[u] ? in : ext) += g.weights[k];
  }
  return ext - in;
}

double cut_of(const LevelGraph& g, const std::vector<std::uint8_t>& side) {
  double cut = 0.0;
  for (std::uint32_t u = 0; u < g.size(); ++u) {
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      if (side[u] != side[g.targets[k]]) cut += g.weights[k];
    }
  }
  return cut / 2.0;
}

long side0_weight(const LevelGraph& g, const std::vector<std::uint8_t>& side) {
  long w = 0;
  for (std::uint32_t u = 0; u < g.size(); ++u) w += side[u] == 0 ? g.node_weight[u] : 0;
  return w;
}

// Moves nodes toward the window with the least cut damage.
void enforce_window(const LevelGraph& g, std::vector<std::uint8_t>& side, const Window& win) {
  long w0 = side0_weight(g, side);
  while (w0 > win.hi || w0 < win.lo) {
    const std::uint8_t from = w0 > win.hi ? 0 : 1;
    std::uint32_t best = kNoNode;
    double best_gain = 0.0;
    for (std::uint32_t u = 0; u < g.size(); ++u) {
      if (side[u] != from) continue;
      const long nw = from == 0 ? w0 - g.node_weight[u] : w0 + g.node_weight[u];
      const bool overshoots = from == 0 ? nw < win.lo : nw > win.hi;
      if (overshoots && g.node_weight[u] > 1) continue;
      const double gain = node_gain(g, side, u);
      if (best == kNoNode || gain > best_gain) {
        best = u;
        best_gain = gain;
      }
    }
    if (best == kNoNode) return;  // only reachable at coarse levels
    side[best] = 1 - from;
    w0 += from == 0 ? -g.node_weight[best] : g.node_weight[best];
  }
}

void refine(const LevelGraph& g, std::vector<std::uint8_t>& side, const Window& win, int passes) {
  long w0 = side0_weight(g, side);
  std::vector<std::pair<double, std::uint32_t>> candidates;
  for (int pass = 0; pass < passes; ++pass) {
    candidates.clear();
    for (std::uint32_t u = 0; u < g.size(); ++u) {
      const double gain = node_gain(g, side, u);
      if (gain >= 0.0) candidates.emplace_back(-gain, u);
    }
    std::sort(candidates.begin(), candidates.end());
    bool moved = false;
    for (const auto& [neg_gain, u] : candidates) {
      const double gain = node_gain(g, side, u);
      const long nw = side[u] == 0 ? w0 - g.node_weight[u] : w0 + g.node_weight[u];
      if (nw < win.lo || nw > win.hi) continue;
      const bool better_balance = std::abs(nw - win.target) < std::abs(w0 - win.target);
      if (gain > 1e-12 || (gain >= 0.0 && gain > -1e-12 && better_balance)) {
        side[u] = 1 - side[u];
        w0 = nw;
        moved = true;
      }
    }
    if (!moved) break;
  }
}

std::vector<std::uint8_t> grow_from(const LevelGraph& g, std::uint32_t seed, const Window& win) {
  const auto n = g.size();
  std::vector<std::uint8_t> side(n, 1);
  std::vector<double> conn(n, 0.0);  // weight into side 0
  std::vector<double> degree(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) degree[u] += g.weights[k];
  }
  using Entry = std::pair<double, std::int64_t>;  // (gain, -id)
  std::priority_queue<Entry> heap;
  long w0 = 0;
  std::uint32_t next_free = 0;
  auto add = [&](std::uint32_t u) {
    side[u] = 0;
    w0 += g.node_weight[u];
    for (auto k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
      const auto v = g.targets[k];
      if (side[v] == 0) continue;
      conn[v] += g.weights[k];
      heap.emplace(2.0 * conn[v] - degree[v], -static_cast<std::int64_t>(v));
    }
  };
  add(seed);
  while (w0 < win.lo) {
    std::uint32_t pick = kNoNode;
    while (!heap.empty()) {
      const auto [gain, neg_id] = heap.top();
      heap.pop();
      const auto v = static_cast<std::uint32_t>(-neg_id);
      if (side[v] == 0 || gain != 2.0 * conn[v] - degree[v]) continue;
      pick = v;
      break;
    }
    if (pick == kNoNode) {
      while (next_free < n && side[next_free] == 0) ++next_free;
      if (next_free == n) break;
      pick = next_free;
    }
    if (w0 + g.node_weight[pick] > win.hi && w0 >= win.lo) break;
    add(pick);
  }
  return side;
}

std::vector<std::uint8_t> initial_bisection(const LevelGraph& g, const Window& win, std::mt19937_64& rng) {
  const auto n = g.size();
  std::vector<std::uint32_t> seeds;
  if (n <= 16) {
    seeds.resize(n);
    std::iota(seeds.begin(), seeds.end(), 0u);
  } else {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (int i = 0; i < 12; ++i) seeds.push_back(pick(rng));
  }
  std::vector<std::uint8_t> best;
  double best_cut = 0.0;
  double best_dev = 0.0;
  for (auto seed : seeds) {
    auto side = grow_from(g, seed, win);
    enforce_window(g, side, win);
    refine(g, side, win, 8);
    const double cut = cut_of(g, side);
    const double dev = std::abs(side0_weight(g, side) - win.target);
    if (best.empty() || cut < best_cut - 1e-12 || (std::abs(cut - best_cut) <= 1e-12 && dev < best_dev)) {
      best = std::move(side);
      best_cut = cut;
      best_dev = dev;
    }
  }
  return best;
}

std::vector<std::uint8_t> multilevel_bisect(const LevelGraph& fine, const Window& win, std::mt19937_64& rng) {
  constexpr std::size_t kCoarsestSize = 64;
  std::vector<Coarsening> levels;
  const LevelGraph* current = &fine;
  const long max_node_weight = std::max(1L, win.hi - win.lo);
  while (current->size() > kCoarsestSize) {
    auto c = coarsen(*current, std::max(max_node_weight, 2L), rng);
    if (c.coarse.size() * 10 > current->size() * 9) break;
    levels.push_back(std::move(c));
    current = &levels.back().coarse;
  }
  auto side = initial_bisection(*current, win, rng);
  for (std::size_t l = levels.size(); l-- > 0;) {
    const LevelGraph& finer = l == 0 ? fine : levels[l - 1].coarse;
    std::vector<std::uint8_t> projected(finer.size());
    for (std::uint32_t u = 0; u < finer.size(); ++u) projected[u] = side[levels[l].coarse_of[u]];
    side = std::move(projected);
    enforce_window(finer, side, win);
    refine(finer, side, win, 8);
  }
  return side;
}

void recursive_bisection(const NonterminalGraph& g, std::vector<std::uint32_t> nodes, std::size_t k,
                         std::uint32_t first_block, double level_tol, std::vector<std::uint32_t>& assignment,
                         std::vector<std::uint32_t>& local_of, std::mt19937_64& rng) {
  if (k == 1) {
    for (auto u : nodes) assignment[u] = first_block;
    return;
  }
  const std::size_t k0 = k / 2, k1 = k - k0;
  const long n = static_cast<long>(nodes.size());
  const double target0 = static_cast<double>(n) * static_cast<double>(k0) / static_cast<double>(k);
  Window win;
  win.target = target0;
  win.hi = static_cast<long>(std::floor(target0 * (1.0 + level_tol)));
  win.lo = n - static_cast<long>(std::floor((static_cast<double>(n) - target0) * (1.0 + level_tol)));
  win.lo = std::max(win.lo, static_cast<long>(k0));
  win.hi = std::min(win.hi, n - static_cast<long>(k1));
  if (win.lo > win.hi) win.lo = win.hi = std::clamp(std::lround(target0), static_cast<long>(k0), n - static_cast<long>(k1));

  const LevelGraph sub = induced_subgraph(g, nodes, local_of);
  const auto side = multilevel_bisect(sub, win, rng);
  std::vector<std::uint32_t> part0, part1;
  for (std::size_t i = 0; i < nodes.size(); ++i) (side[i] == 0 ? part0 : part1).push_back(nodes[i]);
  nodes.clear();
  nodes.shrink_to_fit();
  recursive_bisection(g, std::move(part0), k0, first_block, level_tol, assignment, local_of, rng);
  recursive_bisection(g, std::move(part1), k1, first_block + static_cast<std::uint32_t>(k0), level_tol, assignment,
                      local_of, rng);
}

// k-way pass that moves nodes out of blocks above the cap and into empty blocks.
void rebalance(const NonterminalGraph& g, std::vector<std::uint32_t>& assignment, std::size_t blocks,
               std::size_t cap) {
  const auto& adj = g.adjacency;
  std::vector<std::size_t> size(blocks, 0);
  for (auto b : assignment) ++size[b];
  auto conn_to = [&](std::uint32_t u, std::uint32_t b) {
    double w = 0.0;
    const auto nbrs = adj.neighbors(u);
    const auto eids = adj.incident_edges(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (assignment[nbrs[k]] == b) w += g.edges[eids[k]].capacity;
    }
    return w;
  };
  for (;;) {
    std::uint32_t from = kNoNode, to = kNoNode;
    for (std::uint32_t b = 0; b < blocks; ++b) {
      if (size[b] > cap && from == kNoNode) from = b;
      if (size[b] == 0 && to == kNoNode) to = b;
    }
    if (from == kNoNode && to == kNoNode) return;
    if (from == kNoNode) {
      from = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
    }
    // Best (node, destination) by cut change; destinations must stay within cap.
    std::uint32_t best_node = kNoNode, best_dest = kNoNode;
    double best_delta = 0.0;
    for (std::uint32_t u = 0; u < assignment.size(); ++u) {
      if (assignment[u] != from) continue;
      const double stay = conn_to(u, from);
      auto consider = [&](std::uint32_t dest) {
        if (dest == from || size[dest] + 1 > cap) return;
        if (to != kNoNode && dest != to) return;
        const double delta = stay - conn_to(u, dest);
        if (best_node == kNoNode || delta < best_delta) {
          best_node = u;
          best_dest = dest;
          best_delta = delta;
        }
      };
      if (to != kNoNode) {
        consider(to);
      } else {
        for (auto v : adj.neighbors(u)) consider(assignment[v]);
      }
    }
    if (best_node == kNoNode) {
      // No adjacent destination: pick the lightest block.
      const auto dest = static_cast<std::uint32_t>(std::min_element(size.begin(), size.end()) - size.begin());
      for (std::uint32_t u = 0; u < assignment.size(); ++u) {
        if (assignment[u] == from) {
          best_node = u;
          break;
        }
      }
      best_dest = dest;
    }
    --size[from];
    ++size[best_dest];
    assignment[best_node] = best_dest;
  }
}

}  // namespace

Partition Partition::from_assignment(std::vector<std::uint32_t> assignment, std::size_t block_count) {
  if (block_count == 0) fail(ErrorCode::InvalidParams, "block count must be at least 1");
  Partition p;
  p.block_count = block_count;
  std::vector<std::size_t> counts(block_count + 1, 0);
  for (auto b : assignment) {
    if (b >= block_count) fail(ErrorCode::InvalidParams, "block id " + std::to_string(b) + " out of range");
    ++counts[b + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  p.block_ranges.resize(block_count);
  for (std::size_t b = 0; b < block_count; ++b) p.block_ranges[b] = {counts[b], counts[b + 1]};
  p.order.resize(assignment.size());
  p.position.resize(assignment.size());
  auto fill = counts;
  for (std::uint32_t u = 0; u < assignment.size(); ++u) {
    const auto pos = fill[assignment[u]]++;
    p.order[pos] = u;
    p.position[u] = static_cast<std::uint32_t>(pos);
  }
  p.assignment = std::move(assignment);
  return p;
}

Partition Partition::single_block(std::size_t node_count) {
  return from_assignment(std::vector<std::uint32_t>(node_count, 0), 1);
}

std::size_t balance_cap(std::size_t node_count, std::size_t blocks, double tolerance) {
  const std::size_t even = (node_count + blocks - 1) / blocks;
  const auto relaxed = static_cast<std::size_t>(
      std::floor((1.0 + tolerance) * static_cast<double>(node_count) / static_cast<double>(blocks) + 1e-9));
  return std::max(even, relaxed);
}

Partition partition_graph(const NonterminalGraph& g, const PartitionOptions& options) {
  const auto n = g.node_count;
  if (options.blocks == 0) fail(ErrorCode::InvalidParams, "block count must be at least 1");
  if (options.blocks > n) {
    fail(ErrorCode::BlockCountExceedsNodes,
         std::to_string(options.blocks) + " blocks requested for " + std::to_string(n) + " nodes");
  }
  if (!(options.balance_tolerance >= 0.0)) fail(ErrorCode::InvalidParams, "balance tolerance must be >= 0");
  if (options.blocks == 1) return Partition::single_block(n);

  std::mt19937_64 rng(options.seed);
  const double levels = std::ceil(std::log2(static_cast<double>(options.blocks)));
  const double level_tol = std::pow(1.0 + options.balance_tolerance, 1.0 / levels) - 1.0;
  std::vector<std::uint32_t> assignment(n, 0);
  std::vector<std::uint32_t> local_of(n, kNoNode);
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  recursive_bisection(g, std::move(all), options.blocks, 0, level_tol, assignment, local_of, rng);
  rebalance(g, assignment, options.blocks, balance_cap(n, options.blocks, options.balance_tolerance));
  return Partition::from_assignment(std::move(assignment), options.blocks);
}

PartitionStats partition_stats(const NonterminalGraph& g, const Partition& p) {
  PartitionStats st;
  std::vector<std::size_t> nodes(p.block_count, 0), nnz(p.block_count, 0);
  for (auto b : p.assignment) {
    ++nodes[b];
    ++nnz[b];
  }
  for (const auto& e : g.edges) {
    const auto bu = p.assignment[e.u], bv = p.assignment[e.v];
    if (bu == bv) {
      nnz[bu] += 2;
    } else {
      st.edge_cut += e.capacity;
    }
  }
  st.max_block_nodes = *std::max_element(nodes.begin(), nodes.end());
  st.min_block_nodes = *std::min_element(nodes.begin(), nodes.end());
  st.max_block_nnz = *std::max_element(nnz.begin(), nnz.end());
  st.min_block_nnz = *std::min_element(nnz.begin(), nnz.end());
  return st;
}

void write_partition(std::ostream& out, const Partition& p) {
  for (auto b : p.assignment) out << b << '\n';
}

Partition read_partition(std::istream& in, std::size_t node_count) {
  std::vector<std::uint32_t> assignment;
  assignment.reserve(node_count);
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t max_block = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long b = -1;
    std::string extra;
    if (!(ls >> b) || b < 0 || (ls >> extra)) {
      fail(ErrorCode::ParseError, "partition line " + std::to_string(line_no) + ": expected a block id");
    }
    assignment.push_back(static_cast<std::uint32_t>(b));
    max_block = std::max(max_block, static_cast<std::uint32_t>(b));
  }
  if (assignment.size() != node_count) {
    fail(ErrorCode::DimensionMismatch, "partition has " + std::to_string(assignment.size()) + " entries, expected " +
                                           std::to_string(node_count));
  }
  return Partition::from_assignment(std::move(assignment), node_count == 0 ? 1 : max_block + 1);
}

SparseSymmetricMatrix apply_permutation(const SparseSymmetricMatrix& a, const Partition& p) {
  if (a.dimension() != p.node_count()) {
    fail(ErrorCode::DimensionMismatch, "matrix dimension " + std::to_string(a.dimension()) +
                                           " differs from partition size " + std::to_string(p.node_count()));
  }
  return a.permuted(p.position);
}

std::vector<double> permute_vector(std::span<const double> v, const Partition& p) {
  if (v.size() != p.node_count()) fail(ErrorCode::DimensionMismatch, "vector length differs from partition size");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[p.position[i]] = v[i];
  return out;
}

std::vector<double> unpermute_vector(std::span<const double> v, const Partition& p) {
  if (v.size() != p.node_count()) fail(ErrorCode::DimensionMismatch, "vector length differs from partition size");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[p.position[i]];
  return out;
}

}  // namespace irlscut
