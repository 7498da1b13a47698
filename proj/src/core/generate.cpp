#include "generate.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"

namespace irlscut {

InstanceKind parse_instance_kind(std::string_view name) {
  if (name == "grid2d") return InstanceKind::Grid2d;
  if (name == "grid3d_26conn" || name == "grid3d") return InstanceKind::Grid3d26;
  if (name == "random_geometric" || name == "rgg") return InstanceKind::RandomGeometric;
  if (name == "path") return InstanceKind::Path;
  fail(ErrorCode::InvalidParams, "unknown instance kind '" + std::string(name) + "'");
}

std::string_view instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Grid2d: return "grid2d";
    case InstanceKind::Grid3d26: return "grid3d_26conn";
    case InstanceKind::RandomGeometric: return "random_geometric";
    case InstanceKind::Path: return "path";
  }
  return "unknown";
}

TerminalMode parse_terminal_mode(std::string_view name) {
  if (name == "sides") return TerminalMode::Sides;
  if (name == "corners") return TerminalMode::Corners;
  if (name == "blob") return TerminalMode::Blob;
  fail(ErrorCode::InvalidParams, "unknown terminal mode '" + std::string(name) + "'");
}

std::string_view terminal_mode_name(TerminalMode mode) {
  switch (mode) {
    case TerminalMode::Sides: return "sides";
    case TerminalMode::Corners: return "corners";
    case TerminalMode::Blob: return "blob";
  }
  return "unknown";
}

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::InvalidParams, "bad value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
  return value;
}

constexpr OriginalId kSource = 0;
constexpr OriginalId kSink = 1;
constexpr OriginalId kFirstNode = 2;

struct Builder {
  const InstanceParams& params;
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::vector<RawEdge> edges{};

  // U(0,1] so weights stay strictly above base.
  double uniform() { return 1.0 - unit(rng); }
  double weight() { return params.base_weight + uniform(); }
  void add(OriginalId u, OriginalId v) { edges.push_back({u, v, weight()}); }
  void add_terminal(OriginalId u, OriginalId terminal) {
    edges.push_back({u, terminal, params.terminal_scale * weight()});
  }
};

void validate_common(const InstanceParams& p) {
  if (!(p.base_weight >= 0.0) || !(p.terminal_scale > 0.0)) {
    fail(ErrorCode::InvalidParams, "base weight must be >= 0 and terminal scale > 0");
  }
  if (!(p.noise >= 0.0 && p.noise <= 1.0)) fail(ErrorCode::InvalidParams, "noise must lie in [0,1]");
}

// Grid in up to three dimensions; `full26` adds diagonal neighbours.
WeightedGraph grid(const InstanceParams& p, std::size_t nx, std::size_t ny, std::size_t nz, bool full26,
                   std::uint64_t seed) {
  if (nx == 0 || ny == 0 || nz == 0) fail(ErrorCode::InvalidParams, "grid dimensions must be positive");
  if (nx * ny * nz < 2 && p.terminals == TerminalMode::Corners) {
    fail(ErrorCode::InvalidParams, "corner terminals need at least two grid nodes");
  }
  Builder b{p, std::mt19937_64(seed)};
  auto id = [&](std::size_t x, std::size_t y, std::size_t z) {
    return kFirstNode + static_cast<OriginalId>((z * ny + y) * nx + x);
  };
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t x = 0; x < nx; ++x) {
        for (int dz = 0; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              // Each undirected neighbour pair once: lexicographically positive offsets.
              if (dz == 0 && (dy < 0 || (dy == 0 && dx <= 0))) continue;
              const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
              if (!full26 && nonzero != 1) continue;
              const long xx = static_cast<long>(x) + dx, yy = static_cast<long>(y) + dy,
                         zz = static_cast<long>(z) + dz;
              if (xx < 0 || yy < 0 || xx >= static_cast<long>(nx) || yy >= static_cast<long>(ny) ||
                  zz >= static_cast<long>(nz)) {
                continue;
              }
              b.add(id(x, y, z), id(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy),
                                    static_cast<std::size_t>(zz)));
            }
          }
        }
      }
    }
  }
  switch (p.terminals) {
    case TerminalMode::Sides:
      for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t y = 0; y < ny; ++y) {
          b.add_terminal(id(0, y, z), kSource);
          b.add_terminal(id(nx - 1, y, z), kSink);
        }
      }
      break;
    case TerminalMode::Corners:
      b.add_terminal(id(0, 0, 0), kSource);
      b.add_terminal(id(nx - 1, ny - 1, nz - 1), kSink);
      break;
    case TerminalMode::Blob: {
      std::bernoulli_distribution flip(p.noise);
      const double r = 0.3;
      for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t y = 0; y < ny; ++y) {
          for (std::size_t x = 0; x < nx; ++x) {
            auto coord = [](std::size_t i, std::size_t n) {
              return n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
            };
            const double fx = coord(x, nx) - 0.5, fy = coord(y, ny) - 0.5, fz = coord(z, nz) - 0.5;
            bool inside = fx * fx + fy * fy + fz * fz <= r * r;
            if (flip(b.rng)) inside = !inside;
            b.add_terminal(id(x, y, z), inside ? kSource : kSink);
          }
        }
      }
      break;
    }
  }
  return WeightedGraph::ingest(b.edges, kSource, kSink);
}

WeightedGraph random_geometric(const InstanceParams& p, std::uint64_t seed) {
  const auto n = p.nodes;
  if (n < 2) fail(ErrorCode::InvalidParams, "random_geometric needs at least 2 nodes");
  std::mt19937_64 point_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::array<double, 2>> pts(n);
  for (auto& q : pts) q = {unit(point_rng), unit(point_rng)};

  double radius = p.radius > 0.0 ? p.radius
                                 : std::sqrt(2.0 * std::log(static_cast<double>(n)) /
                                             (std::numbers::pi * static_cast<double>(n)));
  for (std::size_t attempt = 0; attempt <= p.max_retries; ++attempt, radius *= 1.25) {
    // Weights come from a stream independent of the radius retries.
    Builder b{p, std::mt19937_64(seed ^ 0x9e3779b97f4a7c15ULL)};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
        if (dx * dx + dy * dy <= radius * radius) b.add(kFirstNode + static_cast<OriginalId>(i), kFirstNode + static_cast<OriginalId>(j));
      }
    }
    std::size_t to_s = 0, to_t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = kFirstNode + static_cast<OriginalId>(i);
      switch (p.terminals) {
        case TerminalMode::Sides:
          if (pts[i][0] < p.side_fraction) {
            b.add_terminal(u, kSource);
            ++to_s;
          }
          if (pts[i][0] > 1.0 - p.side_fraction) {
            b.add_terminal(u, kSink);
            ++to_t;
          }
          break;
        case TerminalMode::Blob: {
          const double fx = pts[i][0] - 0.5, fy = pts[i][1] - 0.5;
          const bool inside = fx * fx + fy * fy <= 0.09;
          b.add_terminal(u, inside ? kSource : kSink);
          ++(inside ? to_s : to_t);
          break;
        }
        case TerminalMode::Corners:
          break;
      }
    }
    if (p.terminals == TerminalMode::Corners || to_s == 0 || to_t == 0) {
      // Attach to the points nearest (0,0) and (1,1).
      std::size_t lo = 0, hi = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (pts[i][0] + pts[i][1] < pts[lo][0] + pts[lo][1]) lo = i;
        if (pts[i][0] + pts[i][1] > pts[hi][0] + pts[hi][1]) hi = i;
      }
      if (to_s == 0) b.add_terminal(kFirstNode + static_cast<OriginalId>(lo), kSource);
      if (to_t == 0) b.add_terminal(kFirstNode + static_cast<OriginalId>(hi), kSink);
    }
    std::vector<OriginalId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = kFirstNode + static_cast<OriginalId>(i);
    try {
      return WeightedGraph::ingest(b.edges, kSource, kSink, all);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DisconnectedGraph) throw;
    }
  }
  fail(ErrorCode::InvalidParams, "random_geometric: still disconnected after " + std::to_string(p.max_retries) +
                                     " radius increases");
}

WeightedGraph path(const InstanceParams& p) {
  if (p.nodes < 2) fail(ErrorCode::InvalidParams, "path needs at least 2 nodes");
  // s = 0, interior 2..n-1, t = 1; weights n-1 down to 1 from s toward t.
  std::vector<OriginalId> chain;
  chain.push_back(kSource);
  for (std::size_t i = 0; i + 2 < p.nodes; ++i) chain.push_back(kFirstNode + static_cast<OriginalId>(i));
  chain.push_back(kSink);
  std::vector<RawEdge> edges{};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    edges.push_back({chain[i], chain[i + 1], static_cast<double>(p.nodes - 1 - i)});
  }
  return WeightedGraph::ingest(edges, kSource, kSink);
}

}  // namespace

void InstanceParams::set(std::string_view key, std::string_view value) {
  if (key == "rows") rows = parse_number<std::size_t>(key, value);
  else if (key == "cols") cols = parse_number<std::size_t>(key, value);
  else if (key == "depth") depth = parse_number<std::size_t>(key, value);
  else if (key == "nodes" || key == "n") nodes = parse_number<std::size_t>(key, value);
  else if (key == "base" || key == "base_weight") base_weight = parse_number<double>(key, value);
  else if (key == "terminal_scale") terminal_scale = parse_number<double>(key, value);
  else if (key == "terminals") terminals = parse_terminal_mode(value);
  else if (key == "noise") noise = parse_number<double>(key, value);
  else if (key == "radius") radius = parse_number<double>(key, value);
  else if (key == "side_fraction") side_fraction = parse_number<double>(key, value);
  else if (key == "max_retries") max_retries = parse_number<std::size_t>(key, value);
  else fail(ErrorCode::InvalidParams, "unknown instance parameter '" + std::string(key) + "'");
}

InstanceParams default_params(InstanceKind kind) {
  InstanceParams p;
  if (kind == InstanceKind::RandomGeometric) {
    p.base_weight = 0.0;
    p.terminals = TerminalMode::Sides;
    p.terminal_scale = 10.0;
  } else if (kind == InstanceKind::Path) {
    p.nodes = 3;
  }
  return p;
}

WeightedGraph generate_instance(InstanceKind kind, const InstanceParams& params, std::uint64_t seed) {
  validate_common(params);
  switch (kind) {
    case InstanceKind::Grid2d: return grid(params, params.cols, params.rows, 1, false, seed);
    case InstanceKind::Grid3d26: return grid(params, params.cols, params.rows, params.depth, true, seed);
    case InstanceKind::RandomGeometric: return random_geometric(params, seed);
    case InstanceKind::Path: return path(params);
  }
  fail(ErrorCode::InvalidParams, "unknown instance kind");
}

}  // namespace irlscut
