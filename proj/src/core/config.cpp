#include "config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "error.hpp"

namespace irlscut {

std::string_view rounding_choice_name(RoundingChoice r) {
  switch (r) {
    case RoundingChoice::Sweep: return "sweep";
    case RoundingChoice::TwoLevel: return "two_level";
    case RoundingChoice::Both: return "both";
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

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  fail(ErrorCode::InvalidParams, "bad boolean '" + std::string(text) + "' for '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void SolverConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "epsilon" || key == "eps") irls.epsilon = parse_number<double>(key, value);
  else if (key == "iterations" || key == "T") irls.iterations = parse_number<std::size_t>(key, value);
  else if (key == "pcg_tol") irls.pcg_tolerance = parse_number<double>(key, value);
  else if (key == "pcg_max_iter") irls.pcg_max_iterations = parse_number<std::size_t>(key, value);
  else if (key == "block_strategy") irls.block_strategy = parse_block_strategy(value);
  else if (key == "warm_start") irls.warm_start = parse_bool(key, value);
  else if (key == "early_exit") irls.early_exit = parse_bool(key, value);
  else if (key == "early_exit_tol") irls.early_exit_tolerance = parse_number<double>(key, value);
  else if (key == "workers") irls.workers = parse_number<int>(key, value);
  else if (key == "blocks" || key == "p") blocks = parse_number<std::size_t>(key, value);
  else if (key == "balance_tolerance") balance_tolerance = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "max_coarse_nodes") max_coarse_nodes = parse_number<std::size_t>(key, value);
  else if (key == "oracle") oracle = parse_bool(key, value);
  else if (key == "record_voltages") irls.record_voltages = parse_bool(key, value);
  else if (key == "rounding") {
    if (value == "sweep") rounding = RoundingChoice::Sweep;
    else if (value == "two_level") rounding = RoundingChoice::TwoLevel;
    else if (value == "both") rounding = RoundingChoice::Both;
    else fail(ErrorCode::InvalidParams, "rounding must be sweep, two_level or both");
  } else {
    fail(ErrorCode::InvalidParams, "unknown option '" + std::string(key) + "'");
  }
}

void SolverConfig::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    set(view.substr(0, eq), view.substr(eq + 1));
  }
  validate();
}

void SolverConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config '" + path + "'");
  load(in);
}

void SolverConfig::validate() const {
  if (!(irls.epsilon > 0.0)) fail(ErrorCode::InvalidParams, "epsilon must be > 0");
  if (!(irls.pcg_tolerance > 0.0)) fail(ErrorCode::InvalidParams, "pcg_tol must be > 0");
  if (irls.pcg_max_iterations == 0) fail(ErrorCode::InvalidParams, "pcg_max_iter must be >= 1");
  if (!(irls.early_exit_tolerance > 0.0)) fail(ErrorCode::InvalidParams, "early_exit_tol must be > 0");
  if (irls.workers < 1) fail(ErrorCode::InvalidParams, "workers must be >= 1");
  if (blocks == 0) fail(ErrorCode::InvalidParams, "blocks must be >= 1");
  if (!(balance_tolerance >= 0.0)) fail(ErrorCode::InvalidParams, "balance_tolerance must be >= 0");
}

std::string SolverConfig::describe() const {
  std::ostringstream out;
  out << "epsilon = " << irls.epsilon << "  # smoothing parameter\n"
      << "iterations = " << irls.iterations << "  # IRLS iterations T\n"
      << "pcg_tol = " << irls.pcg_tolerance << "  # PCG relative residual tolerance\n"
      << "pcg_max_iter = " << irls.pcg_max_iterations << "  # PCG iteration cap per solve\n"
      << "blocks = " << blocks << "  # block-Jacobi blocks p\n"
      << "block_strategy = " << block_strategy_name(irls.block_strategy) << "  # exact_lu | ilu0\n"
      << "warm_start = " << (irls.warm_start ? "on" : "off") << "  # previous solution as PCG initial guess\n"
      << "early_exit = " << (irls.early_exit ? "on" : "off") << "  # stop when max voltage change < early_exit_tol\n"
      << "early_exit_tol = " << irls.early_exit_tolerance << '\n'
      << "rounding = " << rounding_choice_name(rounding) << "  # sweep | two_level | both\n"
      << "workers = " << irls.workers << "  # worker threads\n"
      << "seed = " << seed << "  # partitioner seed\n"
      << "balance_tolerance = " << balance_tolerance << "  # max block size <= (1+tol) n/p\n"
      << "max_coarse_nodes = " << max_coarse_nodes << "  # two-level size cap, 0 = none\n"
      << "oracle = " << (oracle ? "on" : "off") << "  # run the exact solver and report delta\n"
      << "record_voltages = " << (irls.record_voltages ? "on" : "off") << "  # keep per-iteration voltages\n";
  return out.str();
}

}  // namespace irlscut
