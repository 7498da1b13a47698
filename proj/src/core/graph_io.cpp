#include "graph_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace irlscut {
namespace {

bool is_blank_or_comment(const std::string& line, bool dimacs) {
  const auto pos = line.find_first_not_of(" \t\r");
  if (pos == std::string::npos) return true;
  if (line[pos] == '#' || line[pos] == '%') return true;
  return dimacs && line[pos] == 'c' && (pos + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[pos + 1])));
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

void require_end(std::istringstream& ls, std::size_t line_no) {
  std::string extra;
  if (ls >> extra) parse_fail(line_no, "unexpected trailing token '" + extra + "'");
}

}  // namespace

WeightedGraph read_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_problem = false;
  OriginalId declared_nodes = 0;
  std::optional<OriginalId> source, sink;
  std::vector<RawEdge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line, true)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      std::string kind;
      long long n = 0, m = 0;
      if (!(ls >> kind >> n >> m) || kind != "max") parse_fail(line_no, "expected 'p max <n> <m>'");
      require_end(ls, line_no);
      if (have_problem) parse_fail(line_no, "duplicate problem line");
      if (n < 2) parse_fail(line_no, "node count must be at least 2");
      have_problem = true;
      declared_nodes = n;
      edges.reserve(static_cast<std::size_t>(m));
    } else if (tag == "n") {
      OriginalId id = 0;
      std::string which;
      if (!(ls >> id >> which)) parse_fail(line_no, "expected 'n <id> s|t'");
      require_end(ls, line_no);
      if (which == "s") {
        source = id;
      } else if (which == "t") {
        sink = id;
      } else {
        parse_fail(line_no, "node designator must be 's' or 't'");
      }
    } else if (tag == "a") {
      RawEdge e;
      if (!(ls >> e.u >> e.v >> e.capacity)) parse_fail(line_no, "expected 'a <u> <v> <cap>'");
      require_end(ls, line_no);
      edges.push_back(e);
    } else {
      parse_fail(line_no, "unknown line type '" + tag + "'");
    }
  }
  if (!have_problem) fail(ErrorCode::ParseError, "missing 'p max' line");
  if (!source || !sink) fail(ErrorCode::ParseError, "missing source or sink designator");
  for (const auto& e : edges) {
    if (e.u < 1 || e.u > declared_nodes || e.v < 1 || e.v > declared_nodes) {
      fail(ErrorCode::ParseError, "arc endpoint out of range 1.." + std::to_string(declared_nodes));
    }
  }
  std::vector<OriginalId> declared(static_cast<std::size_t>(declared_nodes));
  for (OriginalId i = 0; i < declared_nodes; ++i) declared[static_cast<std::size_t>(i)] = i + 1;
  return WeightedGraph::ingest(edges, *source, *sink, declared);
}

WeightedGraph read_triples(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<OriginalId> source, sink;
  std::vector<RawEdge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line, false)) continue;
    std::istringstream ls(line);
    if (!source) {
      std::string kw_s, kw_t;
      OriginalId s = 0, t = 0;
      if (!(ls >> kw_s >> s >> kw_t >> t) || kw_s != "source" || kw_t != "sink") {
        parse_fail(line_no, "expected header 'source <id> sink <id>'");
      }
      require_end(ls, line_no);
      source = s;
      sink = t;
      continue;
    }
    RawEdge e;
    if (!(ls >> e.u >> e.v >> e.capacity)) parse_fail(line_no, "expected '<u> <v> <cap>'");
    require_end(ls, line_no);
    edges.push_back(e);
  }
  if (!source) fail(ErrorCode::ParseError, "missing 'source <id> sink <id>' header");
  return WeightedGraph::ingest(edges, *source, *sink);
}

WeightedGraph read_graph(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream scan(text);
  std::string line;
  GraphFormat format = GraphFormat::Triples;
  while (std::getline(scan, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#' || line[pos] == '%') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    format = (tag == "c" || tag == "p" || tag == "n" || tag == "a") ? GraphFormat::Dimacs
                                                                    : GraphFormat::Triples;
    break;
  }
  std::istringstream body(text);
  return format == GraphFormat::Dimacs ? read_dimacs(body) : read_triples(body);
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_graph(in);
}

void write_dimacs(std::ostream& out, const WeightedGraph& g) {
  // DIMACS ids are 1-based and dense; the dense order follows the original ids.
  out << "p max " << g.node_count() << ' ' << g.edge_count() << '\n';
  out << "n " << g.source() + 1 << " s\n";
  out << "n " << g.sink() + 1 << " t\n";
  out << std::setprecision(17);
  for (const auto& e : g.edges()) out << "a " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.capacity << '\n';
}

void write_triples(std::ostream& out, const WeightedGraph& g) {
  out << "source " << g.original_id(g.source()) << " sink " << g.original_id(g.sink()) << '\n';
  out << std::setprecision(17);
  for (const auto& e : g.export_edges()) out << e.u << ' ' << e.v << ' ' << e.capacity << '\n';
}

void write_graph_file(const std::string& path, const WeightedGraph& g, GraphFormat format) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  if (format == GraphFormat::Dimacs) {
    write_dimacs(out, g);
  } else {
    write_triples(out, g);
  }
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace irlscut
