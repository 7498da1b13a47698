#pragma once

#include <iosfwd>
#include <string>

#include "graph.hpp"

namespace irlscut {

enum class GraphFormat { Dimacs, Triples };

// DIMACS max-flow: "p max n m", "n <id> s", "n <id> t", "a <u> <v> <cap>".
// Arcs are read as undirected edges; (u,v) and (v,u) are summed.
WeightedGraph read_dimacs(std::istream& in);
// "source <id> sink <id>" header followed by "<u> <v> <cap>" lines.
// Lines starting with '#' or '%' are comments.
WeightedGraph read_triples(std::istream& in);

// Detects the format from the first significant token.
WeightedGraph read_graph(std::istream& in);
WeightedGraph read_graph_file(const std::string& path);

void write_dimacs(std::ostream& out, const WeightedGraph& g);
void write_triples(std::ostream& out, const WeightedGraph& g);
void write_graph_file(const std::string& path, const WeightedGraph& g, GraphFormat format);

}  // namespace irlscut
