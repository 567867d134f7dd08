#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gelfand/graph.hpp"

namespace gelfand {

struct GraphFile {
  WeightedGraph graph;
  std::vector<std::string> omega;  // labels, possibly empty
};

// Text format, one directive per line, '#' starts a comment:
//   vertex <label>
//   edge <label> <label> <weight>
//   omega <label> [<label> ...]
GraphFile parse_graph_text(std::istream& in, const std::string& origin = "<stream>");
GraphFile parse_graph_file(const std::string& path);

// 17 significant digits, '.' decimal separator; round-trips bit-exactly
std::string format_double(double v);

using CsvRow = std::vector<std::string>;

// RFC-4180-style rows; fields are quoted only when they need it
void emit_csv(const std::vector<CsvRow>& rows, std::ostream& out);
void emit_csv(const std::vector<CsvRow>& rows, const std::string& path);

}  // namespace gelfand
