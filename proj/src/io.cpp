#include "gelfand/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gelfand {

GraphFile parse_graph_text(std::istream& in, const std::string& origin) {
  std::vector<Edge> edges;
  std::vector<std::string> declared;
  std::vector<std::string> omega;

  std::string line;
  int line_no = 0;
  auto fail = [&origin, &line_no](const std::string& what) {
    throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string directive;
    if (!(ls >> directive)) continue;

    if (directive == "vertex") {
      std::string label;
      if (!(ls >> label)) fail("vertex: missing label");
      declared.push_back(label);
    } else if (directive == "edge") {
      Edge e;
      std::string weight;
      if (!(ls >> e.u >> e.v >> weight)) fail("edge: expected two labels and a weight");
      try {
        std::size_t used = 0;
        e.weight = std::stod(weight, &used);
        if (used != weight.size()) fail("edge: malformed weight '" + weight + "'");
      } catch (const std::logic_error&) {
        fail("edge: malformed weight '" + weight + "'");
      }
      std::string extra;
      if (ls >> extra) fail("edge: trailing token '" + extra + "'");
      edges.push_back(std::move(e));
    } else if (directive == "omega") {
      std::string label;
      int count = 0;
      while (ls >> label) {
        omega.push_back(label);
        ++count;
      }
      if (count == 0) fail("omega: needs at least one label");
    } else {
      fail("unknown directive '" + directive + "'");
    }
  }

  if (edges.empty()) throw std::invalid_argument(origin + ": no edges");
  GraphFile out{build_graph(edges, declared), std::move(omega)};
  for (const auto& label : out.omega)
    if (!out.graph.index_of(label))
      throw std::invalid_argument(origin + ": omega references undeclared vertex '" + label + "'");
  return out;
}

GraphFile parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file '" + path + "'");
  return parse_graph_text(in, path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void emit_csv(const std::vector<CsvRow>& rows, std::ostream& out) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      write_field(out, row[i]);
    }
    out << '\n';
  }
}

void emit_csv(const std::vector<CsvRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("emit_csv: cannot open '" + path + "' for writing");
  emit_csv(rows, out);
  if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

}  // namespace gelfand
