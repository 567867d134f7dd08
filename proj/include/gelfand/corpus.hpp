#pragma once

#include <string>
#include <vector>

#include "gelfand/domain.hpp"
#include "gelfand/nonlinearity.hpp"

namespace gelfand {

// One expected quantity of a built-in example. Provenance is one of
//   "exact"       closed form on this graph
//   "reference"   reported value reproduced to the stated tolerance
//   "cross-check" value frozen from an independent computation
struct ExpectedValue {
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  std::string provenance;
};

struct BuiltinExample {
  std::string name;
  std::string description;
  WeightedGraph graph;
  std::vector<std::string> omega;
  Nonlinearity f;
  std::vector<ExpectedValue> expected;

  DirichletDomain domain() const { return build_domain(graph, omega); }
};

std::vector<std::string> builtin_names();

// Accepts "name" or "name:arg1,arg2,..." for the parameterized families
// (path4-weighted:a,b  khat-n:a,b,c,n  allen-cahn-ab:a,b  regular-dirichlet:k).
BuiltinExample make_builtin(const std::string& name_and_args);

// every builtin with its default parameters
std::vector<BuiltinExample> builtin_corpus();

}  // namespace gelfand
