#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gelfand/branch.hpp"
#include "gelfand/corpus.hpp"

namespace gelfand {

// Lazily computes the quantities a builtin's expected table refers to,
// sharing the expensive pieces (lambda*, solution sets) between entries.
class BuiltinEvaluator {
 public:
  explicit BuiltinEvaluator(BuiltinExample ex);

  double quantity(const std::string& key);
  const BuiltinExample& example() const { return ex_; }
  const DirichletDomain& domain() const { return domain_; }

 private:
  const LambdaStarResult& lambda_star();
  const std::vector<Solution>& solutions_at(double lambda);
  std::size_t component(const std::string& label) const;

  BuiltinExample ex_;
  DirichletDomain domain_;
  std::optional<LambdaStarResult> lambda_star_;
  std::map<double, std::vector<Solution>> solutions_;
};

// Entry point behind the `gelfand` binary; usable in-process for tests.
// Exit codes: 0 success, 1 usage, 2 bad input, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gelfand
