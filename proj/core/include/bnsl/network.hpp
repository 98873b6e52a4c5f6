#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/varset.hpp"

namespace bnsl {

/// A structure over n variables: parents[X] for each X, plus its score.
struct Network {
  std::vector<VarSet> parents;
  double score = 0.0;

  Network() = default;
  explicit Network(int n) : parents(static_cast<std::size_t>(n)) {}

  int num_variables() const { return static_cast<int>(parents.size()); }
  bool is_acyclic() const;
  std::size_t num_edges() const;
};

/// Sum of mdl_score_direct over the parent sets. Throws Error when cyclic.
double network_score(const Network& net, const Dataset& data);

/// One line per variable, "X <- P1 P2 ...", then "score: <value>".
void write_network(std::ostream& out, const Network& net, const std::vector<std::string>& names);
std::string format_score(double score);

/// Inverse of write_network; variables not mentioned get no parents and a
/// "score:" line is ignored. Throws ParseError on unknown names.
Network parse_network(std::istream& in, const std::vector<std::string>& names);

void write_dot(std::ostream& out, const Network& net, const std::vector<std::string>& names);

}  // namespace bnsl
