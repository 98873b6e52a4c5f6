#include "bnsl/network.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "bnsl/error.hpp"
#include "bnsl/scorer.hpp"

namespace bnsl {

bool Network::is_acyclic() const {
  const int n = num_variables();
  VarSet placed;
  for (int round = 0; round < n; ++round) {
    bool progress = false;
    for (int x = 0; x < n; ++x) {
      if (placed.contains(x)) continue;
      if (parents[static_cast<std::size_t>(x)].is_subset_of(placed)) {
        placed = placed.with(x);
        progress = true;
      }
    }
    if (!progress) break;
  }
  return placed == VarSet::full(n);
}

std::size_t Network::num_edges() const {
  std::size_t e = 0;
  for (VarSet p : parents) e += static_cast<std::size_t>(p.size());
  return e;
}

double network_score(const Network& net, const Dataset& data) {
  if (net.num_variables() != data.num_variables()) {
    throw Error("network has " + std::to_string(net.num_variables()) + " variables, dataset has " +
                std::to_string(data.num_variables()));
  }
  if (!net.is_acyclic()) throw Error("network contains a directed cycle");
  double total = 0.0;
  for (int x = 0; x < net.num_variables(); ++x) {
    total += mdl_score_direct(data, x, net.parents[static_cast<std::size_t>(x)]);
  }
  return total;
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", score);
  return buf;
}

void write_network(std::ostream& out, const Network& net, const std::vector<std::string>& names) {
  for (int x = 0; x < net.num_variables(); ++x) {
    out << names[static_cast<std::size_t>(x)] << " <-";
    net.parents[static_cast<std::size_t>(x)].for_each(
        [&](int p) { out << ' ' << names[static_cast<std::size_t>(p)]; });
    out << '\n';
  }
  out << "score: " << format_score(net.score) << '\n';
}

Network parse_network(std::istream& in, const std::vector<std::string>& names) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));
  auto lookup = [&](const std::string& name, std::size_t line_no) {
    const auto it = index.find(name);
    if (it == index.end()) {
      throw ParseError("network line " + std::to_string(line_no) + ": unknown variable '" + name + "'");
    }
    return it->second;
  };

  Network net(static_cast<int>(names.size()));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string child;
    if (!(tokens >> child)) continue;
    if (child == "score:") {
      double s = 0.0;
      if (tokens >> s) net.score = s;
      continue;
    }
    std::string arrow;
    if (!(tokens >> arrow) || arrow != "<-") {
      throw ParseError("network line " + std::to_string(line_no) + ": expected '<-'");
    }
    const int x = lookup(child, line_no);
    VarSet pa;
    std::string p;
    while (tokens >> p) pa = pa.with(lookup(p, line_no));
    if (pa.contains(x)) {
      throw ParseError("network line " + std::to_string(line_no) + ": variable is its own parent");
    }
    net.parents[static_cast<std::size_t>(x)] = pa;
  }
  return net;
}

void write_dot(std::ostream& out, const Network& net, const std::vector<std::string>& names) {
  out << "digraph network {\n";
  for (int x = 0; x < net.num_variables(); ++x) {
    out << "  \"" << names[static_cast<std::size_t>(x)] << "\";\n";
  }
  for (int x = 0; x < net.num_variables(); ++x) {
    net.parents[static_cast<std::size_t>(x)].for_each([&](int p) {
      out << "  \"" << names[static_cast<std::size_t>(p)] << "\" -> \""
          << names[static_cast<std::size_t>(x)] << "\";\n";
    });
  }
  out << "}\n";
}

}  // namespace bnsl
