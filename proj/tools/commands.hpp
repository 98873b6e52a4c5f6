#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "bnsl/dataset.hpp"

namespace bnsl::cli {

struct Config {
  std::filesystem::path input;
  char delimiter = ',';
  std::string missing = "?";
  bool has_header = true;
  int max_states = 4;
  std::filesystem::path workdir;  // empty: $BNSL_WORKDIR, else a temp dir
  bool keep_workdir = false;
  std::size_t max_ram_nodes = std::size_t{1} << 20;
  std::optional<double> upper;
  bool parent_pruning = true;
  int beam = 5;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  std::filesystem::path out;    // network text; empty: stdout
  std::filesystem::path dot;    // optional DOT graph
  std::filesystem::path stats;  // optional stats CSV
  std::filesystem::path meta;   // optional dataset metadata JSON
  int oracle_cap = 15;
};

/// Parses "inf", "+inf", "infinity" or a finite number.
double parse_upper(const std::string& text);

Dataset load_dataset(const Config& cfg, PreprocessReport* report = nullptr);

int cmd_learn(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_score(const Config& cfg, const std::filesystem::path& network, std::ostream& out,
              std::ostream& err);

}  // namespace bnsl::cli
