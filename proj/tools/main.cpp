#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using bnsl::cli::Config;
  CLI::App app{"Exact Bayesian network structure learning (MDL) by external-memory frontier "
               "breadth-first branch and bound"};
  app.require_subcommand(1);

  Config cfg;
  std::string delimiter = ",";
  std::string upper;
  bool no_header = false;
  bool no_parent_pruning = false;
  std::string network;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", cfg.input, "CSV dataset")->required()->check(CLI::ExistingFile);
    cmd->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
    cmd->add_option("--missing", cfg.missing, "Missing-value token; rows holding it are dropped")
        ->capture_default_str();
    cmd->add_flag("--no-header", no_header, "First line is data; names become X1..Xn");
    cmd->add_option("--max-states", cfg.max_states,
                    "Columns with more levels are binarized at their mean")
        ->capture_default_str();
  };
  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--workdir", cfg.workdir,
                    "Directory for score, layer and reconstruction files (default $BNSL_WORKDIR, "
                    "else a fresh temp dir)");
    cmd->add_flag("--keep-workdir", cfg.keep_workdir, "Leave search files in place afterwards");
    cmd->add_option("--max-ram-nodes", cfg.max_ram_nodes,
                    "Nodes held in the in-RAM duplicate table before spilling a sorted run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--upper", upper, "Upper bound override; 'inf' disables pruning");
    cmd->add_flag("--no-parent-pruning", no_parent_pruning,
                  "Build full parent graphs regardless of order-graph pruning");
    cmd->add_option("--beam", cfg.beam, "Beam width of the greedy upper-bound search")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap of the greedy search")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Tie-breaking seed of the greedy search")->capture_default_str();
  };

  auto* learn = app.add_subcommand("learn", "Learn an optimal network");
  add_input(learn);
  add_search(learn);
  learn->add_option("-o,--out", cfg.out, "Network text output (default stdout)");
  learn->add_option("--dot", cfg.dot, "Also write a DOT graph");
  learn->add_option("--stats", cfg.stats, "Per-layer stats CSV");
  learn->add_option("--meta", cfg.meta, "Dataset metadata JSON");

  auto* check = app.add_subcommand("check", "Compare learn against the DP and exhaustive oracles");
  add_input(check);
  add_search(check);
  check->add_option("--oracle-cap", cfg.oracle_cap, "Largest n the DP oracle accepts")
      ->capture_default_str();

  auto* score = app.add_subcommand("score", "Score a network file against a dataset");
  add_input(score);
  score->add_option("-n,--network", network, "Network text file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (delimiter == "\\t" || delimiter == "tab") delimiter = "\t";
  if (delimiter.size() != 1) {
    std::cerr << "--delimiter must be a single character\n";
    return 2;
  }
  cfg.delimiter = delimiter.front();
  cfg.has_header = !no_header;
  cfg.parent_pruning = !no_parent_pruning;
  if (!upper.empty()) {
    try {
      cfg.upper = bnsl::cli::parse_upper(upper);
    } catch (const std::exception&) {
      std::cerr << "invalid --upper value '" << upper << "'\n";
      return 2;
    }
  }

  if (*learn) return bnsl::cli::cmd_learn(cfg, std::cout, std::cerr);
  if (*check) return bnsl::cli::cmd_check(cfg, std::cout, std::cerr);
  return bnsl::cli::cmd_score(cfg, network, std::cout, std::cerr);
}
