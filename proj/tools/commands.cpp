#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "bnsl/error.hpp"
#include "bnsl/network.hpp"
#include "bnsl/oracle.hpp"
#include "bnsl/order_graph.hpp"

namespace bnsl::cli {

namespace {

LearnOptions learn_options(const Config& cfg) {
  LearnOptions o;
  o.workdir = cfg.workdir;
  if (o.workdir.empty()) {
    if (const char* env = std::getenv("BNSL_WORKDIR"); env != nullptr && *env != '\0') o.workdir = env;
  }
  o.keep_workdir = cfg.keep_workdir;
  o.max_ram_nodes = cfg.max_ram_nodes;
  o.upper = cfg.upper;
  o.parent_pruning = cfg.parent_pruning;
  o.greedy = {cfg.beam, cfg.max_iters, cfg.seed};
  return o;
}

template <typename Write>
void write_file(const std::filesystem::path& path, Write&& write) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  write(f);
  if (!f) throw IoError("failed writing " + path.string());
}

bool agree(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

double parse_upper(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "∞") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw ParseError("invalid upper bound '" + text + "'");
  return v;
}

Dataset load_dataset(const Config& cfg, PreprocessReport* report) {
  CsvOptions csv;
  csv.delimiter = cfg.delimiter;
  csv.missing_token = cfg.missing;
  csv.has_header = cfg.has_header;
  return preprocess(load_csv(cfg.input, csv), cfg.max_states, report);
}

int cmd_learn(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    PreprocessReport report;
    const Dataset data = load_dataset(cfg, &report);
    if (!cfg.meta.empty()) {
      write_file(cfg.meta, [&](std::ostream& f) { f << metadata_json(data, report).dump(2) << '\n'; });
    }
    const LearnResult r = learn(data, learn_options(cfg));
    if (cfg.out.empty()) {
      write_network(out, r.network, data.names());
    } else {
      write_file(cfg.out, [&](std::ostream& f) { write_network(f, r.network, data.names()); });
    }
    if (!cfg.dot.empty()) {
      write_file(cfg.dot, [&](std::ostream& f) { write_dot(f, r.network, data.names()); });
    }
    if (!cfg.stats.empty()) {
      write_file(cfg.stats, [&](std::ostream& f) { write_stats_csv(f, r.stats); });
    }
    err << "learned " << data.num_variables() << " variables, " << data.num_records()
        << " records: score " << format_score(r.score) << " (upper " << format_score(r.stats.upper)
        << ", " << r.stats.seconds << " s, peak disk " << r.stats.peak_disk_bytes << " bytes)\n";
    return 0;
  } catch (const std::exception& e) {
    err << "bnsl learn: " << e.what() << '\n';
    return 1;
  }
}

int cmd_check(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Dataset data = load_dataset(cfg);
    const LearnResult r = learn(data, learn_options(cfg));
    const OracleResult dp = dp_optimal(data, cfg.oracle_cap);
    out << "learn:      " << format_score(r.score) << '\n';
    out << "dp:         " << format_score(dp.score) << '\n';
    bool ok = agree(r.score, dp.score);
    if (data.num_variables() <= 4) {
      const OracleResult ex = exhaustive_optimal(data);
      out << "exhaustive: " << format_score(ex.score) << '\n';
      ok = ok && agree(ex.score, dp.score);
    }
    const double rescored = network_score(r.network, data);
    out << "rescored:   " << format_score(rescored) << '\n';
    ok = ok && agree(rescored, r.score);
    out << (ok ? "agree" : "DISAGREE") << '\n';
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "bnsl check: " << e.what() << '\n';
    return 2;
  }
}

int cmd_score(const Config& cfg, const std::filesystem::path& network, std::ostream& out,
              std::ostream& err) {
  try {
    const Dataset data = load_dataset(cfg);
    std::ifstream in(network);
    if (!in) throw IoError("cannot open " + network.string());
    const Network net = parse_network(in, data.names());
    out << format_score(network_score(net, data)) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "bnsl score: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bnsl::cli
