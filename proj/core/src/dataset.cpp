#include "bnsl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bnsl/error.hpp"
#include "bnsl/varset.hpp"

namespace bnsl {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(delim, start);
    if (at == std::string::npos) {
      cells.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(trim(std::string_view(line).substr(start, at - start)));
    start = at + 1;
  }
  return cells;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(const std::string& s) {
  long long v = 0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || first == s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

// Thresholds `values` at their mean and compacts the observed states so
// that a constant column ends up with arity 1.
std::pair<std::vector<Dataset::Value>, int> threshold_at_mean(const std::vector<double>& values,
                                                              double& mean_out) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  mean_out = mean;
  std::vector<Dataset::Value> codes(values.size());
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < values.size(); ++i) {
    codes[i] = values[i] < mean ? 0 : 1;
    seen[codes[i]] = true;
  }
  if (seen[0] && seen[1]) return {std::move(codes), 2};
  std::fill(codes.begin(), codes.end(), Dataset::Value{0});
  return {std::move(codes), 1};
}

}  // namespace

RawTable parse_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
  RawTable table;
  table.missing_token = options.missing_token;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, options.delimiter);
    if (header_pending) {
      table.headers = std::move(cells);
      width = table.headers.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " fields, expected " + std::to_string(width));
    }
    table.rows.push_back(std::move(cells));
  }
  if (width == 0) throw ParseError(source + ": empty input");
  if (table.headers.empty()) {
    for (std::size_t i = 0; i < width; ++i) table.headers.push_back("X" + std::to_string(i + 1));
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in, options, path.string());
}

Dataset::Dataset(std::vector<std::string> names, std::vector<int> arities,
                 std::vector<std::vector<Value>> columns, std::vector<ColumnInfo> info)
    : names_(std::move(names)), arities_(std::move(arities)), columns_(std::move(columns)),
      info_(std::move(info)) {
  const auto n = arities_.size();
  if (n == 0) throw Error("dataset has no variables");
  if (n > static_cast<std::size_t>(kMaxVariables)) {
    throw Error("dataset has " + std::to_string(n) + " variables; at most 63 are supported");
  }
  if (columns_.size() != n) throw Error("dataset column count does not match arities");
  if (names_.empty()) {
    for (std::size_t i = 0; i < n; ++i) names_.push_back("X" + std::to_string(i + 1));
  }
  if (names_.size() != n) throw Error("dataset name count does not match arities");
  const auto records = columns_.front().size();
  if (records == 0) throw Error("dataset has no records");
  for (std::size_t i = 0; i < n; ++i) {
    if (arities_[i] < 1) throw Error("variable " + names_[i] + " has arity < 1");
    if (columns_[i].size() != records) throw Error("dataset columns have different lengths");
    for (Value v : columns_[i]) {
      if (v >= arities_[i]) {
        throw Error("variable " + names_[i] + " holds value " + std::to_string(v) +
                    " outside arity " + std::to_string(arities_[i]));
      }
    }
  }
}

Dataset Dataset::select(const std::vector<int>& cols) const {
  std::vector<std::string> names;
  std::vector<int> arities;
  std::vector<std::vector<Value>> columns;
  std::vector<ColumnInfo> info;
  for (int c : cols) {
    names.push_back(name(c));
    arities.push_back(arity(c));
    columns.push_back(columns_[static_cast<std::size_t>(c)]);
    if (!info_.empty()) info.push_back(info_[static_cast<std::size_t>(c)]);
  }
  return Dataset(std::move(names), std::move(arities), std::move(columns), std::move(info));
}

Dataset preprocess(const RawTable& table, int max_states, PreprocessReport* report) {
  if (max_states < 1) throw Error("max_states must be at least 1");
  std::vector<const std::vector<std::string>*> kept;
  for (const auto& row : table.rows) {
    if (std::find(row.begin(), row.end(), table.missing_token) == row.end()) kept.push_back(&row);
  }
  if (report != nullptr) {
    report->rows_in = table.rows.size();
    report->rows_dropped = table.rows.size() - kept.size();
    report->max_states = max_states;
  }
  if (kept.empty()) throw Error("no records left after removing rows with missing values");

  const std::size_t n = table.num_columns();
  std::vector<int> arities(n);
  std::vector<std::vector<Dataset::Value>> columns(n);
  std::vector<ColumnInfo> info(n);

  for (std::size_t c = 0; c < n; ++c) {
    ColumnInfo& ci = info[c];
    ci.name = table.headers[c];

    bool numeric = true;
    bool integral = true;
    std::vector<double> numbers;
    numbers.reserve(kept.size());
    for (const auto* row : kept) {
      const std::string& cell = (*row)[c];
      const auto d = parse_double(cell);
      if (!d) {
        numeric = false;
        break;
      }
      numbers.push_back(*d);
      if (!parse_integer(cell)) integral = false;
    }
    ci.numeric = numeric;

    if (numeric) {
      std::set<double> distinct(numbers.begin(), numbers.end());
      if (!integral || distinct.size() > static_cast<std::size_t>(max_states)) {
        ci.coding = ColumnCoding::kMeanThreshold;
        auto [codes, r] = threshold_at_mean(numbers, ci.threshold);
        columns[c] = std::move(codes);
        arities[c] = r;
      } else {
        std::map<double, Dataset::Value> code;
        for (double v : distinct) {
          code.emplace(v, static_cast<Dataset::Value>(code.size()));
          ci.levels.push_back(std::to_string(static_cast<long long>(v)));
        }
        for (double v : numbers) columns[c].push_back(code.at(v));
        arities[c] = static_cast<int>(code.size());
      }
      continue;
    }

    std::map<std::string, Dataset::Value> code;
    for (const auto* row : kept) code.emplace((*row)[c], Dataset::Value{0});
    Dataset::Value next = 0;
    for (auto& [level, v] : code) {
      v = next++;
      ci.levels.push_back(level);
    }
    if (code.size() > static_cast<std::size_t>(max_states)) {
      ci.coding = ColumnCoding::kMeanThreshold;
      std::vector<double> as_codes;
      as_codes.reserve(kept.size());
      for (const auto* row : kept) as_codes.push_back(code.at((*row)[c]));
      auto [codes, r] = threshold_at_mean(as_codes, ci.threshold);
      columns[c] = std::move(codes);
      arities[c] = r;
    } else {
      for (const auto* row : kept) columns[c].push_back(code.at((*row)[c]));
      arities[c] = static_cast<int>(code.size());
    }
  }
  return Dataset(table.headers, std::move(arities), std::move(columns), std::move(info));
}

nlohmann::json metadata_json(const Dataset& data, const PreprocessReport& report) {
  nlohmann::json j;
  j["n"] = data.num_variables();
  j["N"] = data.num_records();
  j["arities"] = data.arities();
  j["rows_in"] = report.rows_in;
  j["rows_dropped"] = report.rows_dropped;
  j["max_states"] = report.max_states;
  auto& cols = j["columns"] = nlohmann::json::array();
  for (int v = 0; v < data.num_variables(); ++v) {
    nlohmann::json c;
    c["name"] = data.name(v);
    c["arity"] = data.arity(v);
    if (!data.column_info().empty()) {
      const auto& ci = data.column_info()[static_cast<std::size_t>(v)];
      c["numeric"] = ci.numeric;
      if (ci.coding == ColumnCoding::kMeanThreshold) {
        c["coding"] = ci.numeric ? "mean-threshold" : "mean-threshold-of-level-codes";
        c["threshold"] = ci.threshold;
      } else {
        c["coding"] = "categorical";
      }
      if (!ci.levels.empty()) c["levels"] = ci.levels;
    }
    cols.push_back(std::move(c));
  }
  return j;
}

}  // namespace bnsl
