#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bnsl {

/// Delimited text exactly as read: every cell is a trimmed string.
struct RawTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::string missing_token = "?";

  std::size_t num_columns() const { return headers.size(); }
};

struct CsvOptions {
  char delimiter = ',';
  std::string missing_token = "?";
  bool has_header = true;
};

/// Throws ParseError on ragged rows (naming the 1-based line) or empty input.
RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
RawTable parse_csv(std::istream& in, const CsvOptions& options,
                   const std::string& source = "<stream>");

enum class ColumnCoding {
  kCategorical,    // levels coded 0..r-1 in sorted level order
  kMeanThreshold,  // value < threshold -> 0, otherwise 1
};

struct ColumnInfo {
  std::string name;
  ColumnCoding coding = ColumnCoding::kCategorical;
  bool numeric = false;
  double threshold = 0.0;           // kMeanThreshold only
  std::vector<std::string> levels;  // source level per code; for thresholded text columns the pre-threshold levels
};

/// Discrete complete-case data, column-major. Every value v of column i
/// satisfies 0 <= v < arity(i).
class Dataset {
 public:
  using Value = std::uint16_t;

  Dataset(std::vector<std::string> names, std::vector<int> arities,
          std::vector<std::vector<Value>> columns, std::vector<ColumnInfo> info = {});

  int num_variables() const { return static_cast<int>(arities_.size()); }
  std::size_t num_records() const { return columns_.empty() ? 0 : columns_.front().size(); }
  int arity(int v) const { return arities_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& arities() const { return arities_; }
  std::span<const Value> column(int v) const { return columns_[static_cast<std::size_t>(v)]; }
  Value value(std::size_t row, int v) const { return columns_[static_cast<std::size_t>(v)][row]; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<ColumnInfo>& column_info() const { return info_; }

  /// Dataset restricted to / reordered by the given columns.
  Dataset select(const std::vector<int>& columns) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> arities_;
  std::vector<std::vector<Value>> columns_;
  std::vector<ColumnInfo> info_;
};

struct PreprocessReport {
  std::size_t rows_in = 0;
  std::size_t rows_dropped = 0;
  int max_states = 4;
};

/// Drops rows holding the missing token, binarizes continuous columns and
/// columns with more than `max_states` levels at their mean, and codes the
/// remaining categorical columns. Throws Error when no rows survive.
Dataset preprocess(const RawTable& table, int max_states = 4, PreprocessReport* report = nullptr);

/// Provenance dump: n, N, arities and per-column discretization.
nlohmann::json metadata_json(const Dataset& data, const PreprocessReport& report = {});

}  // namespace bnsl
