#pragma once

// External-memory primitives: fixed-width little-endian record files,
// bounded in-RAM duplicate detection with sorted-run spilling, and a
// streaming k-way merge that combines records sharing a key.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bnsl/error.hpp"

namespace bnsl::storage {

namespace fs = std::filesystem;

inline void put_u64(std::byte* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::byte>((v >> (8 * i)) & 0xffu);
}

inline std::uint64_t get_u64(const std::byte* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::to_integer<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

inline void put_f64(std::byte* p, double v) { put_u64(p, std::bit_cast<std::uint64_t>(v)); }
inline double get_f64(const std::byte* p) { return std::bit_cast<double>(get_u64(p)); }

/// Specialize per record type:
///   static constexpr std::size_t kWidth;
///   static void encode(const T&, std::byte*);
///   static T decode(const std::byte*);
///   static std::uint64_t key(const T&);
template <typename T>
struct RecordCodec;

/// Writes records to `<path>.part`; commit() renames onto `path`. An
/// uncommitted writer removes its partial file on destruction.
template <typename T>
class RecordWriter {
  using Codec = RecordCodec<T>;

 public:
  explicit RecordWriter(fs::path path) : path_(std::move(path)), part_(path_) {
    part_ += ".part";
    out_.open(part_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + part_.string() + " for writing");
    buffer_.reserve(kBufferRecords * Codec::kWidth);
  }

  RecordWriter(const RecordWriter&) = delete;
  RecordWriter& operator=(const RecordWriter&) = delete;

  ~RecordWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(part_, ec);
    }
  }

  void write(const T& rec) {
    const std::size_t at = buffer_.size();
    buffer_.resize(at + Codec::kWidth);
    Codec::encode(rec, buffer_.data() + at);
    ++count_;
    if (buffer_.size() >= kBufferRecords * Codec::kWidth) flush();
  }

  void commit() {
    flush();
    out_.close();
    if (!out_) throw IoError("failed to finish writing " + part_.string());
    std::error_code ec;
    fs::rename(part_, path_, ec);
    if (ec) throw IoError("cannot rename " + part_.string() + ": " + ec.message());
    committed_ = true;
  }

  std::uint64_t count() const { return count_; }
  const fs::path& path() const { return path_; }

 private:
  static constexpr std::size_t kBufferRecords = 4096;

  void flush() {
    if (buffer_.empty()) return;
    out_.write(reinterpret_cast<const char*>(buffer_.data()),
               static_cast<std::streamsize>(buffer_.size()));
    if (!out_) throw IoError("write failed on " + part_.string() + " (disk full?)");
    buffer_.clear();
  }

  fs::path path_;
  fs::path part_;
  std::ofstream out_;
  std::vector<std::byte> buffer_;
  std::uint64_t count_ = 0;
  bool committed_ = false;
};

/// Sequential buffered reader. A missing file reads as empty only when
/// `missing_ok` is set.
template <typename T>
class RecordReader {
  using Codec = RecordCodec<T>;

 public:
  explicit RecordReader(const fs::path& path, bool missing_ok = false) : path_(path) {
    if (missing_ok && !fs::exists(path)) return;
    in_.open(path, std::ios::binary);
    if (!in_) throw IoError("cannot open " + path.string());
    const auto bytes = fs::file_size(path);
    if (bytes % Codec::kWidth != 0) {
      throw CorruptionError(path.string() + ": size " + std::to_string(bytes) +
                            " is not a multiple of the record width");
    }
    remaining_ = bytes / Codec::kWidth;
    advance();
  }

  bool has_value() const { return has_; }
  const T& peek() const { return head_; }

  T pop() {
    T out = head_;
    advance();
    return out;
  }

  const fs::path& path() const { return path_; }

 private:
  static constexpr std::size_t kBufferRecords = 4096;

  void advance() {
    if (pos_ == buffer_.size()) {
      if (remaining_ == 0) {
        has_ = false;
        return;
      }
      const std::uint64_t take = std::min<std::uint64_t>(remaining_, kBufferRecords);
      buffer_.resize(take * Codec::kWidth);
      in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
      if (!in_) throw IoError("short read on " + path_.string());
      remaining_ -= take;
      pos_ = 0;
    }
    head_ = Codec::decode(buffer_.data() + pos_);
    pos_ += Codec::kWidth;
    has_ = true;
  }

  fs::path path_;
  std::ifstream in_;
  std::vector<std::byte> buffer_;
  std::size_t pos_ = 0;
  std::uint64_t remaining_ = 0;
  T head_{};
  bool has_ = false;
};

template <typename T>
std::vector<T> read_all(const fs::path& path) {
  std::vector<T> out;
  RecordReader<T> in(path);
  while (in.has_value()) out.push_back(in.pop());
  return out;
}

/// Work-directory layout: {scores, parents, order, recon, tmp}. Variable
/// indices in file names are 0-based.
class WorkDir {
 public:
  explicit WorkDir(fs::path root);

  const fs::path& root() const { return root_; }
  fs::path scores_file(int variable, int layer) const;
  fs::path parents_file(int variable, int layer) const;
  fs::path order_file(int layer) const;
  fs::path recon_file(int layer) const;
  fs::path scores_meta() const { return root_ / "scores" / "meta.json"; }

  /// Fresh path under tmp/ for a sorted run.
  fs::path temp_file() const;

  /// Total size of regular files under the root.
  std::uint64_t disk_bytes() const;

 private:
  fs::path root_;
  mutable std::atomic<std::uint64_t> next_temp_{0};
};

void remove_file(const fs::path& path);

struct SortedRun {
  fs::path path;
  std::uint64_t records = 0;
};

/// Sorts a key -> record table into a run file and clears the table.
template <typename T>
SortedRun spill_run(std::unordered_map<std::uint64_t, T>& table, const fs::path& out) {
  std::vector<T> rows;
  rows.reserve(table.size());
  for (auto& [k, v] : table) rows.push_back(v);
  table.clear();
  std::sort(rows.begin(), rows.end(), [](const T& a, const T& b) {
    return RecordCodec<T>::key(a) < RecordCodec<T>::key(b);
  });
  RecordWriter<T> w(out);
  for (const auto& r : rows) w.write(r);
  w.commit();
  return SortedRun{out, rows.size()};
}

namespace detail {

template <typename T, typename Reduce, typename Sink>
void merge_direct(const std::vector<SortedRun>& runs, Reduce& reduce, Sink& sink) {
  using Codec = RecordCodec<T>;
  std::vector<RecordReader<T>> readers;
  readers.reserve(runs.size());
  for (const auto& r : runs) readers.emplace_back(r.path);

  using Head = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
  std::vector<std::uint64_t> last(readers.size());
  for (std::size_t i = 0; i < readers.size(); ++i) {
    if (readers[i].has_value()) {
      last[i] = Codec::key(readers[i].peek());
      heap.emplace(last[i], i);
    }
  }

  bool have = false;
  T acc{};
  std::uint64_t acc_key = 0;
  while (!heap.empty()) {
    const auto [key, i] = heap.top();
    heap.pop();
    T rec = readers[i].pop();
    if (readers[i].has_value()) {
      const std::uint64_t next = Codec::key(readers[i].peek());
      if (next <= last[i]) {
        throw CorruptionError("sorted run " + readers[i].path().string() +
                              " is not strictly ascending");
      }
      last[i] = next;
      heap.emplace(next, i);
    }
    if (have && key == acc_key) {
      acc = reduce(acc, rec);
    } else {
      if (have) sink(acc);
      acc = rec;
      acc_key = key;
      have = true;
    }
  }
  if (have) sink(acc);
}

}  // namespace detail

/// Streams the key-unique union of `runs` to `sink` in ascending key order,
/// combining equal keys with `reduce`. Input runs are deleted once
/// consumed. At most `fan_in` runs are open at once; larger inputs are
/// merged in cascaded passes through temporary runs.
template <typename T, typename Reduce, typename Sink>
void merge_runs(std::vector<SortedRun> runs, Reduce reduce, Sink&& sink, const WorkDir& work,
                std::size_t fan_in = 64) {
  if (fan_in < 2) fan_in = 2;
  while (runs.size() > fan_in) {
    std::vector<SortedRun> next;
    for (std::size_t at = 0; at < runs.size(); at += fan_in) {
      const std::size_t end = std::min(runs.size(), at + fan_in);
      std::vector<SortedRun> group(runs.begin() + static_cast<std::ptrdiff_t>(at),
                                   runs.begin() + static_cast<std::ptrdiff_t>(end));
      if (group.size() == 1) {
        next.push_back(group.front());
        continue;
      }
      SortedRun out{work.temp_file(), 0};
      RecordWriter<T> w(out.path);
      auto to_file = [&](const T& r) { w.write(r); };
      detail::merge_direct<T>(group, reduce, to_file);
      w.commit();
      out.records = w.count();
      for (const auto& g : group) remove_file(g.path);
      next.push_back(out);
    }
    runs = std::move(next);
  }
  detail::merge_direct<T>(runs, reduce, sink);
  for (const auto& r : runs) remove_file(r.path);
}

/// Convenience overload writing the merged stream to a file.
template <typename T, typename Reduce>
SortedRun merge_runs_to_file(std::vector<SortedRun> runs, Reduce reduce, const fs::path& out,
                             const WorkDir& work, std::size_t fan_in = 64) {
  RecordWriter<T> w(out);
  merge_runs<T>(std::move(runs), reduce, [&](const T& r) { w.write(r); }, work, fan_in);
  w.commit();
  return SortedRun{out, w.count()};
}

/// In-RAM duplicate detection for one search layer. Records with equal keys
/// are combined with `reduce`; once more than `max_size` keys are held the
/// table is spilled as a sorted run. drain() yields the key-unique layer in
/// ascending key order.
template <typename T, typename Reduce>
class DedupTable {
  using Codec = RecordCodec<T>;

 public:
  DedupTable(const WorkDir& work, std::size_t max_size, Reduce reduce, std::size_t fan_in = 64)
      : work_(&work), max_size_(std::max<std::size_t>(1, max_size)), reduce_(std::move(reduce)),
        fan_in_(fan_in) {}

  void insert(const T& rec) {
    const std::uint64_t k = Codec::key(rec);
    auto [it, fresh] = table_.try_emplace(k, rec);
    if (!fresh) it->second = reduce_(it->second, rec);
    if (table_.size() > max_size_) spill();
  }

  std::size_t runs_spilled() const { return spilled_; }
  std::size_t resident() const { return table_.size(); }

  template <typename Sink>
  void drain(Sink&& sink) {
    if (runs_.empty()) {
      std::vector<T> rows;
      rows.reserve(table_.size());
      for (auto& [k, v] : table_) rows.push_back(v);
      table_.clear();
      std::sort(rows.begin(), rows.end(),
                [](const T& a, const T& b) { return Codec::key(a) < Codec::key(b); });
      for (const auto& r : rows) sink(r);
      return;
    }
    if (!table_.empty()) spill();
    merge_runs<T>(std::move(runs_), reduce_, sink, *work_, fan_in_);
    runs_.clear();
  }

 private:
  void spill() {
    runs_.push_back(spill_run(table_, work_->temp_file()));
    ++spilled_;
  }

  const WorkDir* work_;
  std::size_t max_size_;
  Reduce reduce_;
  std::size_t fan_in_;
  std::unordered_map<std::uint64_t, T> table_;
  std::vector<SortedRun> runs_;
  std::size_t spilled_ = 0;
};

}  // namespace bnsl::storage
