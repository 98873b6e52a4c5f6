#include "bnsl/storage.hpp"

namespace bnsl::storage {

WorkDir::WorkDir(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char* sub : {"scores", "parents", "order", "recon", "tmp"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) throw IoError("cannot create " + (root_ / sub).string() + ": " + ec.message());
  }
}

fs::path WorkDir::scores_file(int variable, int layer) const {
  return root_ / "scores" / ("X" + std::to_string(variable)) / ("layer" + std::to_string(layer) + ".bin");
}

fs::path WorkDir::parents_file(int variable, int layer) const {
  return root_ / "parents" / ("X" + std::to_string(variable)) /
         ("layer" + std::to_string(layer) + ".bin");
}

fs::path WorkDir::order_file(int layer) const {
  return root_ / "order" / ("layer" + std::to_string(layer) + ".bin");
}

fs::path WorkDir::recon_file(int layer) const {
  return root_ / "recon" / ("layer" + std::to_string(layer) + ".bin");
}

fs::path WorkDir::temp_file() const {
  return root_ / "tmp" / ("run" + std::to_string(next_temp_++) + ".bin");
}

std::uint64_t WorkDir::disk_bytes() const {
  std::uint64_t total = 0;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_, ec); !ec && it != fs::end(it);
       it.increment(ec)) {
    std::error_code fe;
    if (it->is_regular_file(fe)) total += it->file_size(fe);
  }
  return total;
}

void remove_file(const fs::path& path) {
  std::error_code ec;
  fs::remove(path, ec);
  if (ec) throw IoError("cannot remove " + path.string() + ": " + ec.message());
}

}  // namespace bnsl::storage
