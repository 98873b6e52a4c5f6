#include "bnsl/varset.hpp"

#include <array>
#include <stdexcept>

namespace bnsl {

namespace {

// Pascal's triangle up to C(64, k). C(64, 32) overflows 64 bits; those
// cells are flagged and reported by binomial() rather than used.
struct BinomialTable {
  std::array<std::array<std::uint64_t, 65>, 65> value{};
  std::array<std::array<bool, 65>, 65> overflow{};

  BinomialTable() {
    for (int n = 0; n <= 64; ++n) {
      value[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        unsigned __int128 sum =
            static_cast<unsigned __int128>(value[n - 1][k - 1]) + value[n - 1][k];
        overflow[n][k] = overflow[n - 1][k - 1] || overflow[n - 1][k] ||
                         sum > static_cast<unsigned __int128>(~std::uint64_t{0});
        value[n][k] = static_cast<std::uint64_t>(sum);
      }
    }
  }
};

const BinomialTable& table() {
  static const BinomialTable t;
  return t;
}

}  // namespace

std::vector<int> VarSet::elements() const {
  std::vector<int> out;
  out.reserve(size());
  for_each([&](int v) { out.push_back(v); });
  return out;
}

std::string VarSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each([&](int v) {
    if (!first) s += ',';
    s += 'X' + std::to_string(v + 1);
    first = false;
  });
  s += '}';
  return s;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
  if (k > n) return 0;
  if (n > 64) throw std::overflow_error("binomial: n exceeds 64");
  const auto& t = table();
  if (t.overflow[n][k]) {
    throw std::overflow_error("binomial: C(" + std::to_string(n) + ", " + std::to_string(k) +
                              ") exceeds 64 bits");
  }
  return t.value[n][k];
}

std::uint64_t layer_size(int n, int l) {
  if (l < 0 || l > n) throw std::invalid_argument("layer_size: layer outside [0, n]");
  return binomial(n, l);
}

LayerRank colex_rank(VarSet s) {
  const auto& t = table();
  std::uint64_t r = 0;
  int i = 1;
  s.for_each([&](int c) { r += t.value[c][i++]; });
  return LayerRank{r};
}

VarSet colex_unrank(LayerRank r, int k, int n) {
  if (k < 0 || k > n || n > kMaxVariables) throw std::out_of_range("colex_unrank: bad layer");
  if (r.value >= binomial(n, k)) {
    throw std::out_of_range("colex_unrank: rank " + std::to_string(r.value) +
                            " outside layer of size " + std::to_string(binomial(n, k)));
  }
  const auto& t = table();
  std::uint64_t rest = r.value;
  std::uint64_t bits = 0;
  int c = n - 1;
  for (int i = k; i >= 1; --i) {
    while (t.value[c][i] > rest) --c;
    bits |= std::uint64_t{1} << c;
    rest -= t.value[c][i];
    --c;
  }
  return VarSet{bits};
}

std::vector<Successor> successors(VarSet u, int n) {
  std::vector<Successor> out;
  const VarSet rest = VarSet::full(n) - u;
  out.reserve(rest.size());
  rest.for_each([&](int x) { out.push_back({x, u.with(x)}); });
  return out;
}

}  // namespace bnsl
