#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace bnsl {

inline constexpr int kMaxVariables = 63;

/// A subset of the variables {0, ..., n-1}, stored as an n-bit mask.
///
/// For two sets of the same cardinality, comparing the raw masks as
/// unsigned integers gives exactly the colexicographic order, so files
/// holding one layer can be sorted by mask.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr VarSet singleton(int v) { return VarSet{std::uint64_t{1} << v}; }
  static constexpr VarSet full(int n) {
    return VarSet{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1u; }
  constexpr bool is_subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }

  /// Largest element; undefined for the empty set.
  constexpr int max() const { return 63 - std::countl_zero(bits_); }

  constexpr VarSet with(int v) const { return VarSet{bits_ | (std::uint64_t{1} << v)}; }
  constexpr VarSet without(int v) const { return VarSet{bits_ & ~(std::uint64_t{1} << v)}; }

  constexpr VarSet operator|(VarSet o) const { return VarSet{bits_ | o.bits_}; }
  constexpr VarSet operator&(VarSet o) const { return VarSet{bits_ & o.bits_}; }
  constexpr VarSet operator-(VarSet o) const { return VarSet{bits_ & ~o.bits_}; }

  friend constexpr bool operator==(VarSet, VarSet) = default;
  friend constexpr auto operator<=>(VarSet, VarSet) = default;

  /// Calls f(v) for every element, ascending.
  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  std::vector<int> elements() const;

  /// "{X1,X3}" using 1-based names; used in diagnostics only.
  std::string to_string() const;

 private:
  std::uint64_t bits_ = 0;
};

/// Position of a set inside its layer under colexicographic order.
struct LayerRank {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(LayerRank, LayerRank) = default;
};

/// Exact C(n, k); throws std::overflow_error when the result does not fit
/// in 64 bits. Returns 0 when k > n.
std::uint64_t binomial(int n, int k);

/// Number of size-l subsets of n variables.
std::uint64_t layer_size(int n, int l);

/// Combinadic rank: sum over the ascending elements c_i of C(c_i, i + 1).
LayerRank colex_rank(VarSet s);

/// Inverse of colex_rank within layer k of an n-variable lattice.
/// Throws std::out_of_range when r >= C(n, k).
VarSet colex_unrank(LayerRank r, int k, int n);

struct Successor {
  int added;
  VarSet set;
};

/// All (X, U + {X}) for X outside U, X ascending.
std::vector<Successor> successors(VarSet u, int n);

}  // namespace bnsl
