#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fences/fence.hpp"

namespace fences {

struct NotAnIdeal : std::logic_error {
  using std::logic_error::logic_error;
};

/// A subset of the elements, bit k-1 standing for x_k.
struct Ideal {
  std::uint64_t bits = 0;

  bool contains(int k) const { return (bits >> (k - 1)) & 1U; }
  int size() const { return std::popcount(bits); }
  std::vector<int> elements() const;

  auto operator<=>(const Ideal&) const = default;
};

/// "{1,5,6}"; the empty ideal prints as "{}".
std::string to_string(const Ideal& ideal);

/// Parses "{1,5,6}" and checks that the set is an order ideal of F.
Ideal parse_ideal(const Fence& fence, std::string_view text);

bool is_ideal(const Fence& fence, std::uint64_t set);
std::uint64_t max_elements(const Fence& fence, Ideal ideal);
/// min(P \ I): elements that can be toggled in.
std::uint64_t min_of_complement(const Fence& fence, Ideal ideal);
/// The ideal generated by a set of elements.
Ideal generated_ideal(const Fence& fence, std::uint64_t set);

/// All ideals of a fence, sorted ascending as unsigned bit patterns.
class IdealIndex {
 public:
  IdealIndex() = default;
  explicit IdealIndex(std::vector<Ideal> sorted) : ideals_(std::move(sorted)) {}

  std::size_t size() const { return ideals_.size(); }
  const Ideal& operator[](std::size_t i) const { return ideals_[i]; }
  const std::vector<Ideal>& ideals() const { return ideals_; }
  auto begin() const { return ideals_.begin(); }
  auto end() const { return ideals_.end(); }

  std::optional<std::size_t> find(Ideal ideal) const;
  /// Throws NotAnIdeal if the set is not in the index.
  std::size_t position(Ideal ideal) const;

 private:
  std::vector<Ideal> ideals_;
};

IdealIndex enumerate_ideals(const Fence& fence);

Ideal toggle(const Fence& fence, Ideal ideal, int p);

/// Ideal generated by the minimal elements of the complement.
Ideal rowmotion(const Fence& fence, Ideal ideal);
/// Rowmotion as the toggle sweep down the fixed linear extension.
Ideal rowmotion_by_toggles(const Fence& fence, Ideal ideal);
Ideal rowmotion_inverse(const Fence& fence, Ideal ideal);

/// Toggles x_1 first and x_n last.
Ideal promotion(const Fence& fence, Ideal ideal);

/// Union over columns j of (column j) intersected with rho^j(I).
/// Throws NotAnIdeal if the assembled set is not downward closed.
Ideal recombination(const Fence& fence, Ideal ideal);

enum class DynamicsMap { Rowmotion, Promotion };

std::string to_string(DynamicsMap map);
DynamicsMap parse_dynamics_map(std::string_view text);

Ideal apply(const Fence& fence, DynamicsMap map, Ideal ideal);

/// The map as a permutation of ideal positions.
std::vector<std::size_t> position_permutation(const Fence& fence, const IdealIndex& index, DynamicsMap map);

/// Partition of ideal positions into cycles. Orbit ids are assigned in order
/// of the smallest ideal of each orbit, and every orbit starts at that ideal.
struct OrbitDecomposition {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> orbit_of;

  std::size_t count() const { return orbits.size(); }
  std::vector<std::size_t> sizes() const;
};

OrbitDecomposition orbit_decomposition(const Fence& fence, const IdealIndex& index, DynamicsMap map);
OrbitDecomposition cycles_of(const std::vector<std::size_t>& permutation);

/// The cycle of `start` under the map, beginning at `start`.
std::vector<Ideal> orbit_through(const Fence& fence, Ideal start, DynamicsMap map);

}  // namespace fences
