#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fences {

/// Placeholder element number for elements that do not exist in a fence
/// (s_0, s_t, unshared ranks beyond beta_i). Statistics indexed by it are zero.
constexpr int kAbsent = 0;

/// Widest fence whose ideals fit a machine word.
constexpr int kMaxMaskSize = 64;

struct ShapeInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct TooLarge : std::length_error {
  using std::length_error::length_error;
};

/// The composition (a_1, ..., a_t) that defines a fence.
class FenceShape {
 public:
  /// Requires t >= 2, a_1, a_t >= 2 and every a_i >= 1.
  explicit FenceShape(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int segments() const { return static_cast<int>(parts_.size()); }
  int part(int i) const { return parts_.at(static_cast<std::size_t>(i - 1)); }
  /// Number of elements, a_1 + ... + a_t - 1.
  int size() const;
  bool palindromic() const;

  /// Canonical text form "F(a1,a2,...,at)".
  std::string to_string() const;

  auto operator<=>(const FenceShape&) const = default;

 private:
  std::vector<int> parts_;
};

/// Accepts "F(3,3,2)" with optional whitespace, or the bare list "3,3,2".
FenceShape parse_fence(std::string_view text);

/// Every shape with the given number of segments and at most max_n elements,
/// in lexicographic order of the parts.
std::vector<FenceShape> shapes_with_segments(int t, int max_n);

/// Every shape (all t) with at most max_n elements, ordered by (n, t, parts).
std::vector<FenceShape> shapes_up_to(int max_n);

enum class ElementKind { Peak, Valley, Unshared };

/// Peak/Valley carry the index i of the shared element s_i in `segment`
/// and rank 0. Unshared carries the segment i and its rank j in poset order.
struct ElementClass {
  ElementKind kind;
  int segment;
  int rank;

  bool operator==(const ElementClass&) const = default;
};

/// An order-reversing bijection on the elements, stored as 1-based images.
struct Involution {
  std::vector<int> perm;  // perm[k - 1] is the image of x_k

  int operator()(int k) const { return perm.at(static_cast<std::size_t>(k - 1)); }
};

/// The fence poset. Elements are x_1..x_n, numbered along the zigzag.
/// Immutable after construction.
class Fence {
 public:
  explicit Fence(FenceShape shape);

  const FenceShape& shape() const { return shape_; }
  int size() const { return n_; }
  int segments() const { return shape_.segments(); }
  std::string to_string() const { return shape_.to_string(); }

  /// Cover relations as (lower, upper) pairs, ordered by the lower index of
  /// the consecutive pair they join.
  const std::vector<std::pair<int, int>>& covers() const { return covers_; }
  bool covered_by(int low, int high) const;
  bool less_equal(int a, int b) const;

  ElementClass element_class(int k) const;
  bool is_shared(int k) const;

  /// Position of s_i; kAbsent for i outside [1, t-1].
  int shared(int i) const;
  /// Position of s_(i,j), the j-th minimal unshared element of S_i; kAbsent if
  /// it does not exist.
  int unshared(int i, int j) const;
  /// Unshared elements of S_i, minimal first.
  std::vector<int> unshared_in(int segment) const;
  int peak_of(int segment) const;
  int valley_of(int segment) const;
  /// Elements of S_i in zigzag order.
  std::vector<int> segment_elements(int segment) const;
  bool ascending(int segment) const { return segment % 2 == 1; }

  const std::vector<int>& lower_covers(int k) const { return lower_.at(index(k)); }
  const std::vector<int>& upper_covers(int k) const { return upper_.at(index(k)); }

  /// Column in the rotated drawing: steps up a cover move one column right.
  int column(int k) const { return columns_.at(index(k)); }
  int column_count() const { return column_count_; }

  /// Length of the longest chain ending at k (0 for minimal elements).
  int height(int k) const { return heights_.at(index(k)); }
  /// Elements sorted by height, ties by index; a linear extension.
  const std::vector<int>& linear_extension() const { return extension_; }

  // Bit masks (bit k-1 is x_k). Only available when size() <= kMaxMaskSize.
  bool has_masks() const { return n_ <= kMaxMaskSize; }
  std::uint64_t full_mask() const { return full_mask_; }
  std::uint64_t lower_mask(int k) const { return lower_mask_.at(index(k)); }
  std::uint64_t upper_mask(int k) const { return upper_mask_.at(index(k)); }
  /// Principal ideal generated by x_k (includes x_k).
  std::uint64_t down_mask(int k) const { return down_mask_.at(index(k)); }
  /// Principal filter generated by x_k (includes x_k).
  std::uint64_t up_mask(int k) const { return up_mask_.at(index(k)); }
  std::uint64_t column_mask(int c) const { return column_masks_.at(static_cast<std::size_t>(c)); }

  void require_masks() const;
  void check_element(int k) const;

 private:
  std::size_t index(int k) const;

  FenceShape shape_;
  int n_;
  std::vector<int> shared_;  // shared_[i - 1] = position of s_i
  std::vector<std::pair<int, int>> covers_;
  std::vector<std::vector<int>> lower_;
  std::vector<std::vector<int>> upper_;
  std::vector<ElementClass> classes_;
  std::vector<int> columns_;
  int column_count_ = 0;
  std::vector<int> heights_;
  std::vector<int> extension_;
  std::uint64_t full_mask_ = 0;
  std::vector<std::uint64_t> lower_mask_, upper_mask_, down_mask_, up_mask_, column_masks_;
};

Fence build_fence(const FenceShape& shape);

/// The index reversal k -> n+1-k, returned only when it is an order-reversing
/// involution of F (palindromic shape with an odd number of segments).
std::optional<Involution> self_dual_involution(const Fence& fence);

inline constexpr std::uint64_t bit(int k) { return std::uint64_t{1} << (k - 1); }

}  // namespace fences
