#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fences/rational.hpp"

namespace fences {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using RatVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);
  static RatMatrix from_columns(const std::vector<RatVector>& columns, std::size_t rows);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  RatMatrix transposed() const;
  RatVector multiply(std::span<const Rational> x) const;

  bool operator==(const RatMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form. Pivots are the first nonzero entry in column
/// order; `pivots` receives the pivot column of each nonzero row.
RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots = nullptr);

std::size_t rank(const RatMatrix& m);

/// One solution of m x = b with every free variable set to zero, or nullopt
/// when the system is inconsistent.
std::optional<RatVector> solve(const RatMatrix& m, std::span<const Rational> b);

/// Basis of { x : m x = 0 }, one vector per free column.
std::vector<RatVector> nullspace_basis(const RatMatrix& m);

/// dim(span U  intersect  span W) for two spanning sets of equal-length vectors,
/// as dim U + dim W - dim(U + W).
std::size_t subspace_intersection_dim(const std::vector<RatVector>& u, const std::vector<RatVector>& w);

/// Streaming rank of a growing row set. Rows are kept as primitive integer
/// vectors with 64-bit entries and eliminated fraction-free; on overflow the
/// basis is promoted to exact GMP rationals and elimination continues there.
class IncrementalRank {
 public:
  explicit IncrementalRank(std::size_t cols) : cols_(cols) {}

  /// Adds a row; returns true if it increased the rank.
  bool add(std::span<const Rational> row);
  bool add(std::span<const std::int64_t> row);

  std::size_t rank() const { return small_mode_ ? small_.size() : big_.size(); }
  std::size_t cols() const { return cols_; }
  bool promoted() const { return !small_mode_; }

 private:
  struct SmallRow {
    std::vector<std::int64_t> v;
    std::size_t pivot;
  };
  struct BigRow {
    RatVector v;
    std::size_t pivot;
  };

  bool add_small(std::vector<std::int64_t> row);
  bool add_big(RatVector row);
  void promote();

  std::size_t cols_;
  bool small_mode_ = true;
  std::vector<SmallRow> small_;
  std::vector<BigRow> big_;
};

}  // namespace fences
