#include "fences/linalg.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

namespace fences {

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw DimensionMismatch("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                              " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVector>& columns, std::size_t rows) {
  RatMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) {
      throw DimensionMismatch("column " + std::to_string(c) + " has " + std::to_string(columns[c].size()) +
                              " entries, expected " + std::to_string(rows));
    }
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::transposed() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatVector RatMatrix::multiply(std::span<const Rational> x) const {
  if (x.size() != cols_) throw DimensionMismatch("vector length does not match column count");
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn((*this)(r, c)) != 0 && sgn(x[c]) != 0) acc += (*this)(r, c) * x[c];
    }
    out[r] = acc;
  }
  return out;
}

RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots) {
  if (pivots) pivots->clear();
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t r = lead;
    while (r < m.rows() && sgn(m(r, c)) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != lead) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(r, k), m(lead, k));
    }
    const Rational inv = 1 / m(lead, c);
    for (std::size_t k = c; k < m.cols(); ++k) {
      if (sgn(m(lead, k)) != 0) m(lead, k) *= inv;
    }
    for (std::size_t other = 0; other < m.rows(); ++other) {
      if (other == lead || sgn(m(other, c)) == 0) continue;
      const Rational factor = m(other, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (sgn(m(lead, k)) != 0) m(other, k) -= factor * m(lead, k);
      }
    }
    if (pivots) pivots->push_back(c);
    ++lead;
  }
  return m;
}

std::size_t rank(const RatMatrix& m) {
  IncrementalRank acc(m.cols());
  for (std::size_t r = 0; r < m.rows() && acc.rank() < m.cols(); ++r) acc.add(m.row(r));
  return acc.rank();
}

std::optional<RatVector> solve(const RatMatrix& m, std::span<const Rational> b) {
  if (b.size() != m.rows()) {
    throw DimensionMismatch("right-hand side has " + std::to_string(b.size()) + " entries, matrix has " +
                            std::to_string(m.rows()) + " rows");
  }
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  std::vector<std::size_t> pivots;
  const RatMatrix red = rref(std::move(aug), &pivots);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  RatVector x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = red(r, m.cols());
  return x;
}

std::vector<RatVector> nullspace_basis(const RatMatrix& m) {
  std::vector<std::size_t> pivots;
  const RatMatrix red = rref(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector x(m.cols());
    x[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -red(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t subspace_intersection_dim(const std::vector<RatVector>& u, const std::vector<RatVector>& w) {
  const std::size_t len = !u.empty() ? u.front().size() : (!w.empty() ? w.front().size() : 0);
  for (const auto* set : {&u, &w}) {
    for (const auto& v : *set) {
      if (v.size() != len) throw DimensionMismatch("subspace generators have different lengths");
    }
  }
  IncrementalRank ru(len), rw(len), sum(len);
  for (const auto& v : u) {
    ru.add(v);
    sum.add(v);
  }
  for (const auto& v : w) {
    rw.add(v);
    sum.add(v);
  }
  return ru.rank() + rw.rank() - sum.rank();
}

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw Overflow{};
  return out;
}

std::int64_t abs64(std::int64_t a) {
  if (a == INT64_MIN) throw Overflow{};
  return a < 0 ? -a : a;
}

void make_primitive(std::vector<std::int64_t>& v) {
  std::int64_t g = 0;
  for (auto x : v) {
    if (x != 0) g = std::gcd(g, abs64(x));
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

std::optional<std::vector<std::int64_t>> to_integer_row(std::span<const Rational> row) {
  mpz_class scale = 1;
  for (const auto& q : row) {
    if (q.get_den() != 1) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den_mpz_t());
  }
  std::vector<std::int64_t> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (sgn(row[i]) == 0) continue;
    mpz_class v = row[i].get_num() * (scale / row[i].get_den());
    if (!v.fits_slong_p()) return std::nullopt;
    out[i] = v.get_si();
  }
  return out;
}

}  // namespace

bool IncrementalRank::add(std::span<const Rational> row) {
  if (row.size() != cols_) throw DimensionMismatch("row length does not match column count");
  if (small_mode_) {
    if (auto ints = to_integer_row(row)) {
      try {
        return add_small(std::move(*ints));
      } catch (const Overflow&) {
        promote();
      }
    } else {
      promote();
    }
  }
  return add_big(RatVector(row.begin(), row.end()));
}

bool IncrementalRank::add(std::span<const std::int64_t> row) {
  if (row.size() != cols_) throw DimensionMismatch("row length does not match column count");
  if (small_mode_) {
    try {
      return add_small(std::vector<std::int64_t>(row.begin(), row.end()));
    } catch (const Overflow&) {
      promote();
    }
  }
  RatVector big(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) big[i] = Rational(static_cast<long>(row[i]));
  return add_big(std::move(big));
}

bool IncrementalRank::add_small(std::vector<std::int64_t> row) {
  for (const auto& b : small_) {
    const std::int64_t x = row[b.pivot];
    if (x == 0) continue;
    const std::int64_t g = std::gcd(abs64(x), abs64(b.v[b.pivot]));
    const std::int64_t mb = b.v[b.pivot] / g;
    const std::int64_t mr = x / g;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (row[c] == 0 && b.v[c] == 0) continue;
      row[c] = checked_sub(checked_mul(mb, row[c]), checked_mul(mr, b.v[c]));
    }
    make_primitive(row);
  }
  std::size_t pivot = 0;
  while (pivot < cols_ && row[pivot] == 0) ++pivot;
  if (pivot == cols_) return false;
  if (row[pivot] < 0) {
    for (auto& x : row) x = -x;
  }
  small_.push_back({std::move(row), pivot});
  return true;
}

bool IncrementalRank::add_big(RatVector row) {
  for (const auto& b : big_) {
    if (sgn(row[b.pivot]) == 0) continue;
    const Rational factor = row[b.pivot];
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn(b.v[c]) != 0) row[c] -= factor * b.v[c];
    }
  }
  std::size_t pivot = 0;
  while (pivot < cols_ && sgn(row[pivot]) == 0) ++pivot;
  if (pivot == cols_) return false;
  const Rational inv = 1 / row[pivot];
  for (auto& x : row) {
    if (sgn(x) != 0) x *= inv;
  }
  big_.push_back({std::move(row), pivot});
  return true;
}

void IncrementalRank::promote() {
  if (!small_mode_) return;
  // basis rows keep their insertion order, so the elimination invariant
  // (each row vanishes at the pivots of earlier rows) carries over
  for (const auto& s : small_) {
    RatVector v(s.v.size());
    for (std::size_t c = 0; c < s.v.size(); ++c) v[c] = Rational(static_cast<long>(s.v[c]));
    const Rational inv = 1 / v[s.pivot];
    for (auto& x : v) x *= inv;
    big_.push_back({std::move(v), s.pivot});
  }
  small_.clear();
  small_mode_ = false;
}

}  // namespace fences
