#include "doctest.h"

#include <random>

#include "fences/linalg.hpp"

using namespace fences;

namespace {

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int spread, bool fractions) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const long num = static_cast<long>(rng() % (2 * spread + 1)) - spread;
      const long den = fractions ? static_cast<long>(rng() % 5 + 1) : 1;
      m(i, j) = Rational(num) / den;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("rank is transpose invariant and solve is exact") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = rng() % 7 + 1, c = rng() % 7 + 1;
    RatMatrix m = random_matrix(rng, r, c, trial % 2 ? 2 : 9, trial % 3 == 0);
    if (trial % 4 == 0 && r > 1) {
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 3;  // force a dependency
    }
    CHECK(rank(m) == rank(m.transposed()));
    RatVector b(r);
    for (auto& x : b) x = Rational(static_cast<long>(rng() % 7) - 3);
    if (auto x = solve(m, b)) CHECK(m.multiply(*x) == b);
    const auto null = nullspace_basis(m);
    CHECK(null.size() == c - rank(m));
    for (const auto& v : null) CHECK(m.multiply(v) == RatVector(r));
  }
}

TEST_CASE("inconsistent systems and dimension errors") {
  RatMatrix m(2, 2);
  m(0, 0) = 1;
  m(1, 0) = 1;
  const RatVector b{1, 2};
  CHECK_FALSE(solve(m, b).has_value());
  const RatVector wrong{1, 2, 3};
  CHECK_THROWS_AS(solve(m, wrong), DimensionMismatch);
  CHECK(rref(RatMatrix::identity(3)) == RatMatrix::identity(3));
}

TEST_CASE("intersection dimension against a nullspace oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t len = rng() % 6 + 2;
    auto vectors = [&](std::size_t k) {
      std::vector<RatVector> out;
      for (std::size_t i = 0; i < k; ++i) {
        RatVector v(len);
        for (auto& x : v) x = Rational(static_cast<long>(rng() % 5) - 2);
        out.push_back(v);
      }
      return out;
    };
    const auto u = vectors(rng() % 4 + 1), w = vectors(rng() % 4 + 1);
    // null([U | W]) has dimension dim(U meet W) + null(U) + null(W)
    std::vector<RatVector> both = u;
    both.insert(both.end(), w.begin(), w.end());
    const auto nu = nullspace_basis(RatMatrix::from_columns(u, len)).size();
    const auto nw = nullspace_basis(RatMatrix::from_columns(w, len)).size();
    const auto nuw = nullspace_basis(RatMatrix::from_columns(both, len)).size();
    CHECK(subspace_intersection_dim(u, w) == nuw - nu - nw);
  }
}

TEST_CASE("incremental rank matches batch rank, including after promotion") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cols = rng() % 8 + 2;
    IncrementalRank inc(cols);
    std::vector<RatVector> rows;
    for (int k = 0; k < 10; ++k) {
      std::vector<std::int64_t> row(cols);
      for (auto& x : row) {
        x = static_cast<std::int64_t>(rng() % 2001) - 1000;
        if (trial % 3 == 0) x *= 1000003LL * 1000003LL;  // pushes fraction-free elimination past 64 bits
      }
      inc.add(row);
      rows.emplace_back(row.begin(), row.end());
      CHECK(inc.rank() == rank(RatMatrix::from_rows(rows, cols)));
    }
  }
  IncrementalRank big(2);
  const std::int64_t huge = std::int64_t{1} << 62;
  const std::vector<std::int64_t> a{huge, 3}, b{3, huge};
  big.add(a);
  big.add(b);
  CHECK(big.rank() == 2);
  CHECK(big.promoted());
}
