#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fences/fence.hpp"
#include "fences/ideals.hpp"
#include "fences/rational.hpp"

namespace fences {

struct NotAntichain : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A statistic J(F) -> Q, one exact value per position of an IdealIndex.
class StatFn {
 public:
  StatFn() = default;
  explicit StatFn(std::size_t size) : values_(size) {}
  explicit StatFn(std::vector<Rational> values) : values_(std::move(values)) {}

  static StatFn constant(std::size_t size, const Rational& c) { return StatFn(std::vector<Rational>(size, c)); }

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  Rational& operator[](std::size_t i) { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }

  StatFn& operator+=(const StatFn& other);
  StatFn& operator-=(const StatFn& other);
  StatFn& operator*=(const Rational& scale);
  /// this += scale * other
  StatFn& add_scaled(const Rational& scale, const StatFn& other);

  friend StatFn operator+(StatFn a, const StatFn& b) { return a += b; }
  friend StatFn operator-(StatFn a, const StatFn& b) { return a -= b; }
  friend StatFn operator*(const Rational& s, StatFn a) { return a *= s; }

  bool operator==(const StatFn&) const = default;

  /// Sum of the values over a set of positions.
  Rational sum_over(const std::vector<std::size_t>& positions) const;

 private:
  void check_size(const StatFn& other) const;
  std::vector<Rational> values_;
};

/// A set of pairwise incomparable elements, as a bit mask.
struct Antichain {
  std::uint64_t members = 0;

  bool empty() const { return members == 0; }
  std::vector<int> elements() const { return Ideal{members}.elements(); }
  auto operator<=>(const Antichain&) const = default;
};

std::string to_string(const Antichain& a);
bool is_antichain(const Fence& fence, std::uint64_t set);
/// Throws NotAntichain if two of the elements are comparable.
Antichain make_antichain(const Fence& fence, const std::vector<int>& elements);

/// Order ideal indicator of p. p == kAbsent gives the zero statistic.
StatFn chi_hat(const Fence& fence, const IdealIndex& index, int p);
/// Antichain indicator of p (p in max(I)). p == kAbsent gives zero.
StatFn chi(const Fence& fence, const IdealIndex& index, int p);
/// +1 if p can be toggled in, -1 if it can be toggled out, 0 otherwise.
StatFn togg(const Fence& fence, const IdealIndex& index, int p);
StatFn togg_plus(const Fence& fence, const IdealIndex& index, int p);
StatFn togg_minus(const Fence& fence, const IdealIndex& index, int p);

/// +1 if A is contained in min(F \ I), -1 if A is contained in max(I).
/// The empty antichain is rejected: both conditions hold vacuously.
StatFn togg_antichain(const Fence& fence, const IdealIndex& index, Antichain a);

/// Cardinality statistics #I and #max(I).
StatFn ideal_cardinality(const Fence& fence, const IdealIndex& index);
StatFn antichain_cardinality(const Fence& fence, const IdealIndex& index);

/// All antichains as max(I) over the ideals, sorted ascending by bit pattern.
std::vector<Antichain> enumerate_antichains(const Fence& fence, const IdealIndex& index);

/// Linear combination of ideal indicators, antichain indicators and
/// toggleability statistics plus a constant. Keys are element numbers.
struct StatExpr {
  std::map<int, Rational> ideal;
  std::map<int, Rational> antichain;
  std::map<int, Rational> toggle;
  Rational constant = 0;

  StatExpr& add_ideal(int p, const Rational& c);
  StatExpr& add_antichain(int p, const Rational& c);
  StatExpr& add_toggle(int p, const Rational& c);
  StatExpr& operator+=(const StatExpr& other);
  StatExpr& operator*=(const Rational& s);

  /// Drops zero coefficients.
  void prune();
  bool operator==(const StatExpr&) const = default;

  StatFn evaluate(const Fence& fence, const IdealIndex& index) const;
};

nlohmann::json to_json(const StatExpr& expr);
StatExpr stat_expr_from_json(const nlohmann::json& j);

/// chi_hat_p written in antichain indicators and toggleability statistics.
StatExpr dict_oic_to_ac(const Fence& fence, int p);
/// chi_p written in ideal indicators and toggleability statistics.
StatExpr dict_ac_to_oic(const Fence& fence, int p);

/// Rewrites every indicator of one kind through the dictionary, leaving the
/// other kind, toggles and the constant in place.
StatExpr rewrite_ideal_terms_as_antichain(const Fence& fence, const StatExpr& expr);
StatExpr rewrite_antichain_terms_as_ideal(const Fence& fence, const StatExpr& expr);

}  // namespace fences
