#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fences/fence.hpp"
#include "fences/ideals.hpp"
#include "fences/rational.hpp"
#include "fences/statistics.hpp"

namespace fences {

enum class Realm { PiecewiseLinear, Birational };

std::string to_string(Realm realm);
/// Accepts "pl", "piecewise-linear", "b", "birational".
Realm parse_realm(std::string_view text);

struct NonIntegerExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StepCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an exact label outgrows the bit budget. Exact birational
/// labels on fences with infinite-order rowmotion grow geometrically in height.
struct LabelSizeExceeded : StepCapExceeded {
  using StepCapExceeded::StepCapExceeded;
};

inline constexpr std::size_t kDefaultExactStepCap = 200;
inline constexpr std::size_t kDefaultExactBitCap = std::size_t{1} << 20;

/// Limits for exact birational iteration. max_label_bits bounds the
/// numerator plus denominator size of every label.
struct ExactLimits {
  std::size_t step_cap = kDefaultExactStepCap;
  std::size_t max_label_bits = kDefaultExactBitCap;
};


/// Labels of the elements 1..n plus the fixed values at the bottom and top
/// of the bounded poset. Birational labelings are strictly positive.
template <typename T>
struct Labeling {
  Realm realm = Realm::PiecewiseLinear;
  std::vector<T> values;
  T alpha{};
  T omega{};

  const T& operator()(int p) const { return values.at(static_cast<std::size_t>(p - 1)); }
  T& operator()(int p) { return values.at(static_cast<std::size_t>(p - 1)); }
  bool operator==(const Labeling&) const = default;
};

using ExactLabeling = Labeling<Rational>;
using FloatLabeling = Labeling<long double>;

/// Largest numerator-plus-denominator bit size among the labels.
std::size_t label_bits(const ExactLabeling& pi);

/// Default bottom/top values: 0 and 1 for PL, 1 and 2 for birational.
std::pair<Rational, Rational> default_boundary(Realm realm);

/// Validates the length and, for the birational realm, positivity.
ExactLabeling make_labeling(const Fence& fence, Realm realm, std::vector<Rational> values, Rational alpha,
                            Rational omega);
/// PL labeling equal to 1 off the ideal and 0 on it, with bottom 0 and top 1.
ExactLabeling indicator_labeling(const Fence& fence, Ideal ideal);
/// Labels m/k with m, k uniform in [1, 20], from a seeded mt19937_64.
ExactLabeling random_labeling(const Fence& fence, Realm realm, std::uint64_t seed,
                              std::optional<Rational> alpha = std::nullopt, std::optional<Rational> omega = std::nullopt);
FloatLabeling to_float(const ExactLabeling& pi);

template <typename T>
Labeling<T> pl_toggle(const Fence& fence, Labeling<T> pi, int p);
template <typename T>
Labeling<T> b_toggle(const Fence& fence, Labeling<T> pi, int p);
/// Dispatches on the labeling's realm.
template <typename T>
Labeling<T> lifted_toggle(const Fence& fence, Labeling<T> pi, int p);

/// Toggles from the top of the fixed linear extension down, like
/// combinatorial rowmotion.
template <typename T>
Labeling<T> pl_rowmotion(const Fence& fence, Labeling<T> pi);
template <typename T>
Labeling<T> b_rowmotion(const Fence& fence, Labeling<T> pi);
template <typename T>
Labeling<T> lifted_rowmotion(const Fence& fence, Labeling<T> pi);

/// Sum of pi(p)/pi(r) over the covers p < r of the bounded poset.
template <typename T>
T gamma(const Fence& fence, const Labeling<T>& pi);

enum class ToggleSign { Plus, Minus, Net };

/// Lifted toggleability: differences in PL, ratios in the birational realm.
template <typename T>
T togg_lift(const Fence& fence, const Labeling<T>& pi, int p, ToggleSign sign);

template <typename T>
T lifted_chi_hat(const Fence& fence, const Labeling<T>& pi, int p);
template <typename T>
T lifted_chi(const Fence& fence, const Labeling<T>& pi, int p);

/// A statistic evaluated on labelings: either a lifted toggleability
/// statistic or the lift of an indicator combination.
class LiftedStat {
 public:
  static LiftedStat toggle(int p);
  /// Rejects toggle terms and constants; the birational lift also rejects
  /// non-integer coefficients with NonIntegerExponent.
  static LiftedStat from_expr(const StatExpr& expr, Realm realm);

  /// PL value.
  Rational pl(const Fence& fence, const ExactLabeling& pi) const;
  long double pl(const Fence& fence, const FloatLabeling& pi) const;
  /// Birational value, exactly.
  Rational b(const Fence& fence, const ExactLabeling& pi) const;
  /// Natural log of the birational value.
  long double b_log(const Fence& fence, const FloatLabeling& pi) const;

  const std::string& name() const { return name_; }

 private:
  int toggle_ = kAbsent;
  StatExpr expr_;
  std::string name_;
};

/// Iterates exact rowmotion. Birational runs past the step cap throw
/// StepCapExceeded, and labels past the bit budget throw LabelSizeExceeded.
std::vector<ExactLabeling> exact_trace(const Fence& fence, const ExactLabeling& start, std::size_t steps,
                                       ExactLimits limits = {});

struct OrderResult {
  std::optional<std::size_t> order;  // smallest N with rho^N(pi) = pi
  std::size_t searched = 0;
};

/// One exact rowmotion step, numbered `step` for the limit checks.
ExactLabeling exact_rowmotion_step(const Fence& fence, const ExactLabeling& pi, std::size_t step,
                                   ExactLimits limits = {});

OrderResult detect_finite_order(const Fence& fence, const ExactLabeling& start, std::size_t max_iter,
                                ExactLimits limits = {});

/// Exact birational identities along one trace: gamma agrees with its
/// starting value at every step up to gamma_steps, T+ at step i equals T-
/// at step i+1, and the product of T_p over the first telescoping_n states
/// equals T+ at the last one over T- at the first.
struct BSuiteReport {
  std::size_t gamma_steps = 0;
  std::size_t telescoping_n = 0;
  std::size_t steps_completed = 0;
  std::size_t checks = 0;
  bool gamma_ok = true;
  bool adjacency_ok = true;
  bool telescoping_ok = true;
  std::optional<std::string> incomplete;  // why the trace stopped early
  std::string witness;

  bool passed() const { return !incomplete && gamma_ok && adjacency_ok && telescoping_ok; }
};

BSuiteReport exact_b_suite(const Fence& fence, const ExactLabeling& start, std::size_t gamma_steps,
                           std::size_t telescoping_n, ExactLimits limits = {});

/// PL mirror: the sum of T_p^PL over the first n states equals T+ at the
/// last state minus T- at the first, for every p; also checks adjacency.
BSuiteReport exact_pl_telescoping(const Fence& fence, const ExactLabeling& start, std::size_t n);

/// The same identities evaluated on the images of the labels in Z/p. The
/// reduction is a ring map on the rationals whose denominators avoid p, so a
/// mismatch here proves a mismatch over the rationals; agreement is evidence
/// only. Used where exact labels outgrow the bit budget.
struct ResidueReport {
  std::uint64_t prime = 0;
  BSuiteReport suite;
};

inline constexpr std::uint64_t kResiduePrimes[] = {2305843009213693951ULL, 4611686018427387847ULL,
                                                   9223372036854775783ULL};

std::vector<ResidueReport> residue_b_suite(const Fence& fence, const ExactLabeling& start, std::size_t gamma_steps,
                                           std::size_t telescoping_n);

nlohmann::json to_json(const BSuiteReport& r);

struct CesaroEstimate {
  Realm realm = Realm::PiecewiseLinear;
  std::size_t steps = 0;
  long double mean = 0;              // arithmetic (PL) or geometric (birational)
  std::vector<long double> running;  // mean after 1..steps terms
};

/// PL labelings are iterated and summed exactly; birational ones in long
/// double with logs accumulated.
CesaroEstimate cesaro_homomesy_estimate(const Fence& fence, const LiftedStat& stat, const ExactLabeling& start,
                                        std::size_t steps);

struct BoundednessReport {
  long double observed_min = 0;
  long double observed_max = 0;
  long double lower_bound = 0;
  long double upper_bound = 0;
  bool within = true;
};

/// Compares every label along a birational trace with the bounds obtained by
/// chaining pi(p) <= gamma * pi(r) over covers up to the top (and down to the
/// bottom). The chain length used is the longest one from an element to the
/// added top or bottom.
BoundednessReport boundedness_monitor(const Fence& fence, const ExactLabeling& start, std::size_t steps);

nlohmann::json trace_line(std::size_t step, const ExactLabeling& pi);
nlohmann::json to_json(const CesaroEstimate& e, bool with_running = false);

}  // namespace fences
