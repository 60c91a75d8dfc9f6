#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fences/fence.hpp"
#include "fences/ideals.hpp"
#include "fences/statistics.hpp"

namespace fences {

struct CertificateMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

/// f = constant + sum_p coeff_p T_p, holding on every ideal.
struct EquivCertificate {
  Rational constant = 0;
  std::map<int, Rational> toggle_coeffs;

  StatExpr as_expr() const;
  bool holds_for(const Fence& fence, const IdealIndex& index, const StatFn& f) const;
  bool operator==(const EquivCertificate&) const = default;
};

nlohmann::json to_json(const EquivCertificate& cert);

/// Exact solve for f in span{1, T_1, ..., T_n}; nullopt when f is outside it.
std::optional<EquivCertificate> equiv_const_solve(const Fence& fence, const IdealIndex& index, const StatFn& f);

struct BasisEntry {
  int element = kAbsent;  // the unshared element the entry is attached to
  StatExpr stat;
  EquivCertificate cert;
};

/// One antichain-indicator combination per unshared element, each paired with
/// its closed-form toggle certificate. Throws CertificateMismatch if any
/// certificate fails on some ideal.
std::vector<BasisEntry> basis_ba(const Fence& fence, const IdealIndex& index);
/// Same for the order ideal indicators.
std::vector<BasisEntry> basis_bi(const Fence& fence, const IdealIndex& index);

/// Closed forms without the componentwise check.
BasisEntry antichain_basis_entry(const Fence& fence, int segment, int j);
BasisEntry ideal_basis_entry(const Fence& fence, int segment, int j);

enum class IndicatorKind { Ideal, Antichain };

/// dim(span{indicators} meet (span{T_p} + span{1})), by exact rank.
std::size_t toggle_space_dim(const Fence& fence, const IdealIndex& index, IndicatorKind kind);
/// Dimension of the coefficient vectors whose indicator combination has the
/// same average on every orbit.
std::size_t homomesy_space_dim(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                               IndicatorKind kind);

struct SpaceReport {
  FenceShape shape;
  int n = 0;
  int t = 0;
  std::size_t ideals = 0;
  std::size_t orbits = 0;
  std::size_t dim_it = 0;
  std::size_t dim_at = 0;
  std::size_t dim_ih = 0;
  std::size_t dim_ah = 0;
  std::size_t formula = 0;  // n - (t - 1)
  bool basis_ba_verified = false;
  bool basis_bi_verified = false;

  bool single_orbit() const { return orbits == 1; }
  bool ih_equals_it() const { return dim_ih == dim_it; }
  bool operator==(const SpaceReport&) const = default;
};

nlohmann::json to_json(const SpaceReport& r);
SpaceReport space_report_from_json(const nlohmann::json& j);

struct SpaceOptions {
  bool antichain_dims = true;  // dim_AT and dim_AH
  bool verify_bases = false;
};

SpaceReport space_dims(const Fence& fence, const SpaceOptions& options = {});
SpaceReport space_dims(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                       const SpaceOptions& options = {});

/// Exact average of f over each orbit, in orbit id order.
std::vector<Rational> orbit_averages(const StatFn& f, const OrbitDecomposition& orbits);
/// The common average if f is homomesic.
std::optional<Rational> homomesy_constant(const StatFn& f, const OrbitDecomposition& orbits);

using AntichainCombination = std::map<Antichain, Rational>;

StatFn evaluate(const Fence& fence, const IdealIndex& index, const AntichainCombination& combo);

struct AntichainExpression {
  Rational constant = 0;
  AntichainCombination coeffs;  // one valid expression; the T_A are dependent
};

/// Solves f - c in span{T_A : A nonempty}, nullopt if impossible.
std::optional<AntichainExpression> express_in_antichain_toggle_span(const Fence& fence, const IdealIndex& index,
                                                                    const StatFn& f);
/// Rank of {T_A : A nonempty antichain}.
std::size_t antichain_toggle_rank(const Fence& fence, const IdealIndex& index);

/// The explicit combination of antichain toggles equal to chi_a - chi_2a on F(a,a,a).
AntichainCombination three_segment_peak_valley_identity(const Fence& fence, int a);

struct IdentityCheck {
  bool holds = false;
  std::size_t terms = 0;
  std::optional<Ideal> witness;  // first ideal where the sides differ
};

IdentityCheck verify_three_segment_peak_valley_identity(int a);

/// Certificate for chi_hat - a(sum chi_peaks - sum chi_valleys) on F(a^t), t odd.
/// Throws std::logic_error if the statistic is outside the span or the
/// constant differs from n/2.
EquivCertificate peak_valley_cardinality_certificate(int a, int t);

}  // namespace fences
