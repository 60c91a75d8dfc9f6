#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fences/fence.hpp"
#include "fences/ideals.hpp"
#include "fences/rational.hpp"
#include "fences/statistics.hpp"

namespace fences {

/// Image of a subset under the involution.
std::uint64_t apply_involution(const Involution& kappa, std::uint64_t set);

/// kappa(F \ I).
Ideal ideal_complement(const Fence& fence, const Involution& kappa, Ideal ideal);
/// The ideal generated by kappa(max I).
Ideal prime_map(const Fence& fence, const Involution& kappa, Ideal ideal);

/// Orbits of the group generated by rowmotion and the prime map. Each orbit is
/// a sorted list of ideal positions, ordered by smallest member.
OrbitDecomposition dihedral_orbits(const Fence& fence, const IdealIndex& index, const Involution& kappa);

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::string witness;  // first failure, empty on success

  void record(bool ok, const std::string& what);
};

nlohmann::json to_json(const SuiteResult& s);

/// Complement and prime involutions, the prime/rowmotion conjugation, both
/// paired-orbit statements, the union-of-at-most-two structure of
/// dihedral orbits and the vanishing of chi_l - chi_kappa(l) on them.
std::vector<SuiteResult> verify_self_dual_suite(const Fence& fence);

enum class Conjecture { C5_1, C5_2, C5_3, C7_2 };

std::string to_string(Conjecture c);
Conjecture parse_conjecture(std::string_view text);

struct StatVerdict {
  std::string statistic;
  Rational target = 0;
  bool holds = true;
  std::optional<std::size_t> witness_orbit;
  std::optional<std::size_t> witness_orbit_size;
  std::optional<Rational> witness_average;
};

struct ConjectureReport {
  Conjecture conjecture = Conjecture::C5_1;
  FenceShape fence;
  std::size_t orbits = 0;
  bool holds = true;
  std::vector<StatVerdict> verdicts;
  std::optional<std::size_t> codimension;  // dim_IH - dim_IT, only for C7_2
};

nlohmann::json to_json(const ConjectureReport& r);

/// F(a^t) with t odd, t >= 3, a >= 2 and a + t <= max_apt, ordered by (a+t, t).
std::vector<FenceShape> equal_part_odd_shapes(int max_apt);

ConjectureReport check_conjecture(Conjecture id, const Fence& fence);

struct ScanRange {
  int max_apt = 8;   // C5_*
  int t = 3;         // C7_2
  int max_n = 14;    // C7_2
  unsigned workers = 1;
};

std::vector<ConjectureReport> scan_conjecture(Conjecture id, const ScanRange& range);

/// Multiset of dim_IH - dim_IT over the reports.
std::map<std::size_t, std::size_t> codimension_counts(const std::vector<ConjectureReport>& reports);

struct SufficiencyReport {
  FenceShape fence;
  bool shared_diffs = false;       // chi_{s_i} - chi_{s_{t-i}} all 0-mesic
  bool shared_sums = false;        // chi_hat_{s_i} + chi_hat_{s_{t-i}} all 1-mesic
  bool opposite_diffs = false;     // chi_k - chi_{n+1-k} all 0-mesic
  bool opposite_sums = false;      // chi_hat_k + chi_hat_{n+1-k} all 1-mesic

  /// shared diffs or shared sums imply both opposite families, and the two
  /// opposite families agree.
  bool consistent() const;
};

nlohmann::json to_json(const SufficiencyReport& r);

/// Requires a palindromic shape with an odd number of segments.
SufficiencyReport verify_sufficiency(const Fence& fence);

}  // namespace fences
