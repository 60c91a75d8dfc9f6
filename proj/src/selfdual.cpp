#include "fences/selfdual.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

#include "fences/parallel.hpp"
#include "fences/toggle_spaces.hpp"

namespace fences {

std::uint64_t apply_involution(const Involution& kappa, std::uint64_t set) {
  std::uint64_t out = 0;
  for (std::uint64_t b = set; b != 0; b &= b - 1) out |= bit(kappa(std::countr_zero(b) + 1));
  return out;
}

Ideal ideal_complement(const Fence& fence, const Involution& kappa, Ideal ideal) {
  return Ideal{apply_involution(kappa, fence.full_mask() & ~ideal.bits)};
}

Ideal prime_map(const Fence& fence, const Involution& kappa, Ideal ideal) {
  return generated_ideal(fence, apply_involution(kappa, max_elements(fence, ideal)));
}

OrbitDecomposition dihedral_orbits(const Fence& fence, const IdealIndex& index, const Involution& kappa) {
  std::vector<std::size_t> parent(index.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto join = [&](std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t i = 0; i < index.size(); ++i) {
    join(i, index.position(rowmotion(fence, index[i])));
    join(i, index.position(prime_map(fence, kappa, index[i])));
  }
  OrbitDecomposition out;
  out.orbit_of.assign(index.size(), 0);
  std::vector<std::size_t> id_of_root(index.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::size_t r = root(i);
    if (id_of_root[r] == static_cast<std::size_t>(-1)) {
      id_of_root[r] = out.orbits.size();
      out.orbits.emplace_back();
    }
    out.orbit_of[i] = id_of_root[r];
    out.orbits[id_of_root[r]].push_back(i);
  }
  return out;
}

void SuiteResult::record(bool ok, const std::string& what) {
  ++checks;
  if (!ok && passed) {
    passed = false;
    witness = what;
  }
}

nlohmann::json to_json(const SuiteResult& s) {
  nlohmann::json j = {{"suite", s.name}, {"passed", s.passed}, {"checks", s.checks}};
  if (!s.passed) j["witness"] = s.witness;
  return j;
}

std::vector<SuiteResult> verify_self_dual_suite(const Fence& fence) {
  const auto kappa = self_dual_involution(fence);
  if (!kappa) throw std::invalid_argument(fence.to_string() + " has no order-reversing involution k -> n+1-k");
  const int n = fence.size();
  const IdealIndex index = enumerate_ideals(fence);
  const OrbitDecomposition orbits = orbit_decomposition(fence, index, DynamicsMap::Rowmotion);
  const std::string where = " on " + fence.to_string();

  SuiteResult complement{"complement-involution"}, prime{"prime-involution"};
  SuiteResult complement_conj{"complement-conjugation"}, prime_conj{"prime-conjugation"};
  std::vector<std::size_t> prime_pos(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Ideal I = index[i];
    const Ideal bar = ideal_complement(fence, *kappa, I);
    complement.record(is_ideal(fence, bar.bits) && ideal_complement(fence, *kappa, bar) == I,
                      "I=" + to_string(I) + where);
    const Ideal pr = prime_map(fence, *kappa, I);
    prime.record(prime_map(fence, *kappa, pr) == I, "I=" + to_string(I) + where);
    complement_conj.record(rowmotion_inverse(fence, bar) == ideal_complement(fence, *kappa, rowmotion(fence, I)),
                           "I=" + to_string(I) + where);
    prime_conj.record(rowmotion_inverse(fence, pr) == prime_map(fence, *kappa, rowmotion(fence, I)),
                      "I=" + to_string(I) + where);
    prime_pos[i] = index.position(pr);
  }

  // per-orbit counts of l in max(I)
  std::vector<std::vector<long>> counts(orbits.count(), std::vector<long>(static_cast<std::size_t>(n) + 1));
  for (std::size_t o = 0; o < orbits.count(); ++o) {
    for (std::size_t pos : orbits.orbits[o]) {
      for (std::uint64_t b = max_elements(fence, index[pos]); b != 0; b &= b - 1) {
        ++counts[o][static_cast<std::size_t>(std::countr_zero(b) + 1)];
      }
    }
  }
  auto balanced = [&](const std::vector<std::size_t>& orbit_ids) {
    for (int l = 1; l <= n; ++l) {
      long diff = 0;
      for (auto o : orbit_ids) diff += counts[o][static_cast<std::size_t>(l)] - counts[o][static_cast<std::size_t>((*kappa)(l))];
      if (diff != 0) return false;
    }
    return true;
  };

  SuiteResult same_orbit{"self-paired-orbits"};
  SuiteResult paired{"paired-orbits"};
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::size_t o = orbits.orbit_of[i];
    const std::size_t op = orbits.orbit_of[prime_pos[i]];
    const std::string what = "I=" + to_string(index[i]) + where;
    if (o == op) {
      same_orbit.record(balanced({o}), what);
    } else {
      paired.record(orbits.orbits[o].size() == orbits.orbits[op].size() && balanced({o, op}), what);
    }
  }

  SuiteResult dihedral{"dihedral-orbits"};
  const OrbitDecomposition di = dihedral_orbits(fence, index, *kappa);
  for (const auto& orbit : di.orbits) {
    std::vector<std::size_t> ids;
    for (auto pos : orbit) ids.push_back(orbits.orbit_of[pos]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::size_t covered = 0;
    for (auto o : ids) covered += orbits.orbits[o].size();
    dihedral.record(ids.size() <= 2 && covered == orbit.size() && balanced(ids),
                    "dihedral orbit through " + to_string(index[orbit.front()]) + where);
  }
  return {complement, prime, complement_conj, prime_conj, same_orbit, paired, dihedral};
}

std::string to_string(Conjecture c) {
  switch (c) {
    case Conjecture::C5_1: return "C5_1";
    case Conjecture::C5_2: return "C5_2";
    case Conjecture::C5_3: return "C5_3";
    case Conjecture::C7_2: return "C7_2";
  }
  return "?";
}

Conjecture parse_conjecture(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto c : {Conjecture::C5_1, Conjecture::C5_2, Conjecture::C5_3, Conjecture::C7_2}) {
    if (up == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown conjecture '" + std::string(text) + "' (expected c5_1, c5_2, c5_3 or c7_2)");
}

nlohmann::json to_json(const ConjectureReport& r) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    nlohmann::json j = {{"statistic", v.statistic}, {"target", to_fraction_string(v.target)}, {"holds", v.holds}};
    if (v.witness_orbit) j["witness_orbit"] = *v.witness_orbit;
    if (v.witness_orbit_size) j["witness_orbit_size"] = *v.witness_orbit_size;
    if (v.witness_average) j["witness_average"] = to_fraction_string(*v.witness_average);
    verdicts.push_back(std::move(j));
  }
  nlohmann::json j = {{"conjecture", to_string(r.conjecture)},
                      {"fence", r.fence.to_string()},
                      {"holds", r.holds},
                      {"orbits", r.orbits},
                      {"statistics", verdicts}};
  if (r.codimension) j["codimension"] = *r.codimension;
  return j;
}

std::vector<FenceShape> equal_part_odd_shapes(int max_apt) {
  std::vector<FenceShape> out;
  for (int sum = 5; sum <= max_apt; ++sum) {
    for (int t = 3; t <= sum - 2; t += 2) {
      const int a = sum - t;
      if (a >= 2 && a * t - 1 <= kMaxMaskSize) out.emplace_back(std::vector<int>(static_cast<std::size_t>(t), a));
    }
  }
  return out;
}

namespace {

StatVerdict judge(std::string name, const StatFn& f, const Rational& target, const OrbitDecomposition& orbits) {
  StatVerdict v{.statistic = std::move(name), .target = target};
  const auto avgs = orbit_averages(f, orbits);
  for (std::size_t o = 0; o < avgs.size(); ++o) {
    if (avgs[o] != target) {
      v.holds = false;
      v.witness_orbit = o;
      v.witness_orbit_size = orbits.orbits[o].size();
      v.witness_average = avgs[o];
      break;
    }
  }
  return v;
}

void require_equal_odd(const Fence& fence, Conjecture id) {
  const auto& parts = fence.shape().parts();
  const bool equal = std::all_of(parts.begin(), parts.end(), [&](int a) { return a == parts.front(); });
  if (!equal || parts.size() % 2 == 0) {
    throw std::invalid_argument(to_string(id) + " is stated for F(a^t) with t odd, got " + fence.to_string());
  }
}

}  // namespace

ConjectureReport check_conjecture(Conjecture id, const Fence& fence) {
  ConjectureReport r{.conjecture = id, .fence = fence.shape()};
  const IdealIndex index = enumerate_ideals(fence);
  const OrbitDecomposition orbits = orbit_decomposition(fence, index, DynamicsMap::Rowmotion);
  r.orbits = orbits.count();
  const int t = fence.segments();
  switch (id) {
    case Conjecture::C5_1:
      require_equal_odd(fence, id);
      r.verdicts.push_back(judge("chi_hat", ideal_cardinality(fence, index), Rational(fence.size()) / 2, orbits));
      break;
    case Conjecture::C5_2: {
      require_equal_odd(fence, id);
      StatFn f(index.size());
      for (int i = 1; i < t; ++i) f.add_scaled(i % 2 == 1 ? 1 : -1, chi(fence, index, fence.shared(i)));
      r.verdicts.push_back(judge("sum chi_peaks - sum chi_valleys", f, 0, orbits));
      break;
    }
    case Conjecture::C5_3:
      require_equal_odd(fence, id);
      for (int i = 1; i <= (t - 1) / 2; ++i) {
        const StatFn f = chi(fence, index, fence.shared(i)) - chi(fence, index, fence.shared(t - i));
        r.verdicts.push_back(
            judge("chi_s" + std::to_string(i) + " - chi_s" + std::to_string(t - i), f, 0, orbits));
      }
      break;
    case Conjecture::C7_2: {
      const SpaceReport s = space_dims(fence, index, orbits, {.antichain_dims = false});
      r.codimension = s.dim_ih - s.dim_it;
      break;
    }
  }
  r.holds = std::all_of(r.verdicts.begin(), r.verdicts.end(), [](const StatVerdict& v) { return v.holds; });
  return r;
}

std::vector<ConjectureReport> scan_conjecture(Conjecture id, const ScanRange& range) {
  const std::vector<FenceShape> shapes =
      id == Conjecture::C7_2 ? shapes_with_segments(range.t, range.max_n) : equal_part_odd_shapes(range.max_apt);
  return parallel_map(shapes, range.workers, [id](const FenceShape& s) { return check_conjecture(id, build_fence(s)); });
}

std::map<std::size_t, std::size_t> codimension_counts(const std::vector<ConjectureReport>& reports) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& r : reports) {
    if (r.codimension) ++out[*r.codimension];
  }
  return out;
}

bool SufficiencyReport::consistent() const {
  const bool opposite = opposite_diffs && opposite_sums;
  return (!shared_diffs || opposite) && (!shared_sums || opposite) && opposite_diffs == opposite_sums;
}

nlohmann::json to_json(const SufficiencyReport& r) {
  return {{"fence", r.fence.to_string()},
          {"shared_diffs_0_mesic", r.shared_diffs},
          {"shared_sums_1_mesic", r.shared_sums},
          {"opposite_diffs_0_mesic", r.opposite_diffs},
          {"opposite_sums_1_mesic", r.opposite_sums},
          {"consistent", r.consistent()}};
}

SufficiencyReport verify_sufficiency(const Fence& fence) {
  if (!fence.shape().palindromic() || fence.segments() % 2 == 0) {
    throw std::invalid_argument("sufficiency check needs a palindromic shape with t odd, got " + fence.to_string());
  }
  const int n = fence.size();
  const int t = fence.segments();
  const IdealIndex index = enumerate_ideals(fence);
  const OrbitDecomposition orbits = orbit_decomposition(fence, index, DynamicsMap::Rowmotion);
  auto mesic = [&](const StatFn& f, long c) {
    const auto h = homomesy_constant(f, orbits);
    return h && *h == c;
  };
  auto diff_mesic = [&](int k, int l) { return mesic(chi(fence, index, k) - chi(fence, index, l), 0); };
  auto sum_mesic = [&](int k, int l) { return mesic(chi_hat(fence, index, k) + chi_hat(fence, index, l), 1); };

  SufficiencyReport r{.fence = fence.shape(), .shared_diffs = true, .shared_sums = true,
                      .opposite_diffs = true, .opposite_sums = true};
  for (int i = 1; i < t; ++i) {
    r.shared_diffs = r.shared_diffs && diff_mesic(fence.shared(i), fence.shared(t - i));
    r.shared_sums = r.shared_sums && sum_mesic(fence.shared(i), fence.shared(t - i));
  }
  for (int k = 1; k <= n; ++k) {
    r.opposite_diffs = r.opposite_diffs && diff_mesic(k, n + 1 - k);
    r.opposite_sums = r.opposite_sums && sum_mesic(k, n + 1 - k);
  }
  return r;
}

}  // namespace fences
