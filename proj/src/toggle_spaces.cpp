#include "fences/toggle_spaces.hpp"

#include <algorithm>
#include <bit>

#include "fences/linalg.hpp"

namespace fences {

namespace {

// Per-ideal masks shared by every indicator and toggle evaluation.
struct IdealMasks {
  std::vector<std::uint64_t> members, maxima, addable;

  IdealMasks(const Fence& fence, const IdealIndex& index) {
    members.reserve(index.size());
    maxima.reserve(index.size());
    addable.reserve(index.size());
    for (const Ideal& I : index) {
      members.push_back(I.bits);
      maxima.push_back(max_elements(fence, I));
      addable.push_back(min_of_complement(fence, I));
    }
  }

  std::size_t size() const { return members.size(); }

  std::vector<std::int64_t> indicator(IndicatorKind kind, int p) const {
    const auto& src = kind == IndicatorKind::Ideal ? members : maxima;
    std::vector<std::int64_t> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = (src[i] & bit(p)) ? 1 : 0;
    return v;
  }

  std::vector<std::int64_t> toggleability(std::uint64_t set) const {
    std::vector<std::int64_t> v(size());
    for (std::size_t i = 0; i < size(); ++i) {
      if ((addable[i] & set) == set) {
        v[i] = 1;
      } else if ((maxima[i] & set) == set) {
        v[i] = -1;
      }
    }
    return v;
  }
};

void check_certificate(const Fence& fence, const IdealIndex& index, const BasisEntry& e, const char* family) {
  const StatFn lhs = e.stat.evaluate(fence, index);
  if (e.cert.holds_for(fence, index, lhs)) return;
  const StatFn rhs = e.cert.as_expr().evaluate(fence, index);
  std::size_t bad = 0;
  while (bad < lhs.size() && lhs[bad] == rhs[bad]) ++bad;
  throw CertificateMismatch(std::string(family) + " certificate for element " + std::to_string(e.element) + " of " +
                            fence.to_string() + " fails at ideal " + to_string(index[bad]) + ": " +
                            to_string(lhs[bad]) + " != " + to_string(rhs[bad]));
}

}  // namespace

StatExpr EquivCertificate::as_expr() const {
  StatExpr e;
  e.constant = constant;
  e.toggle = toggle_coeffs;
  e.prune();
  return e;
}

bool EquivCertificate::holds_for(const Fence& fence, const IdealIndex& index, const StatFn& f) const {
  return as_expr().evaluate(fence, index) == f;
}

nlohmann::json to_json(const EquivCertificate& cert) {
  nlohmann::json toggles = nlohmann::json::object();
  for (const auto& [p, c] : cert.toggle_coeffs) {
    if (sgn(c) != 0) toggles[std::to_string(p)] = to_string(c);
  }
  return {{"const", to_string(cert.constant)}, {"toggle", toggles}};
}

std::optional<EquivCertificate> equiv_const_solve(const Fence& fence, const IdealIndex& index, const StatFn& f) {
  const int n = fence.size();
  if (f.size() != index.size()) throw DimensionMismatch("statistic length does not match the ideal count");
  RatMatrix m(index.size(), static_cast<std::size_t>(n) + 1);
  const IdealMasks masks(fence, index);
  for (std::size_t r = 0; r < index.size(); ++r) m(r, 0) = 1;
  for (int p = 1; p <= n; ++p) {
    const auto col = masks.toggleability(bit(p));
    for (std::size_t r = 0; r < index.size(); ++r) m(r, static_cast<std::size_t>(p)) = static_cast<long>(col[r]);
  }
  const auto x = solve(m, f.values());
  if (!x) return std::nullopt;
  EquivCertificate cert;
  cert.constant = (*x)[0];
  for (int p = 1; p <= n; ++p) {
    if (sgn((*x)[static_cast<std::size_t>(p)]) != 0) cert.toggle_coeffs[p] = (*x)[static_cast<std::size_t>(p)];
  }
  return cert;
}

BasisEntry antichain_basis_entry(const Fence& fence, int segment, int j) {
  const int alpha = fence.shape().part(segment);
  const int beta = alpha - 1;
  BasisEntry e;
  e.element = fence.unshared(segment, j);
  if (e.element == kAbsent) throw IndexOutOfRange("segment " + std::to_string(segment) + " has no unshared element " +
                                                  std::to_string(j));
  const int peak = fence.peak_of(segment);
  const int valley = fence.valley_of(segment);
  e.stat.add_antichain(e.element, alpha).add_antichain(peak, 1).add_antichain(valley, 1);
  e.cert.constant = 1;
  if (valley != kAbsent) e.cert.toggle_coeffs[valley] = -1;
  for (int m = 1; m <= beta; ++m) {
    e.cert.toggle_coeffs[fence.unshared(segment, m)] = m <= j ? Rational(-m) : Rational(beta - m + 1);
  }
  return e;
}

BasisEntry ideal_basis_entry(const Fence& fence, int segment, int j) {
  const int alpha = fence.shape().part(segment);
  const int beta = alpha - 1;
  BasisEntry e;
  e.element = fence.unshared(segment, j);
  if (e.element == kAbsent) throw IndexOutOfRange("segment " + std::to_string(segment) + " has no unshared element " +
                                                  std::to_string(j));
  const int peak = fence.peak_of(segment);
  const int valley = fence.valley_of(segment);
  e.stat.add_ideal(e.element, alpha).add_ideal(peak, -j).add_ideal(valley, -(alpha - j));
  e.cert.constant = valley == kAbsent ? alpha - j : 0;
  for (int m = 1; m <= beta; ++m) {
    e.cert.toggle_coeffs[fence.unshared(segment, m)] = m <= j ? Rational(-(alpha - j) * m) : Rational(-j * (beta - m + 1));
  }
  return e;
}

std::vector<BasisEntry> basis_ba(const Fence& fence, const IdealIndex& index) {
  std::vector<BasisEntry> out;
  for (int i = 1; i <= fence.segments(); ++i) {
    for (int j = 1; j < fence.shape().part(i); ++j) {
      out.push_back(antichain_basis_entry(fence, i, j));
      check_certificate(fence, index, out.back(), "antichain basis");
    }
  }
  return out;
}

std::vector<BasisEntry> basis_bi(const Fence& fence, const IdealIndex& index) {
  std::vector<BasisEntry> out;
  for (int i = 1; i <= fence.segments(); ++i) {
    for (int j = 1; j < fence.shape().part(i); ++j) {
      out.push_back(ideal_basis_entry(fence, i, j));
      check_certificate(fence, index, out.back(), "ideal basis");
    }
  }
  return out;
}

namespace {

std::size_t toggle_space_dim(const Fence& fence, const IdealMasks& masks, IndicatorKind kind) {
  const std::size_t len = masks.size();
  IncrementalRank indicators(len), toggles(len), both(len);
  for (int p = 1; p <= fence.size(); ++p) {
    const auto v = masks.indicator(kind, p);
    indicators.add(std::span<const std::int64_t>(v));
    both.add(std::span<const std::int64_t>(v));
  }
  const std::vector<std::int64_t> ones(len, 1);
  toggles.add(std::span<const std::int64_t>(ones));
  both.add(std::span<const std::int64_t>(ones));
  for (int p = 1; p <= fence.size(); ++p) {
    const auto v = masks.toggleability(bit(p));
    toggles.add(std::span<const std::int64_t>(v));
    both.add(std::span<const std::int64_t>(v));
  }
  return indicators.rank() + toggles.rank() - both.rank();
}

std::size_t homomesy_space_dim(const Fence& fence, const IdealMasks& masks, const OrbitDecomposition& orbits,
                               IndicatorKind kind) {
  const int n = fence.size();
  const auto& src = kind == IndicatorKind::Ideal ? masks.members : masks.maxima;
  // orbit sums of each indicator
  std::vector<std::vector<std::int64_t>> sums(orbits.count(), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  for (std::size_t o = 0; o < orbits.count(); ++o) {
    for (std::size_t pos : orbits.orbits[o]) {
      for (std::uint64_t b = src[pos]; b != 0; b &= b - 1) ++sums[o][static_cast<std::size_t>(std::countr_zero(b))];
    }
  }
  IncrementalRank constraints(static_cast<std::size_t>(n));
  const auto size0 = static_cast<std::int64_t>(orbits.orbits[0].size());
  for (std::size_t o = 1; o < orbits.count() && constraints.rank() < static_cast<std::size_t>(n); ++o) {
    const auto size = static_cast<std::int64_t>(orbits.orbits[o].size());
    std::vector<std::int64_t> row(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < row.size(); ++p) row[p] = size0 * sums[o][p] - size * sums[0][p];
    constraints.add(std::span<const std::int64_t>(row));
  }
  return static_cast<std::size_t>(n) - constraints.rank();
}

}  // namespace

std::size_t toggle_space_dim(const Fence& fence, const IdealIndex& index, IndicatorKind kind) {
  return toggle_space_dim(fence, IdealMasks(fence, index), kind);
}

std::size_t homomesy_space_dim(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                               IndicatorKind kind) {
  return homomesy_space_dim(fence, IdealMasks(fence, index), orbits, kind);
}

SpaceReport space_dims(const Fence& fence, const SpaceOptions& options) {
  const IdealIndex index = enumerate_ideals(fence);
  const OrbitDecomposition orbits = orbit_decomposition(fence, index, DynamicsMap::Rowmotion);
  return space_dims(fence, index, orbits, options);
}

SpaceReport space_dims(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                       const SpaceOptions& options) {
  const IdealMasks masks(fence, index);
  SpaceReport r{.shape = fence.shape()};
  r.n = fence.size();
  r.t = fence.segments();
  r.ideals = index.size();
  r.orbits = orbits.count();
  r.formula = static_cast<std::size_t>(r.n - (r.t - 1));
  r.dim_it = toggle_space_dim(fence, masks, IndicatorKind::Ideal);
  r.dim_ih = homomesy_space_dim(fence, masks, orbits, IndicatorKind::Ideal);
  if (options.antichain_dims) {
    r.dim_at = toggle_space_dim(fence, masks, IndicatorKind::Antichain);
    r.dim_ah = homomesy_space_dim(fence, masks, orbits, IndicatorKind::Antichain);
  }
  if (options.verify_bases) {
    basis_ba(fence, index);
    basis_bi(fence, index);
    r.basis_ba_verified = r.basis_bi_verified = true;
  }
  return r;
}

nlohmann::json to_json(const SpaceReport& r) {
  return {{"fence", r.shape.to_string()},
          {"n", r.n},
          {"t", r.t},
          {"ideals", r.ideals},
          {"orbits", r.orbits},
          {"dim_IT", r.dim_it},
          {"dim_AT", r.dim_at},
          {"dim_IH", r.dim_ih},
          {"dim_AH", r.dim_ah},
          {"formula", r.formula},
          {"basis_BA_verified", r.basis_ba_verified},
          {"basis_BI_verified", r.basis_bi_verified}};
}

SpaceReport space_report_from_json(const nlohmann::json& j) {
  SpaceReport r{.shape = parse_fence(j.at("fence").get<std::string>())};
  j.at("n").get_to(r.n);
  j.at("t").get_to(r.t);
  j.at("ideals").get_to(r.ideals);
  j.at("orbits").get_to(r.orbits);
  j.at("dim_IT").get_to(r.dim_it);
  j.at("dim_AT").get_to(r.dim_at);
  j.at("dim_IH").get_to(r.dim_ih);
  j.at("dim_AH").get_to(r.dim_ah);
  j.at("formula").get_to(r.formula);
  j.at("basis_BA_verified").get_to(r.basis_ba_verified);
  j.at("basis_BI_verified").get_to(r.basis_bi_verified);
  return r;
}

std::vector<Rational> orbit_averages(const StatFn& f, const OrbitDecomposition& orbits) {
  std::vector<Rational> out;
  out.reserve(orbits.count());
  for (const auto& orbit : orbits.orbits) {
    out.push_back(f.sum_over(orbit) / Rational(static_cast<long>(orbit.size())));
  }
  return out;
}

std::optional<Rational> homomesy_constant(const StatFn& f, const OrbitDecomposition& orbits) {
  const auto avgs = orbit_averages(f, orbits);
  if (avgs.empty()) return std::nullopt;
  for (const auto& a : avgs) {
    if (a != avgs.front()) return std::nullopt;
  }
  return avgs.front();
}

StatFn evaluate(const Fence& fence, const IdealIndex& index, const AntichainCombination& combo) {
  const IdealMasks masks(fence, index);
  StatFn out(index.size());
  for (const auto& [a, c] : combo) {
    if (a.empty()) throw NotAntichain("the empty antichain has no toggleability statistic");
    if (!is_antichain(fence, a.members)) throw NotAntichain(to_string(a) + " is not an antichain");
    const auto v = masks.toggleability(a.members);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) out[i] += c * static_cast<long>(v[i]);
    }
  }
  return out;
}

std::optional<AntichainExpression> express_in_antichain_toggle_span(const Fence& fence, const IdealIndex& index,
                                                                    const StatFn& f) {
  if (f.size() != index.size()) throw DimensionMismatch("statistic length does not match the ideal count");
  const IdealMasks masks(fence, index);
  std::vector<Antichain> antichains;
  for (const Antichain& a : enumerate_antichains(fence, index)) {
    if (!a.empty()) antichains.push_back(a);
  }
  RatMatrix m(index.size(), antichains.size() + 1);
  for (std::size_t r = 0; r < index.size(); ++r) m(r, 0) = 1;
  for (std::size_t c = 0; c < antichains.size(); ++c) {
    const auto v = masks.toggleability(antichains[c].members);
    for (std::size_t r = 0; r < index.size(); ++r) m(r, c + 1) = static_cast<long>(v[r]);
  }
  const auto x = solve(m, f.values());
  if (!x) return std::nullopt;
  AntichainExpression out;
  out.constant = (*x)[0];
  for (std::size_t c = 0; c < antichains.size(); ++c) {
    if (sgn((*x)[c + 1]) != 0) out.coeffs[antichains[c]] = (*x)[c + 1];
  }
  return out;
}

std::size_t antichain_toggle_rank(const Fence& fence, const IdealIndex& index) {
  const IdealMasks masks(fence, index);
  IncrementalRank acc(index.size());
  for (const Ideal& I : index) {
    const std::uint64_t a = max_elements(fence, I);
    if (a == 0) continue;
    const auto v = masks.toggleability(a);
    acc.add(std::span<const std::int64_t>(v));
  }
  return acc.rank();
}

AntichainCombination three_segment_peak_valley_identity(const Fence& fence, int a) {
  if (fence.shape() != FenceShape({a, a, a})) {
    throw std::invalid_argument("identity is stated on F(a,a,a), got " + fence.to_string());
  }
  AntichainCombination combo;
  auto add = [&](std::initializer_list<int> elems, long c) {
    combo[make_antichain(fence, std::vector<int>(elems))] += c;
  };
  for (int i = 1; i <= a; ++i) add({i}, -i);
  add({2 * a}, -(a - 1));
  for (int i = 1; i <= a - 1; ++i) add({3 * a - i}, -i);
  for (int i = 1; i <= a - 1; ++i) {
    for (int j = 0; j <= i; ++j) add({i, 2 * a + j}, a);
  }
  for (int j = 1; j <= a - 1; ++j) add({a, 2 * a + j}, a);
  for (int i = 1; i <= a - 1; ++i) add({i, 2 * a - i, 2 * a + i}, -a);
  std::erase_if(combo, [](const auto& kv) { return sgn(kv.second) == 0; });
  return combo;
}

IdentityCheck verify_three_segment_peak_valley_identity(int a) {
  if (a < 2) throw std::invalid_argument("need a >= 2");
  const Fence fence = build_fence(FenceShape({a, a, a}));
  const IdealIndex index = enumerate_ideals(fence);
  const AntichainCombination combo = three_segment_peak_valley_identity(fence, a);
  const StatFn lhs = chi(fence, index, a) - chi(fence, index, 2 * a);
  const StatFn rhs = evaluate(fence, index, combo);
  IdentityCheck out;
  out.terms = combo.size();
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (lhs[i] != rhs[i]) {
      out.witness = index[i];
      return out;
    }
  }
  out.holds = true;
  return out;
}

EquivCertificate peak_valley_cardinality_certificate(int a, int t) {
  if (t % 2 == 0) throw std::invalid_argument("need an odd number of segments");
  const Fence fence = build_fence(FenceShape(std::vector<int>(static_cast<std::size_t>(t), a)));
  const IdealIndex index = enumerate_ideals(fence);
  StatFn f = ideal_cardinality(fence, index);
  for (int i = 1; i < t; ++i) f.add_scaled(i % 2 == 1 ? -a : a, chi(fence, index, fence.shared(i)));
  auto cert = equiv_const_solve(fence, index, f);
  if (!cert) throw std::logic_error("peak/valley cardinality statistic is not in the toggle span on " + fence.to_string());
  const Rational expected = Rational(fence.size()) / 2;
  if (cert->constant != expected) {
    throw std::logic_error("constant " + to_string(cert->constant) + " differs from " + to_string(expected) + " on " +
                           fence.to_string());
  }
  return *cert;
}

}  // namespace fences
