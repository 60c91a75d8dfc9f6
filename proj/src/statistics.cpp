#include "fences/statistics.hpp"

#include <algorithm>
#include <bit>

namespace fences {

void StatFn::check_size(const StatFn& other) const {
  if (other.size() != size()) {
    throw std::invalid_argument("statistics over different ideal sets (" + std::to_string(size()) + " vs " +
                                std::to_string(other.size()) + ")");
  }
}

StatFn& StatFn::operator+=(const StatFn& other) {
  check_size(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

StatFn& StatFn::operator-=(const StatFn& other) {
  check_size(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

StatFn& StatFn::operator*=(const Rational& scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

StatFn& StatFn::add_scaled(const Rational& scale, const StatFn& other) {
  check_size(other);
  if (sgn(scale) == 0) return *this;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (sgn(other.values_[i]) != 0) values_[i] += scale * other.values_[i];
  }
  return *this;
}

Rational StatFn::sum_over(const std::vector<std::size_t>& positions) const {
  Rational acc = 0;
  for (auto i : positions) acc += values_.at(i);
  return acc;
}

std::string to_string(const Antichain& a) { return to_string(Ideal{a.members}); }

bool is_antichain(const Fence& fence, std::uint64_t set) {
  for (std::uint64_t b = set; b != 0; b &= b - 1) {
    const int k = std::countr_zero(b) + 1;
    // anything else in the set must avoid the principal ideal and filter of k
    if (((fence.down_mask(k) | fence.up_mask(k)) & set & ~bit(k)) != 0) return false;
  }
  return true;
}

Antichain make_antichain(const Fence& fence, const std::vector<int>& elements) {
  fence.require_masks();
  Antichain a;
  for (int k : elements) {
    fence.check_element(k);
    a.members |= bit(k);
  }
  if (!is_antichain(fence, a.members)) throw NotAntichain(to_string(a) + " is not an antichain of " + fence.to_string());
  return a;
}

namespace {

template <typename F>
StatFn tabulate(const IdealIndex& index, F value) {
  StatFn out(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) out[i] = value(index[i]);
  return out;
}

}  // namespace

StatFn chi_hat(const Fence& fence, const IdealIndex& index, int p) {
  if (p == kAbsent) return StatFn(index.size());
  fence.check_element(p);
  return tabulate(index, [p](Ideal I) { return I.contains(p) ? 1 : 0; });
}

StatFn chi(const Fence& fence, const IdealIndex& index, int p) {
  if (p == kAbsent) return StatFn(index.size());
  fence.check_element(p);
  return tabulate(index, [&](Ideal I) { return (max_elements(fence, I) & bit(p)) ? 1 : 0; });
}

StatFn togg_plus(const Fence& fence, const IdealIndex& index, int p) {
  if (p == kAbsent) return StatFn(index.size());
  fence.check_element(p);
  return tabulate(index, [&](Ideal I) { return (min_of_complement(fence, I) & bit(p)) ? 1 : 0; });
}

StatFn togg_minus(const Fence& fence, const IdealIndex& index, int p) { return chi(fence, index, p); }

StatFn togg(const Fence& fence, const IdealIndex& index, int p) {
  return togg_plus(fence, index, p) - togg_minus(fence, index, p);
}

StatFn togg_antichain(const Fence& fence, const IdealIndex& index, Antichain a) {
  if (a.empty()) throw NotAntichain("the empty antichain has no toggleability statistic");
  if (!is_antichain(fence, a.members)) throw NotAntichain(to_string(a) + " is not an antichain of " + fence.to_string());
  return tabulate(index, [&](Ideal I) {
    if ((min_of_complement(fence, I) & a.members) == a.members) return 1;
    if ((max_elements(fence, I) & a.members) == a.members) return -1;
    return 0;
  });
}

StatFn ideal_cardinality(const Fence&, const IdealIndex& index) {
  return tabulate(index, [](Ideal I) { return I.size(); });
}

StatFn antichain_cardinality(const Fence& fence, const IdealIndex& index) {
  return tabulate(index, [&](Ideal I) { return std::popcount(max_elements(fence, I)); });
}

std::vector<Antichain> enumerate_antichains(const Fence& fence, const IdealIndex& index) {
  std::vector<Antichain> out;
  out.reserve(index.size());
  for (const Ideal& I : index) out.push_back(Antichain{max_elements(fence, I)});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void add_term(std::map<int, Rational>& terms, int p, const Rational& c) {
  if (p == kAbsent) return;
  terms[p] += c;
}

void prune_map(std::map<int, Rational>& terms) {
  std::erase_if(terms, [](const auto& kv) { return sgn(kv.second) == 0; });
}

}  // namespace

StatExpr& StatExpr::add_ideal(int p, const Rational& c) {
  add_term(ideal, p, c);
  return *this;
}

StatExpr& StatExpr::add_antichain(int p, const Rational& c) {
  add_term(antichain, p, c);
  return *this;
}

StatExpr& StatExpr::add_toggle(int p, const Rational& c) {
  add_term(toggle, p, c);
  return *this;
}

StatExpr& StatExpr::operator+=(const StatExpr& other) {
  for (const auto& [p, c] : other.ideal) ideal[p] += c;
  for (const auto& [p, c] : other.antichain) antichain[p] += c;
  for (const auto& [p, c] : other.toggle) toggle[p] += c;
  constant += other.constant;
  return *this;
}

StatExpr& StatExpr::operator*=(const Rational& s) {
  for (auto* terms : {&ideal, &antichain, &toggle}) {
    for (auto& kv : *terms) kv.second *= s;
  }
  constant *= s;
  return *this;
}

void StatExpr::prune() {
  prune_map(ideal);
  prune_map(antichain);
  prune_map(toggle);
}

StatFn StatExpr::evaluate(const Fence& fence, const IdealIndex& index) const {
  StatFn out = StatFn::constant(index.size(), constant);
  for (const auto& [p, c] : ideal) out.add_scaled(c, chi_hat(fence, index, p));
  for (const auto& [p, c] : antichain) out.add_scaled(c, chi(fence, index, p));
  for (const auto& [p, c] : toggle) out.add_scaled(c, togg(fence, index, p));
  return out;
}

namespace {

nlohmann::json terms_to_json(const std::map<int, Rational>& terms) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [p, c] : terms) j[std::to_string(p)] = to_string(c);
  return j;
}

std::map<int, Rational> terms_from_json(const nlohmann::json& j) {
  std::map<int, Rational> out;
  if (j.is_null()) return out;
  for (const auto& [key, value] : j.items()) out[std::stoi(key)] = parse_rational(value.get<std::string>());
  return out;
}

}  // namespace

nlohmann::json to_json(const StatExpr& expr) {
  return {{"ideal", terms_to_json(expr.ideal)},
          {"antichain", terms_to_json(expr.antichain)},
          {"toggle", terms_to_json(expr.toggle)},
          {"const", to_string(expr.constant)}};
}

StatExpr stat_expr_from_json(const nlohmann::json& j) {
  StatExpr e;
  e.ideal = terms_from_json(j.value("ideal", nlohmann::json{}));
  e.antichain = terms_from_json(j.value("antichain", nlohmann::json{}));
  e.toggle = terms_from_json(j.value("toggle", nlohmann::json{}));
  e.constant = parse_rational(j.value("const", std::string("0")));
  return e;
}

StatExpr dict_oic_to_ac(const Fence& fence, int p) {
  StatExpr e;
  switch (fence.element_class(p).kind) {
    case ElementKind::Peak:
      e.add_antichain(p, 1);
      break;
    case ElementKind::Unshared:
      for (int y : Ideal{fence.up_mask(p)}.elements()) e.add_antichain(y, 1);
      break;
    case ElementKind::Valley:
      e.constant = 1;
      e.add_toggle(p, -1).add_antichain(p, -1);
      break;
  }
  return e;
}

StatExpr dict_ac_to_oic(const Fence& fence, int p) {
  StatExpr e;
  switch (fence.element_class(p).kind) {
    case ElementKind::Peak:
      e.add_ideal(p, 1);
      break;
    case ElementKind::Unshared:
      e.add_ideal(p, 1);
      for (int y : fence.upper_covers(p)) e.add_ideal(y, -1);
      break;
    case ElementKind::Valley:
      e.constant = 1;
      e.add_toggle(p, -1).add_ideal(p, -1);
      break;
  }
  return e;
}

StatExpr rewrite_ideal_terms_as_antichain(const Fence& fence, const StatExpr& expr) {
  StatExpr out = expr;
  out.ideal.clear();
  for (const auto& [p, c] : expr.ideal) {
    StatExpr term = dict_oic_to_ac(fence, p);
    term *= c;
    out += term;
  }
  out.prune();
  return out;
}

StatExpr rewrite_antichain_terms_as_ideal(const Fence& fence, const StatExpr& expr) {
  StatExpr out = expr;
  out.antichain.clear();
  for (const auto& [p, c] : expr.antichain) {
    StatExpr term = dict_ac_to_oic(fence, p);
    term *= c;
    out += term;
  }
  out.prune();
  return out;
}

}  // namespace fences
