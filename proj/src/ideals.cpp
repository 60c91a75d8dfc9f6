#include "fences/ideals.hpp"

#include <algorithm>
#include <cctype>

namespace fences {

std::vector<int> Ideal::elements() const {
  std::vector<int> out;
  for (std::uint64_t b = bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::string to_string(const Ideal& ideal) {
  std::string s = "{";
  bool first = true;
  for (int k : ideal.elements()) {
    if (!first) s += ',';
    s += std::to_string(k);
    first = false;
  }
  return s + "}";
}

Ideal parse_ideal(const Fence& fence, std::string_view text) {
  fence.require_masks();
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (compact.size() < 2 || compact.front() != '{' || compact.back() != '}') {
    throw std::invalid_argument("malformed ideal: '" + std::string(text) + "'");
  }
  const std::string body = compact.substr(1, compact.size() - 2);
  Ideal ideal;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const std::string token = body.substr(pos, comma - pos);
    if (token.empty() || token.size() > 3 ||
        !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw std::invalid_argument("malformed ideal: '" + std::string(text) + "'");
    }
    const int k = std::stoi(token);
    fence.check_element(k);
    ideal.bits |= bit(k);
    pos = comma + 1;
  }
  if (!is_ideal(fence, ideal.bits)) {
    throw NotAnIdeal(to_string(ideal) + " is not an order ideal of " + fence.to_string());
  }
  return ideal;
}

bool is_ideal(const Fence& fence, std::uint64_t set) {
  for (std::uint64_t b = set; b != 0; b &= b - 1) {
    const int k = std::countr_zero(b) + 1;
    if ((fence.lower_mask(k) & ~set) != 0) return false;
  }
  return true;
}

std::uint64_t max_elements(const Fence& fence, Ideal ideal) {
  std::uint64_t out = 0;
  for (std::uint64_t b = ideal.bits; b != 0; b &= b - 1) {
    const int k = std::countr_zero(b) + 1;
    if ((fence.upper_mask(k) & ideal.bits) == 0) out |= bit(k);
  }
  return out;
}

std::uint64_t min_of_complement(const Fence& fence, Ideal ideal) {
  std::uint64_t out = 0;
  for (std::uint64_t b = fence.full_mask() & ~ideal.bits; b != 0; b &= b - 1) {
    const int k = std::countr_zero(b) + 1;
    if ((fence.lower_mask(k) & ~ideal.bits) == 0) out |= bit(k);
  }
  return out;
}

Ideal generated_ideal(const Fence& fence, std::uint64_t set) {
  Ideal out;
  for (std::uint64_t b = set; b != 0; b &= b - 1) out.bits |= fence.down_mask(std::countr_zero(b) + 1);
  return out;
}

std::optional<std::size_t> IdealIndex::find(Ideal ideal) const {
  const auto it = std::lower_bound(ideals_.begin(), ideals_.end(), ideal);
  if (it == ideals_.end() || *it != ideal) return std::nullopt;
  return static_cast<std::size_t>(it - ideals_.begin());
}

std::size_t IdealIndex::position(Ideal ideal) const {
  if (auto pos = find(ideal)) return *pos;
  throw NotAnIdeal(to_string(ideal) + " is not in the ideal index");
}

namespace {

void extend(const Fence& fence, std::size_t depth, std::uint64_t current, std::vector<Ideal>& out) {
  const auto& order = fence.linear_extension();
  if (depth == order.size()) {
    out.push_back(Ideal{current});
    return;
  }
  const int p = order[depth];
  extend(fence, depth + 1, current, out);
  if ((fence.lower_mask(p) & ~current) == 0) extend(fence, depth + 1, current | bit(p), out);
}

}  // namespace

IdealIndex enumerate_ideals(const Fence& fence) {
  fence.require_masks();
  std::vector<Ideal> out;
  extend(fence, 0, 0, out);
  std::sort(out.begin(), out.end());
  return IdealIndex(std::move(out));
}

Ideal toggle(const Fence& fence, Ideal ideal, int p) {
  fence.check_element(p);
  const std::uint64_t b = bit(p);
  if (ideal.bits & b) {
    if ((fence.upper_mask(p) & ideal.bits) == 0) ideal.bits &= ~b;
  } else if ((fence.lower_mask(p) & ~ideal.bits) == 0) {
    ideal.bits |= b;
  }
  return ideal;
}

Ideal rowmotion(const Fence& fence, Ideal ideal) { return generated_ideal(fence, min_of_complement(fence, ideal)); }

Ideal rowmotion_by_toggles(const Fence& fence, Ideal ideal) {
  const auto& order = fence.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it) ideal = toggle(fence, ideal, *it);
  return ideal;
}

Ideal rowmotion_inverse(const Fence& fence, Ideal ideal) {
  // complement of the filter generated by max(I)
  std::uint64_t filter = 0;
  for (std::uint64_t b = max_elements(fence, ideal); b != 0; b &= b - 1) {
    filter |= fence.up_mask(std::countr_zero(b) + 1);
  }
  return Ideal{fence.full_mask() & ~filter};
}

Ideal promotion(const Fence& fence, Ideal ideal) {
  for (int p = 1; p <= fence.size(); ++p) ideal = toggle(fence, ideal, p);
  return ideal;
}

Ideal recombination(const Fence& fence, Ideal ideal) {
  std::uint64_t assembled = 0;
  Ideal iterate = ideal;
  for (int c = 0; c < fence.column_count(); ++c) {
    assembled |= fence.column_mask(c) & iterate.bits;
    iterate = rowmotion(fence, iterate);
  }
  if (!is_ideal(fence, assembled)) {
    throw NotAnIdeal("recombination of " + to_string(ideal) + " on " + fence.to_string() +
                     " is not an ideal: " + to_string(Ideal{assembled}));
  }
  return Ideal{assembled};
}

std::string to_string(DynamicsMap map) { return map == DynamicsMap::Rowmotion ? "rowmotion" : "promotion"; }

DynamicsMap parse_dynamics_map(std::string_view text) {
  if (text == "rowmotion") return DynamicsMap::Rowmotion;
  if (text == "promotion") return DynamicsMap::Promotion;
  throw std::invalid_argument("unknown map '" + std::string(text) + "' (expected rowmotion or promotion)");
}

Ideal apply(const Fence& fence, DynamicsMap map, Ideal ideal) {
  return map == DynamicsMap::Rowmotion ? rowmotion(fence, ideal) : promotion(fence, ideal);
}

std::vector<std::size_t> position_permutation(const Fence& fence, const IdealIndex& index, DynamicsMap map) {
  std::vector<std::size_t> perm(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) perm[i] = index.position(apply(fence, map, index[i]));
  return perm;
}

std::vector<std::size_t> OrbitDecomposition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(orbits.size());
  for (const auto& o : orbits) out.push_back(o.size());
  return out;
}

OrbitDecomposition cycles_of(const std::vector<std::size_t>& permutation) {
  constexpr auto unseen = static_cast<std::size_t>(-1);
  OrbitDecomposition out;
  out.orbit_of.assign(permutation.size(), unseen);
  for (std::size_t start = 0; start < permutation.size(); ++start) {
    if (out.orbit_of[start] != unseen) continue;
    const std::size_t id = out.orbits.size();
    std::vector<std::size_t> cycle;
    for (std::size_t i = start; out.orbit_of[i] == unseen; i = permutation[i]) {
      out.orbit_of[i] = id;
      cycle.push_back(i);
    }
    out.orbits.push_back(std::move(cycle));
  }
  return out;
}

OrbitDecomposition orbit_decomposition(const Fence& fence, const IdealIndex& index, DynamicsMap map) {
  return cycles_of(position_permutation(fence, index, map));
}

std::vector<Ideal> orbit_through(const Fence& fence, Ideal start, DynamicsMap map) {
  fence.require_masks();
  if (!is_ideal(fence, start.bits)) throw NotAnIdeal(to_string(start) + " is not an ideal");
  std::vector<Ideal> out{start};
  for (Ideal next = apply(fence, map, start); next != start; next = apply(fence, map, next)) out.push_back(next);
  return out;
}

}  // namespace fences
