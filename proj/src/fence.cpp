#include "fences/fence.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace fences {

FenceShape::FenceShape(std::vector<int> parts) : parts_(std::move(parts)) {
  const auto t = parts_.size();
  if (t < 2) throw ShapeInvalid("a fence needs at least two segments");
  if (parts_.front() < 2 || parts_.back() < 2) {
    throw ShapeInvalid("first and last parts must be at least 2");
  }
  for (int a : parts_) {
    if (a < 1) throw ShapeInvalid("parts must be positive");
  }
}

int FenceShape::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0) - 1; }

bool FenceShape::palindromic() const { return std::equal(parts_.begin(), parts_.end(), parts_.rbegin()); }

std::string FenceShape::to_string() const {
  std::string s = "F(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts_[i]);
  }
  s += ')';
  return s;
}

FenceShape parse_fence(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  std::string_view body = compact;
  if (!body.empty() && (body.front() == 'F' || body.front() == 'f')) {
    body.remove_prefix(1);
    if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
      throw ShapeInvalid("malformed fence: '" + std::string(text) + "'");
    }
    body = body.substr(1, body.size() - 2);
  }
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const auto token = body.substr(pos, comma - pos);
    if (token.empty() || token.size() > 6 ||
        !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ShapeInvalid("malformed fence: '" + std::string(text) + "'");
    }
    parts.push_back(std::stoi(std::string(token)));
    pos = comma + 1;
  }
  return FenceShape(std::move(parts));
}

namespace {

void extend_shapes(std::vector<int>& prefix, int t, int budget, std::vector<FenceShape>& out) {
  // budget is the remaining allowance for the sum of the parts
  const auto i = static_cast<int>(prefix.size());
  if (i == t) {
    out.emplace_back(prefix);
    return;
  }
  const bool end = i == 0 || i == t - 1;
  const int lo = end ? 2 : 1;
  // leave room for the minimum of the remaining parts
  int reserve = 0;
  for (int k = i + 1; k < t; ++k) reserve += (k == t - 1) ? 2 : 1;
  for (int a = lo; a + reserve <= budget; ++a) {
    prefix.push_back(a);
    extend_shapes(prefix, t, budget - a, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<FenceShape> shapes_with_segments(int t, int max_n) {
  std::vector<FenceShape> out;
  if (t < 2) return out;
  std::vector<int> prefix;
  extend_shapes(prefix, t, max_n + 1, out);
  return out;
}

std::vector<FenceShape> shapes_up_to(int max_n) {
  std::vector<FenceShape> out;
  for (int t = 2; t <= max_n; ++t) {
    auto more = shapes_with_segments(t, max_n);
    out.insert(out.end(), more.begin(), more.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const FenceShape& a, const FenceShape& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.segments() != b.segments()) return a.segments() < b.segments();
    return a.parts() < b.parts();
  });
  return out;
}

Fence::Fence(FenceShape shape) : shape_(std::move(shape)), n_(shape_.size()) {
  const int t = shape_.segments();
  int pos = 0;
  for (int i = 1; i < t; ++i) {
    pos += shape_.part(i);
    shared_.push_back(pos);
  }

  const auto n = static_cast<std::size_t>(n_);
  lower_.resize(n);
  upper_.resize(n);
  classes_.resize(n);
  columns_.assign(n, 0);

  // the edge between x_k and x_{k+1} belongs to the segment containing both
  int segment = 1;
  for (int k = 1; k < n_; ++k) {
    while (segment < t && k >= shared_[static_cast<std::size_t>(segment - 1)]) ++segment;
    const bool up = segment % 2 == 1;
    const int low = up ? k : k + 1;
    const int high = up ? k + 1 : k;
    covers_.emplace_back(low, high);
    upper_[index(low)].push_back(high);
    lower_[index(high)].push_back(low);
    columns_[index(k + 1)] = columns_[index(k)] + (up ? 1 : 0);
  }
  column_count_ = columns_.empty() ? 0 : columns_.back() + 1;

  for (int i = 1; i < t; ++i) {
    classes_[index(shared(i))] = {i % 2 == 1 ? ElementKind::Peak : ElementKind::Valley, i, 0};
  }
  for (int i = 1; i <= t; ++i) {
    const auto members = unshared_in(i);
    for (std::size_t j = 0; j < members.size(); ++j) {
      classes_[index(members[j])] = {ElementKind::Unshared, i, static_cast<int>(j) + 1};
    }
  }

  heights_.assign(n, -1);
  // x_1 is minimal; heights along each segment follow the zigzag
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 1; k <= n_; ++k) {
      int h = 0;
      for (int low : lower_[index(k)]) h = std::max(h, heights_[index(low)] + 1);
      heights_[index(k)] = h;
    }
    for (int k = n_; k >= 1; --k) {
      int h = 0;
      for (int low : lower_[index(k)]) h = std::max(h, heights_[index(low)] + 1);
      heights_[index(k)] = h;
    }
  }
  extension_.resize(n);
  std::iota(extension_.begin(), extension_.end(), 1);
  std::stable_sort(extension_.begin(), extension_.end(),
                   [this](int a, int b) { return heights_[index(a)] < heights_[index(b)]; });

  if (has_masks()) {
    full_mask_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    lower_mask_.assign(n, 0);
    upper_mask_.assign(n, 0);
    for (auto [low, high] : covers_) {
      upper_mask_[index(low)] |= bit(high);
      lower_mask_[index(high)] |= bit(low);
    }
    down_mask_.assign(n, 0);
    for (int k : extension_) {
      std::uint64_t m = bit(k);
      for (int low : lower_[index(k)]) m |= down_mask_[index(low)];
      down_mask_[index(k)] = m;
    }
    up_mask_.assign(n, 0);
    for (auto it = extension_.rbegin(); it != extension_.rend(); ++it) {
      std::uint64_t m = bit(*it);
      for (int high : upper_[index(*it)]) m |= up_mask_[index(high)];
      up_mask_[index(*it)] = m;
    }
    column_masks_.assign(static_cast<std::size_t>(column_count_), 0);
    for (int k = 1; k <= n_; ++k) column_masks_[static_cast<std::size_t>(column(k))] |= bit(k);
  }
}

std::size_t Fence::index(int k) const {
  check_element(k);
  return static_cast<std::size_t>(k - 1);
}

void Fence::check_element(int k) const {
  if (k < 1 || k > n_) {
    throw IndexOutOfRange("element " + std::to_string(k) + " outside 1.." + std::to_string(n_) + " of " +
                          to_string());
  }
}

void Fence::require_masks() const {
  if (!has_masks()) {
    throw TooLarge(to_string() + " has " + std::to_string(n_) + " elements; at most " +
                   std::to_string(kMaxMaskSize) + " supported");
  }
}

bool Fence::covered_by(int low, int high) const {
  const auto& up = upper_covers(low);
  return std::find(up.begin(), up.end(), high) != up.end();
}

bool Fence::less_equal(int a, int b) const {
  check_element(a);
  check_element(b);
  if (a == b) return true;
  // comparable elements lie on a common segment walk; follow upper covers
  std::vector<int> frontier{a};
  while (!frontier.empty()) {
    const int x = frontier.back();
    frontier.pop_back();
    for (int y : upper_covers(x)) {
      if (y == b) return true;
      frontier.push_back(y);
    }
  }
  return false;
}

ElementClass Fence::element_class(int k) const { return classes_.at(index(k)); }

bool Fence::is_shared(int k) const { return element_class(k).kind != ElementKind::Unshared; }

int Fence::shared(int i) const {
  if (i < 1 || i >= segments()) return kAbsent;
  return shared_[static_cast<std::size_t>(i - 1)];
}

std::vector<int> Fence::segment_elements(int segment) const {
  if (segment < 1 || segment > segments()) {
    throw IndexOutOfRange("segment " + std::to_string(segment) + " of " + to_string());
  }
  const int first = segment == 1 ? 1 : shared(segment - 1);
  const int last = segment == segments() ? n_ : shared(segment);
  std::vector<int> out(static_cast<std::size_t>(last - first + 1));
  std::iota(out.begin(), out.end(), first);
  return out;
}

std::vector<int> Fence::unshared_in(int segment) const {
  std::vector<int> out;
  for (int k : segment_elements(segment)) {
    if (k != shared(segment - 1) && k != shared(segment)) out.push_back(k);
  }
  // zigzag order runs upward on ascending segments and downward otherwise
  if (!ascending(segment)) std::reverse(out.begin(), out.end());
  return out;
}

int Fence::unshared(int i, int j) const {
  if (i < 1 || i > segments() || j < 1) return kAbsent;
  const auto members = unshared_in(i);
  return j <= static_cast<int>(members.size()) ? members[static_cast<std::size_t>(j - 1)] : kAbsent;
}

int Fence::peak_of(int segment) const {
  // ascending segments end in s_i, descending ones start at s_{i-1}
  return ascending(segment) ? shared(segment) : shared(segment - 1);
}

int Fence::valley_of(int segment) const { return ascending(segment) ? shared(segment - 1) : shared(segment); }

Fence build_fence(const FenceShape& shape) { return Fence(shape); }

std::optional<Involution> self_dual_involution(const Fence& fence) {
  if (!fence.shape().palindromic()) return std::nullopt;
  const int n = fence.size();
  Involution kappa;
  kappa.perm.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) kappa.perm[static_cast<std::size_t>(k - 1)] = n + 1 - k;
  for (auto [low, high] : fence.covers()) {
    if (!fence.covered_by(kappa(high), kappa(low))) return std::nullopt;
  }
  return kappa;
}

}  // namespace fences
