#include "fences/lifted.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <concepts>
#include <random>

namespace fences {

std::string to_string(Realm realm) { return realm == Realm::PiecewiseLinear ? "piecewise-linear" : "birational"; }

Realm parse_realm(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "pl" || s == "piecewise-linear" || s == "piecewise_linear") return Realm::PiecewiseLinear;
  if (s == "b" || s == "birational") return Realm::Birational;
  throw std::invalid_argument("unknown realm '" + std::string(text) + "' (expected pl or birational)");
}

std::pair<Rational, Rational> default_boundary(Realm realm) {
  return realm == Realm::PiecewiseLinear ? std::pair<Rational, Rational>{0, 1} : std::pair<Rational, Rational>{1, 2};
}

ExactLabeling make_labeling(const Fence& fence, Realm realm, std::vector<Rational> values, Rational alpha,
                            Rational omega) {
  if (values.size() != static_cast<std::size_t>(fence.size())) {
    throw std::invalid_argument("labeling has " + std::to_string(values.size()) + " values, fence has " +
                                std::to_string(fence.size()) + " elements");
  }
  if (realm == Realm::Birational) {
    auto nonpositive = [](const Rational& q) { return sgn(q) <= 0; };
    if (nonpositive(alpha) || nonpositive(omega) || std::any_of(values.begin(), values.end(), nonpositive)) {
      throw std::invalid_argument("birational labelings must be strictly positive");
    }
  }
  return ExactLabeling{realm, std::move(values), std::move(alpha), std::move(omega)};
}

ExactLabeling indicator_labeling(const Fence& fence, Ideal ideal) {
  std::vector<Rational> values(static_cast<std::size_t>(fence.size()));
  for (int p = 1; p <= fence.size(); ++p) values[static_cast<std::size_t>(p - 1)] = ideal.contains(p) ? 0 : 1;
  return make_labeling(fence, Realm::PiecewiseLinear, std::move(values), 0, 1);
}

ExactLabeling random_labeling(const Fence& fence, Realm realm, std::uint64_t seed, std::optional<Rational> alpha,
                              std::optional<Rational> omega) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(fence.size()));
  for (int p = 1; p <= fence.size(); ++p) {
    const auto m = static_cast<long>(rng() % 20 + 1);
    const auto k = static_cast<long>(rng() % 20 + 1);
    values.push_back(Rational(m) / k);
  }
  const auto [a, w] = default_boundary(realm);
  return make_labeling(fence, realm, std::move(values), alpha.value_or(a), omega.value_or(w));
}

FloatLabeling to_float(const ExactLabeling& pi) {
  FloatLabeling out{pi.realm, {}, static_cast<long double>(pi.alpha.get_d()),
                    static_cast<long double>(pi.omega.get_d())};
  out.values.reserve(pi.values.size());
  for (const auto& q : pi.values) out.values.push_back(static_cast<long double>(q.get_d()));
  return out;
}

namespace {

template <typename T>
T min_up(const Fence& fence, const Labeling<T>& pi, int p) {
  const auto& up = fence.upper_covers(p);
  if (up.empty()) return pi.omega;
  T best = pi(up.front());
  for (int r : up) {
    if (pi(r) < best) best = pi(r);
  }
  return best;
}

template <typename T>
T max_down(const Fence& fence, const Labeling<T>& pi, int p) {
  const auto& down = fence.lower_covers(p);
  if (down.empty()) return pi.alpha;
  T best = pi(down.front());
  for (int r : down) {
    if (pi(r) > best) best = pi(r);
  }
  return best;
}

template <typename T>
T sum_down(const Fence& fence, const Labeling<T>& pi, int p) {
  const auto& down = fence.lower_covers(p);
  if (down.empty()) return pi.alpha;
  T s = 0;
  for (int r : down) s += pi(r);
  return s;
}

template <typename T>
T sum_inverse_up(const Fence& fence, const Labeling<T>& pi, int p) {
  const auto& up = fence.upper_covers(p);
  if (up.empty()) return T(1) / pi.omega;
  T s = 0;
  for (int r : up) s += T(1) / pi(r);
  return s;
}

template <typename T>
T b_plus(const Fence& fence, const Labeling<T>& pi, int p) {
  return pi(p) / sum_down(fence, pi, p);
}

template <typename T>
T b_minus(const Fence& fence, const Labeling<T>& pi, int p) {
  return T(1) / (pi(p) * sum_inverse_up(fence, pi, p));
}

}  // namespace

template <typename T>
Labeling<T> pl_toggle(const Fence& fence, Labeling<T> pi, int p) {
  fence.check_element(p);
  pi(p) = min_up(fence, pi, p) + max_down(fence, pi, p) - pi(p);
  return pi;
}

template <typename T>
Labeling<T> b_toggle(const Fence& fence, Labeling<T> pi, int p) {
  fence.check_element(p);
  pi(p) = sum_down(fence, pi, p) / (pi(p) * sum_inverse_up(fence, pi, p));
  return pi;
}

template <typename T>
Labeling<T> lifted_toggle(const Fence& fence, Labeling<T> pi, int p) {
  return pi.realm == Realm::PiecewiseLinear ? pl_toggle(fence, std::move(pi), p) : b_toggle(fence, std::move(pi), p);
}

template <typename T>
Labeling<T> pl_rowmotion(const Fence& fence, Labeling<T> pi) {
  const auto& order = fence.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int p = *it;
    pi(p) = min_up(fence, pi, p) + max_down(fence, pi, p) - pi(p);
  }
  return pi;
}

template <typename T>
Labeling<T> b_rowmotion(const Fence& fence, Labeling<T> pi) {
  const auto& order = fence.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int p = *it;
    pi(p) = sum_down(fence, pi, p) / (pi(p) * sum_inverse_up(fence, pi, p));
  }
  return pi;
}

template <typename T>
Labeling<T> lifted_rowmotion(const Fence& fence, Labeling<T> pi) {
  return pi.realm == Realm::PiecewiseLinear ? pl_rowmotion(fence, std::move(pi)) : b_rowmotion(fence, std::move(pi));
}

template <typename T>
T gamma(const Fence& fence, const Labeling<T>& pi) {
  T total = 0;
  for (const auto& [low, high] : fence.covers()) total += pi(low) / pi(high);
  for (int p = 1; p <= fence.size(); ++p) {
    if (fence.lower_covers(p).empty()) total += pi.alpha / pi(p);
    if (fence.upper_covers(p).empty()) total += pi(p) / pi.omega;
  }
  return total;
}

template <typename T>
T togg_lift(const Fence& fence, const Labeling<T>& pi, int p, ToggleSign sign) {
  fence.check_element(p);
  if (pi.realm == Realm::PiecewiseLinear) {
    const T plus = pi(p) - max_down(fence, pi, p);
    const T minus = min_up(fence, pi, p) - pi(p);
    return sign == ToggleSign::Plus ? plus : sign == ToggleSign::Minus ? minus : T(plus - minus);
  }
  const T plus = b_plus(fence, pi, p);
  const T minus = b_minus(fence, pi, p);
  return sign == ToggleSign::Plus ? plus : sign == ToggleSign::Minus ? minus : T(plus / minus);
}

template <typename T>
T lifted_chi_hat(const Fence& fence, const Labeling<T>& pi, int p) {
  fence.check_element(p);
  return pi.realm == Realm::PiecewiseLinear ? T(pi.omega - pi(p)) : T(pi.omega / pi(p));
}

template <typename T>
T lifted_chi(const Fence& fence, const Labeling<T>& pi, int p) {
  return togg_lift(fence, pi, p, ToggleSign::Minus);
}

#define FENCES_INSTANTIATE(T)                                                          \
  template Labeling<T> pl_toggle(const Fence&, Labeling<T>, int);                      \
  template Labeling<T> b_toggle(const Fence&, Labeling<T>, int);                       \
  template Labeling<T> lifted_toggle(const Fence&, Labeling<T>, int);                  \
  template Labeling<T> pl_rowmotion(const Fence&, Labeling<T>);                        \
  template Labeling<T> b_rowmotion(const Fence&, Labeling<T>);                         \
  template Labeling<T> lifted_rowmotion(const Fence&, Labeling<T>);                    \
  template T gamma(const Fence&, const Labeling<T>&);                                  \
  template T togg_lift(const Fence&, const Labeling<T>&, int, ToggleSign);             \
  template T lifted_chi_hat(const Fence&, const Labeling<T>&, int);                    \
  template T lifted_chi(const Fence&, const Labeling<T>&, int);

FENCES_INSTANTIATE(Rational)
FENCES_INSTANTIATE(long double)
#undef FENCES_INSTANTIATE

namespace {

Rational integer_power(const Rational& q, long e) {
  Rational base = e < 0 ? Rational(1 / q) : q;
  const auto k = static_cast<unsigned long>(e < 0 ? -e : e);
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), k);
  out.canonicalize();
  return out;
}

std::string describe(const StatExpr& e) {
  std::string s;
  auto term = [&](const Rational& c, const std::string& sym) {
    if (!s.empty()) s += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) s += "-";
    const Rational a = abs(c);
    if (a != 1) s += to_string(a) + "*";
    s += sym;
  };
  for (const auto& [p, c] : e.ideal) term(c, "chi_hat_" + std::to_string(p));
  for (const auto& [p, c] : e.antichain) term(c, "chi_" + std::to_string(p));
  return s.empty() ? "0" : s;
}

}  // namespace

LiftedStat LiftedStat::toggle(int p) {
  LiftedStat s;
  s.toggle_ = p;
  s.name_ = "T_" + std::to_string(p);
  return s;
}

LiftedStat LiftedStat::from_expr(const StatExpr& expr, Realm realm) {
  if (!expr.toggle.empty() || sgn(expr.constant) != 0) {
    throw std::invalid_argument("only indicator combinations lift; drop toggle terms and the constant");
  }
  if (realm == Realm::Birational) {
    for (const auto* terms : {&expr.ideal, &expr.antichain}) {
      for (const auto& [p, c] : *terms) {
        if (!is_integer(c)) {
          throw NonIntegerExponent("coefficient " + to_string(c) + " of element " + std::to_string(p) +
                                   " is not an integer; clear denominators first");
        }
      }
    }
  }
  LiftedStat s;
  s.expr_ = expr;
  s.expr_.prune();
  s.name_ = describe(s.expr_);
  return s;
}

Rational LiftedStat::pl(const Fence& fence, const ExactLabeling& pi) const {
  if (toggle_ != kAbsent) return togg_lift(fence, pi, toggle_, ToggleSign::Net);
  Rational v = 0;
  for (const auto& [p, c] : expr_.ideal) v += c * lifted_chi_hat(fence, pi, p);
  for (const auto& [p, c] : expr_.antichain) v += c * lifted_chi(fence, pi, p);
  return v;
}

long double LiftedStat::pl(const Fence& fence, const FloatLabeling& pi) const {
  if (toggle_ != kAbsent) return togg_lift(fence, pi, toggle_, ToggleSign::Net);
  long double v = 0;
  for (const auto& [p, c] : expr_.ideal) v += static_cast<long double>(c.get_d()) * lifted_chi_hat(fence, pi, p);
  for (const auto& [p, c] : expr_.antichain) v += static_cast<long double>(c.get_d()) * lifted_chi(fence, pi, p);
  return v;
}

Rational LiftedStat::b(const Fence& fence, const ExactLabeling& pi) const {
  if (toggle_ != kAbsent) return togg_lift(fence, pi, toggle_, ToggleSign::Net);
  Rational v = 1;
  for (const auto& [p, c] : expr_.ideal) v *= integer_power(lifted_chi_hat(fence, pi, p), c.get_num().get_si());
  for (const auto& [p, c] : expr_.antichain) v *= integer_power(lifted_chi(fence, pi, p), c.get_num().get_si());
  return v;
}

long double LiftedStat::b_log(const Fence& fence, const FloatLabeling& pi) const {
  if (toggle_ != kAbsent) return std::log(togg_lift(fence, pi, toggle_, ToggleSign::Net));
  long double v = 0;
  for (const auto& [p, c] : expr_.ideal) {
    v += static_cast<long double>(c.get_d()) * std::log(lifted_chi_hat(fence, pi, p));
  }
  for (const auto& [p, c] : expr_.antichain) {
    v += static_cast<long double>(c.get_d()) * std::log(lifted_chi(fence, pi, p));
  }
  return v;
}

std::size_t label_bits(const ExactLabeling& pi) {
  std::size_t most = 0;
  auto size = [](const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
  };
  for (const auto& q : pi.values) most = std::max(most, size(q));
  return most;
}

namespace {

void check_step(const ExactLabeling& pi, std::size_t step, const ExactLimits& limits) {
  if (pi.realm == Realm::Birational && step > limits.step_cap) {
    throw StepCapExceeded("exact birational iteration stopped at step " + std::to_string(step) + " (cap " +
                          std::to_string(limits.step_cap) + "); raise the cap explicitly to continue");
  }
}

void check_size(const ExactLabeling& pi, std::size_t step, const ExactLimits& limits) {
  if (pi.realm != Realm::Birational) return;
  const std::size_t bits = label_bits(pi);
  if (bits > limits.max_label_bits) {
    throw LabelSizeExceeded("exact birational labels reached " + std::to_string(bits) + " bits at step " +
                            std::to_string(step) + " (budget " + std::to_string(limits.max_label_bits) + " bits)");
  }
}

ExactLabeling exact_step(const Fence& fence, const ExactLabeling& pi, std::size_t step, const ExactLimits& limits) {
  check_step(pi, step, limits);
  ExactLabeling next = lifted_rowmotion(fence, pi);
  check_size(next, step, limits);
  return next;
}

}  // namespace

ExactLabeling exact_rowmotion_step(const Fence& fence, const ExactLabeling& pi, std::size_t step,
                                   ExactLimits limits) {
  return exact_step(fence, pi, step, limits);
}

std::vector<ExactLabeling> exact_trace(const Fence& fence, const ExactLabeling& start, std::size_t steps,
                                       ExactLimits limits) {
  std::vector<ExactLabeling> out{start};
  out.reserve(steps + 1);
  for (std::size_t i = 1; i <= steps; ++i) out.push_back(exact_step(fence, out.back(), i, limits));
  return out;
}

OrderResult detect_finite_order(const Fence& fence, const ExactLabeling& start, std::size_t max_iter,
                                ExactLimits limits) {
  OrderResult r;
  ExactLabeling cur = start;
  for (std::size_t i = 1; i <= max_iter; ++i) {
    cur = exact_step(fence, cur, i, limits);
    r.searched = i;
    if (cur == start) {
      r.order = i;
      break;
    }
  }
  return r;
}

namespace {

__extension__ using Wide = unsigned __int128;

/// Arithmetic in Z/P for a prime P below 2^63.
template <std::uint64_t P>
struct ModP {
  std::uint64_t v = 0;

  ModP() = default;
  ModP(long x) : v(static_cast<std::uint64_t>(((x % static_cast<long long>(P)) + static_cast<long long>(P)) %
                                              static_cast<long long>(P))) {}
  static ModP raw(std::uint64_t x) {
    ModP m;
    m.v = x;
    return m;
  }

  friend ModP operator+(ModP a, ModP b) { return raw((a.v + b.v) % P); }
  friend ModP operator-(ModP a, ModP b) { return raw((a.v + P - b.v) % P); }
  friend ModP operator*(ModP a, ModP b) {
    return raw(static_cast<std::uint64_t>(static_cast<Wide>(a.v) * b.v % P));
  }
  friend ModP operator/(ModP a, ModP b) {
    if (b.v == 0) throw std::domain_error("division by zero modulo " + std::to_string(P));
    return a * b.pow(P - 2);
  }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  bool operator==(const ModP&) const = default;

  ModP pow(std::uint64_t e) const {
    ModP out = raw(1), base = *this;
    for (; e; e >>= 1, base = base * base) {
      if (e & 1) out = out * base;
    }
    return out;
  }

  static ModP from(const Rational& q) {
    const auto num = mpz_fdiv_ui(q.get_num_mpz_t(), P);
    const auto den = mpz_fdiv_ui(q.get_den_mpz_t(), P);
    if (den == 0) throw std::domain_error("denominator vanishes modulo " + std::to_string(P));
    return raw(num) / raw(den);
  }
};

template <std::uint64_t P>
Labeling<ModP<P>> reduce(const ExactLabeling& pi) {
  Labeling<ModP<P>> out{pi.realm, {}, ModP<P>::from(pi.alpha), ModP<P>::from(pi.omega)};
  for (const auto& q : pi.values) out.values.push_back(ModP<P>::from(q));
  return out;
}

template <typename T>
T pl_plus(const Fence& fence, const Labeling<T>& pi, int p) {
  return pi(p) - max_down(fence, pi, p);
}

template <typename T>
T pl_minus(const Fence& fence, const Labeling<T>& pi, int p) {
  return min_up(fence, pi, p) - pi(p);
}

/// Walks the trace once. Birational: products of T_p = T+/T- telescope and
/// gamma is compared with its starting value. PL: sums of T+ - T- telescope.
template <typename T, typename Step>
BSuiteReport run_suite(const Fence& fence, Labeling<T> cur, std::size_t gamma_steps, std::size_t telescoping_n,
                       Step step) {
  const bool birational = cur.realm == Realm::Birational;
  const int n = fence.size();
  auto plus = [&](const Labeling<T>& pi, int p) {
    if constexpr (std::totally_ordered<T>) {
      if (!birational) return pl_plus(fence, pi, p);
    }
    return b_plus(fence, pi, p);
  };
  auto minus = [&](const Labeling<T>& pi, int p) {
    if constexpr (std::totally_ordered<T>) {
      if (!birational) return pl_minus(fence, pi, p);
    }
    return b_minus(fence, pi, p);
  };

  BSuiteReport r{.gamma_steps = gamma_steps, .telescoping_n = telescoping_n};
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && r.witness.empty()) r.witness = what;
    flag = false;
  };

  const std::size_t last = std::max(gamma_steps, telescoping_n == 0 ? 0 : telescoping_n - 1);
  const T gamma0 = birational ? gamma(fence, cur) : T(0);
  std::vector<T> minus0, acc, prev_plus;
  for (int p = 1; p <= n; ++p) {
    minus0.push_back(minus(cur, p));
    acc.push_back(birational ? T(1) : T(0));
  }
  for (std::size_t i = 0;; ++i) {
    if (birational && i > 0 && i <= gamma_steps) {
      ++r.checks;
      if (!(gamma(fence, cur) == gamma0)) fail(r.gamma_ok, "gamma changes at step " + std::to_string(i));
    }
    for (int p = 1; p <= n; ++p) {
      const auto k = static_cast<std::size_t>(p - 1);
      const T up = plus(cur, p);
      const T down = minus(cur, p);
      if (i > 0) {
        ++r.checks;
        if (!(prev_plus[k] == down)) {
          fail(r.adjacency_ok, "T+ at step " + std::to_string(i - 1) + " differs from T- at step " +
                                   std::to_string(i) + " for element " + std::to_string(p));
        }
      }
      if (i < telescoping_n) acc[k] = birational ? T(acc[k] * (up / down)) : T(acc[k] + (up - down));
      if (telescoping_n > 0 && i == telescoping_n - 1) {
        ++r.checks;
        const T expected = birational ? T(up / minus0[k]) : T(up - minus0[k]);
        if (!(acc[k] == expected)) {
          fail(r.telescoping_ok,
               "telescoping fails for element " + std::to_string(p) + " at N=" + std::to_string(telescoping_n));
        }
      }
      if (prev_plus.size() < static_cast<std::size_t>(n)) prev_plus.push_back(up);
      else prev_plus[k] = up;
    }
    r.steps_completed = i;
    if (i == last) break;
    try {
      cur = step(cur, i + 1);
    } catch (const StepCapExceeded& e) {
      r.incomplete = e.what();
      break;
    }
  }
  return r;
}

template <std::uint64_t P>
ResidueReport residue_run(const Fence& fence, const ExactLabeling& start, std::size_t gamma_steps,
                          std::size_t telescoping_n) {
  auto step = [&](const Labeling<ModP<P>>& pi, std::size_t) { return b_rowmotion(fence, pi); };
  return {P, run_suite(fence, reduce<P>(start), gamma_steps, telescoping_n, step)};
}

}  // namespace

BSuiteReport exact_b_suite(const Fence& fence, const ExactLabeling& start, std::size_t gamma_steps,
                           std::size_t telescoping_n, ExactLimits limits) {
  if (start.realm != Realm::Birational) throw std::invalid_argument("the birational suite needs a birational labeling");
  auto step = [&](const ExactLabeling& pi, std::size_t i) { return exact_step(fence, pi, i, limits); };
  return run_suite(fence, start, gamma_steps, telescoping_n, step);
}

BSuiteReport exact_pl_telescoping(const Fence& fence, const ExactLabeling& start, std::size_t n) {
  if (start.realm != Realm::PiecewiseLinear) throw std::invalid_argument("PL telescoping needs a PL labeling");
  auto step = [&](const ExactLabeling& pi, std::size_t) { return pl_rowmotion(fence, pi); };
  return run_suite(fence, start, 0, n, step);
}

std::vector<ResidueReport> residue_b_suite(const Fence& fence, const ExactLabeling& start, std::size_t gamma_steps,
                                           std::size_t telescoping_n) {
  if (start.realm != Realm::Birational) throw std::invalid_argument("the birational suite needs a birational labeling");
  return {residue_run<kResiduePrimes[0]>(fence, start, gamma_steps, telescoping_n),
          residue_run<kResiduePrimes[1]>(fence, start, gamma_steps, telescoping_n),
          residue_run<kResiduePrimes[2]>(fence, start, gamma_steps, telescoping_n)};
}

nlohmann::json to_json(const BSuiteReport& r) {
  nlohmann::json j = {{"gamma_steps", r.gamma_steps},     {"telescoping_n", r.telescoping_n},
                      {"steps_completed", r.steps_completed}, {"checks", r.checks},
                      {"gamma", r.gamma_ok},              {"adjacency", r.adjacency_ok},
                      {"telescoping", r.telescoping_ok},  {"passed", r.passed()}};
  if (r.incomplete) j["incomplete"] = *r.incomplete;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

CesaroEstimate cesaro_homomesy_estimate(const Fence& fence, const LiftedStat& stat, const ExactLabeling& start,
                                        std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("need at least one step");
  CesaroEstimate e{.realm = start.realm, .steps = steps};
  e.running.reserve(steps);
  if (start.realm == Realm::PiecewiseLinear) {
    ExactLabeling cur = start;
    Rational sum = 0;
    for (std::size_t i = 0; i < steps; ++i) {
      sum += stat.pl(fence, cur);
      e.running.push_back(static_cast<long double>(Rational(sum / Rational(static_cast<long>(i + 1))).get_d()));
      if (i + 1 < steps) cur = pl_rowmotion(fence, std::move(cur));
    }
    e.mean = e.running.back();
  } else {
    FloatLabeling cur = to_float(start);
    long double log_sum = 0;
    for (std::size_t i = 0; i < steps; ++i) {
      log_sum += stat.b_log(fence, cur);
      e.running.push_back(std::exp(log_sum / static_cast<long double>(i + 1)));
      if (i + 1 < steps) cur = b_rowmotion(fence, std::move(cur));
    }
    e.mean = e.running.back();
  }
  return e;
}

BoundednessReport boundedness_monitor(const Fence& fence, const ExactLabeling& start, std::size_t steps) {
  if (start.realm != Realm::Birational) throw std::invalid_argument("boundedness monitor needs a birational labeling");
  const int n = fence.size();
  // covers from each element to the added top / bottom along the longest chain
  std::vector<int> to_top(static_cast<std::size_t>(n) + 1, 1), to_bottom(static_cast<std::size_t>(n) + 1, 1);
  const auto& order = fence.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (int r : fence.upper_covers(*it)) to_top[*it] = std::max(to_top[*it], to_top[r] + 1);
  }
  for (int p : order) {
    for (int r : fence.lower_covers(p)) to_bottom[p] = std::max(to_bottom[p], to_bottom[r] + 1);
  }
  const int up_len = *std::max_element(to_top.begin() + 1, to_top.end());
  const int down_len = *std::max_element(to_bottom.begin() + 1, to_bottom.end());

  const auto g = static_cast<long double>(gamma(fence, start).get_d());
  const FloatLabeling f0 = to_float(start);
  BoundednessReport r;
  r.upper_bound = std::max(f0.omega, f0.omega * std::pow(g, static_cast<long double>(up_len)));
  r.lower_bound = std::min(f0.alpha, f0.alpha * std::pow(g, -static_cast<long double>(down_len)));
  r.observed_min = *std::min_element(f0.values.begin(), f0.values.end());
  r.observed_max = *std::max_element(f0.values.begin(), f0.values.end());
  FloatLabeling cur = f0;
  for (std::size_t i = 0; i < steps; ++i) {
    cur = b_rowmotion(fence, std::move(cur));
    for (long double v : cur.values) {
      r.observed_min = std::min(r.observed_min, v);
      r.observed_max = std::max(r.observed_max, v);
    }
  }
  constexpr long double slack = 1e-12L;
  r.within = r.observed_min >= r.lower_bound * (1 - slack) && r.observed_max <= r.upper_bound * (1 + slack);
  return r;
}

nlohmann::json trace_line(std::size_t step, const ExactLabeling& pi) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& q : pi.values) labels.push_back(to_fraction_string(q));
  return {{"step", step},
          {"realm", to_string(pi.realm)},
          {"alpha", to_fraction_string(pi.alpha)},
          {"omega", to_fraction_string(pi.omega)},
          {"labels", labels}};
}

nlohmann::json to_json(const CesaroEstimate& e, bool with_running) {
  nlohmann::json j = {{"realm", to_string(e.realm)},
                      {"steps", e.steps},
                      {"mean", static_cast<double>(e.mean)},
                      {"mean_kind", e.realm == Realm::PiecewiseLinear ? "arithmetic" : "geometric"}};
  if (with_running) {
    nlohmann::json run = nlohmann::json::array();
    for (long double v : e.running) run.push_back(static_cast<double>(v));
    j["running"] = run;
  }
  return j;
}

}  // namespace fences
