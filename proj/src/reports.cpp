#include "fences/reports.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "fences/parallel.hpp"

namespace fences {

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"fence", opt(c.fence)},
          {"t", opt(c.t)},
          {"max_n", opt(c.max_n)},
          {"max_apt", opt(c.max_apt)},
          {"conjecture", opt(c.conjecture)},
          {"ideal", opt(c.ideal)},
          {"map", c.map},
          {"realm", c.realm},
          {"seed", c.seed},
          {"steps", c.steps},
          {"tolerances", {{"pl", c.tolerances.pl}, {"b", c.tolerances.b}, {"basis", c.tolerances.basis}}},
          {"step_cap", c.step_cap},
          {"max_label_bits", c.max_label_bits},
          {"output", opt(c.output)},
          {"trace", opt(c.trace)},
          {"cache_dir", opt(c.cache_dir)},
          {"use_cache", c.use_cache},
          {"workers", c.workers}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("run config must be a JSON object");
  RunConfig c;
  read(j, "command", c.command);
  read_opt(j, "fence", c.fence);
  read_opt(j, "t", c.t);
  read_opt(j, "max_n", c.max_n);
  read_opt(j, "max_apt", c.max_apt);
  read_opt(j, "conjecture", c.conjecture);
  read_opt(j, "ideal", c.ideal);
  read(j, "map", c.map);
  read(j, "realm", c.realm);
  read(j, "seed", c.seed);
  read(j, "steps", c.steps);
  if (auto it = j.find("tolerances"); it != j.end() && it->is_object()) {
    read(*it, "pl", c.tolerances.pl);
    read(*it, "b", c.tolerances.b);
    read(*it, "basis", c.tolerances.basis);
  }
  read(j, "step_cap", c.step_cap);
  read(j, "max_label_bits", c.max_label_bits);
  read_opt(j, "output", c.output);
  read_opt(j, "trace", c.trace);
  read_opt(j, "cache_dir", c.cache_dir);
  read(j, "use_cache", c.use_cache);
  read(j, "workers", c.workers);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  return run_config_from_json(nlohmann::json::parse(in));
}

void save_run_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
  out << to_json(c).dump(2) << '\n';
}

std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("FENCES_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "fences";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "fences";
  }
  return ".fences-cache";
}

ResultCache::ResultCache(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

std::filesystem::path ResultCache::file_for(const std::string& op) const { return dir_ / (op + ".jsonl"); }

void ResultCache::load(const std::string& op) {
  auto [slot, fresh] = entries_.try_emplace(op);
  if (!fresh) return;
  std::ifstream in(file_for(op));
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("version", "") != kVersionTag || j.value("op", "") != op) {
      continue;
    }
    slot->second[j.at("fence").get<std::string>()] = j.at("value");
  }
}

std::optional<nlohmann::json> ResultCache::get(const std::string& fence, const std::string& op) {
  if (!enabled_) return std::nullopt;
  std::lock_guard lock(mutex_);
  load(op);
  const auto& table = entries_[op];
  auto it = table.find(fence);
  if (it == table.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void ResultCache::put(const std::string& fence, const std::string& op, const nlohmann::json& value) {
  if (!enabled_) return;
  std::lock_guard lock(mutex_);
  load(op);
  entries_[op][fence] = value;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  std::ofstream out(file_for(op), std::ios::app);
  if (!out) return;  // an unwritable cache only costs time
  out << nlohmann::json{{"fence", fence}, {"op", op}, {"version", kVersionTag}, {"value", value}}.dump() << '\n';
}

// ---- dims ----

std::vector<SpaceReport> sweep_dims(const std::vector<FenceShape>& shapes, unsigned workers, ResultCache* cache) {
  return parallel_map(shapes, workers, [cache](const FenceShape& shape) {
    const std::string key = shape.to_string();
    if (cache) {
      if (auto hit = cache->get(key, "dims")) return space_report_from_json(*hit);
    }
    SpaceReport r = space_dims(build_fence(shape));
    if (cache) cache->put(key, "dims", to_json(r));
    return r;
  });
}

DimsSummary summarize(const std::vector<SpaceReport>& reports) {
  DimsSummary s;
  for (const auto& r : reports) {
    ++s.fences;
    s.single_orbit += r.single_orbit();
    s.ih_equals_it += r.ih_equals_it();
    s.formula_mismatches += r.dim_it != r.formula || r.dim_at != r.formula;
    s.ih_ah_mismatches += r.dim_ih != r.dim_ah;
  }
  return s;
}

nlohmann::json to_json(const DimsSummary& s) {
  return {{"fences", s.fences},
          {"single_orbit", s.single_orbit},
          {"ih_equals_it", s.ih_equals_it},
          {"formula_mismatches", s.formula_mismatches},
          {"ih_ah_mismatches", s.ih_ah_mismatches}};
}

std::string dims_csv(const std::vector<SpaceReport>& reports) {
  std::ostringstream out;
  out << "n,t,ideals,orbits,dim_IT,dim_AT,dim_IH,dim_AH,single_orbit,IH_eq_IT,fence\n";
  for (const auto& r : reports) {
    out << r.n << ',' << r.t << ',' << r.ideals << ',' << r.orbits << ',' << r.dim_it << ',' << r.dim_at << ','
        << r.dim_ih << ',' << r.dim_ah << ',' << (r.single_orbit() ? 1 : 0) << ',' << (r.ih_equals_it() ? 1 : 0)
        << ",\"" << r.shape.to_string() << "\"\n";
  }
  return out.str();
}

// ---- verify suites ----

namespace {

std::string at_ideal(const Ideal& ideal) { return " at " + to_string(ideal); }

}  // namespace

SuiteResult basis_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                        IndicatorKind kind) {
  SuiteResult s{kind == IndicatorKind::Ideal ? "ideal-basis" : "antichain-basis"};
  try {
    const auto entries = kind == IndicatorKind::Ideal ? basis_bi(fence, index) : basis_ba(fence, index);
    for (const auto& e : entries) {
      const auto average = homomesy_constant(e.stat.evaluate(fence, index), orbits);
      s.record(average && *average == e.cert.constant,
               "orbit averages of the entry at x" + std::to_string(e.element) + " disagree with its certificate");
    }
  } catch (const CertificateMismatch& e) {
    s.record(false, e.what());
  }
  return s;
}

SuiteResult toggle_orbit_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits) {
  SuiteResult s{"toggle-orbit-sums"};
  std::vector<std::size_t> image(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) image[i] = index.position(rowmotion(fence, index[i]));
  for (int p = 1; p <= fence.size(); ++p) {
    const StatFn t = togg(fence, index, p);
    for (std::size_t o = 0; o < orbits.count(); ++o) {
      s.record(sgn(t.sum_over(orbits.orbits[o])) == 0,
               "T_" + std::to_string(p) + " sums to " + to_string(t.sum_over(orbits.orbits[o])) + " on orbit " +
                   std::to_string(o));
    }
    const StatFn plus = togg_plus(fence, index, p);
    const StatFn minus = togg_minus(fence, index, p);
    for (std::size_t i = 0; i < index.size(); ++i) {
      s.record(plus[i] == minus[image[i]], "T+_" + std::to_string(p) + " != T-_" + std::to_string(p) +
                                               " after rowmotion" + at_ideal(index[i]));
    }
  }
  return s;
}

SuiteResult dictionary_suite(const Fence& fence, const IdealIndex& index) {
  SuiteResult s{"dictionary"};
  for (int p = 1; p <= fence.size(); ++p) {
    const StatFn hat = chi_hat(fence, index, p);
    const StatFn anti = chi(fence, index, p);
    const StatFn lhs = dict_oic_to_ac(fence, p).evaluate(fence, index);
    const StatFn rhs = dict_ac_to_oic(fence, p).evaluate(fence, index);
    for (std::size_t i = 0; i < index.size(); ++i) {
      s.record(lhs[i] == hat[i], "ideal indicator of x" + std::to_string(p) + " mismatched" + at_ideal(index[i]));
      s.record(rhs[i] == anti[i],
               "antichain indicator of x" + std::to_string(p) + " mismatched" + at_ideal(index[i]));
    }
  }
  return s;
}

SuiteResult recombination_suite(const Fence& fence, const IdealIndex& index) {
  SuiteResult s{"recombination"};
  std::set<Ideal> images;
  for (const Ideal& ideal : index) {
    try {
      const Ideal r = recombination(fence, ideal);
      images.insert(r);
      s.record(promotion(fence, r) == recombination(fence, rowmotion(fence, ideal)),
               "promotion of R does not match R of rowmotion" + at_ideal(ideal));
    } catch (const NotAnIdeal& e) {
      s.record(false, e.what());
    }
  }
  s.record(images.size() == index.size(), "recombination is not injective");
  try {
    const auto promotion_orbits = orbit_decomposition(fence, index, DynamicsMap::Promotion);
    for (const auto& e : basis_bi(fence, index)) {
      const auto average = homomesy_constant(e.stat.evaluate(fence, index), promotion_orbits);
      s.record(average && *average == e.cert.constant,
               "ideal basis entry at x" + std::to_string(e.element) + " is not homomesic under promotion");
    }
  } catch (const CertificateMismatch& e) {
    s.record(false, e.what());
  }
  return s;
}

SuiteResult specialization_suite(const Fence& fence, const IdealIndex& index) {
  SuiteResult s{"specialization"};
  std::vector<StatFn> toggles;
  for (int p = 1; p <= fence.size(); ++p) toggles.push_back(togg(fence, index, p));
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Ideal ideal = index[i];
    const ExactLabeling pi = indicator_labeling(fence, ideal);
    s.record(pl_rowmotion(fence, pi) == indicator_labeling(fence, rowmotion(fence, ideal)),
             "PL rowmotion differs from rowmotion" + at_ideal(ideal));
    for (int p = 1; p <= fence.size(); ++p) {
      s.record(lifted_chi_hat(fence, pi, p) == (ideal.contains(p) ? 1 : 0),
               "lifted ideal indicator of x" + std::to_string(p) + " differs" + at_ideal(ideal));
      s.record(togg_lift(fence, pi, p, ToggleSign::Net) == toggles[static_cast<std::size_t>(p - 1)][i],
               "lifted T_" + std::to_string(p) + " differs" + at_ideal(ideal));
    }
  }
  return s;
}

SuiteResult antichain_rank_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits) {
  SuiteResult s{"antichain-toggle-rank"};
  const std::size_t r = antichain_toggle_rank(fence, index);
  s.record(r == index.size() - orbits.count(), "rank " + std::to_string(r) + ", expected " +
                                                   std::to_string(index.size() - orbits.count()));
  return s;
}

SuiteResult birational_suite(const Fence& fence, const VerifyOptions& options) {
  SuiteResult s{"birational-identities"};
  const ExactLabeling b = random_labeling(fence, Realm::Birational, options.seed);
  const ExactLabeling pl = random_labeling(fence, Realm::PiecewiseLinear, options.seed);
  const Rational g = gamma(fence, b);
  for (int p = 1; p <= fence.size(); ++p) {
    const std::string at = " at x" + std::to_string(p);
    const ExactLabeling once = b_toggle(fence, b, p);
    s.record(b_toggle(fence, once, p) == b, "birational toggle is not an involution" + at);
    s.record(gamma(fence, once) == g, "gamma changes under a single toggle" + at);
    s.record(pl_toggle(fence, pl_toggle(fence, pl, p), p) == pl, "PL toggle is not an involution" + at);
  }
  auto absorb = [&s](const BSuiteReport& r, const std::string& realm) {
    if (r.incomplete) s.record(false, realm + ": " + *r.incomplete);
    s.record(r.gamma_ok && r.adjacency_ok && r.telescoping_ok, realm + ": " + r.witness);
  };
  absorb(exact_b_suite(fence, b, options.gamma_steps, options.telescoping_n, options.limits), "birational");
  absorb(exact_pl_telescoping(fence, pl, options.telescoping_n), "piecewise-linear");
  return s;
}

bool FenceVerification::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

nlohmann::json to_json(const FenceVerification& v) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : v.suites) suites.push_back(to_json(s));
  return {{"fence", v.shape.to_string()}, {"passed", v.passed()}, {"suites", suites}};
}

FenceVerification verify_fence(const Fence& fence, const VerifyOptions& options) {
  const IdealIndex index = enumerate_ideals(fence);
  const OrbitDecomposition orbits = orbit_decomposition(fence, index, DynamicsMap::Rowmotion);
  FenceVerification v{fence.shape(), {}};
  v.suites.push_back(basis_suite(fence, index, orbits, IndicatorKind::Ideal));
  v.suites.push_back(basis_suite(fence, index, orbits, IndicatorKind::Antichain));
  v.suites.push_back(toggle_orbit_suite(fence, index, orbits));
  v.suites.push_back(dictionary_suite(fence, index));
  if (self_dual_involution(fence)) {
    for (auto& s : verify_self_dual_suite(fence)) v.suites.push_back(std::move(s));
  }
  const auto& parts = fence.shape().parts();
  const bool equal_parts = std::all_of(parts.begin(), parts.end(), [&](int a) { return a == parts.front(); });
  if (equal_parts && fence.segments() % 2 == 1) {
    SuiteResult s{"peak-valley-certificate"};
    try {
      peak_valley_cardinality_certificate(parts.front(), fence.segments());
      s.record(true, "");
    } catch (const std::logic_error& e) {
      s.record(false, e.what());
    }
    v.suites.push_back(std::move(s));
  }
  if (equal_parts && fence.segments() == 3) {
    SuiteResult s{"three-segment-identity"};
    const IdentityCheck check = verify_three_segment_peak_valley_identity(parts.front());
    s.record(check.holds, check.witness ? "sides differ" + at_ideal(*check.witness) : "identity fails");
    v.suites.push_back(std::move(s));
  }
  v.suites.push_back(recombination_suite(fence, index));
  v.suites.push_back(specialization_suite(fence, index));
  v.suites.push_back(birational_suite(fence, options));
  if (fence.size() <= options.antichain_rank_max_n) v.suites.push_back(antichain_rank_suite(fence, index, orbits));
  return v;
}

std::vector<FenceVerification> verify_sweep(const std::vector<FenceShape>& shapes, const VerifyOptions& options,
                                            unsigned workers) {
  return parallel_map(shapes, workers,
                      [&options](const FenceShape& shape) { return verify_fence(build_fence(shape), options); });
}

std::map<std::string, std::pair<std::size_t, std::size_t>> suite_tally(const std::vector<FenceVerification>& runs) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& run : runs) {
    for (const auto& s : run.suites) {
      auto& [passed, total] = tally[s.name];
      passed += s.passed;
      ++total;
    }
  }
  return tally;
}

// ---- orbit ----

std::string format_orbit(const Fence& fence, const std::vector<Ideal>& orbit, DynamicsMap map) {
  std::ostringstream out;
  out << fence.to_string() << ' ' << to_string(map) << " orbit of size " << orbit.size() << '\n';
  for (const Ideal& ideal : orbit) out << to_string(ideal) << '\n';
  return out.str();
}

// ---- lifted ----

namespace {

struct LiftedTarget {
  std::string name;
  LiftedStat stat;
  Rational target;  // additive target (PL) or multiplicative target (B)
  double tolerance;
};

double log_of(const Rational& q) {
  long num_exp = 0, den_exp = 0;
  const double num = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return std::log(num / den) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

Rational power(const Rational& q, const Rational& e) {
  Rational out = 1;
  const long k = e.get_num().get_si();
  for (long i = 0; i < std::labs(k); ++i) out *= q;
  return k < 0 ? Rational(1 / out) : out;
}

std::vector<LiftedTarget> lifted_targets(const Fence& fence, const ExactLabeling& pi, const Tolerances& tol) {
  const bool pl = pi.realm == Realm::PiecewiseLinear;
  const Rational span = pl ? Rational(pi.omega - pi.alpha) : Rational(pi.omega / pi.alpha);
  auto scaled = [&](const Rational& c) { return pl ? Rational(c * span) : power(span, c); };
  std::vector<LiftedTarget> out;
  for (int p = 1; p <= fence.size(); ++p) {
    out.push_back({"T_" + std::to_string(p), LiftedStat::toggle(p), pl ? Rational(0) : Rational(1),
                   pl ? tol.pl : tol.b});
  }
  const IdealIndex index = enumerate_ideals(fence);
  for (const auto& e : basis_ba(fence, index)) {
    out.push_back({"antichain basis x" + std::to_string(e.element), LiftedStat::from_expr(e.stat, pi.realm),
                   scaled(e.cert.constant), tol.basis});
  }
  for (const auto& e : basis_bi(fence, index)) {
    out.push_back({"ideal basis x" + std::to_string(e.element), LiftedStat::from_expr(e.stat, pi.realm),
                   scaled(e.cert.constant), tol.basis});
  }
  return out;
}

}  // namespace

bool LiftedReport::passed() const {
  return !exact_stopped && (!identities || identities->passed()) && (!bounds || bounds->within) &&
         std::all_of(stats.begin(), stats.end(), [](const LiftedStatReport& s) { return s.within; });
}

nlohmann::json to_json(const LiftedReport& r) {
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : r.stats) {
    stats.push_back({{"statistic", s.name},
                     {"target", s.target},
                     {"mean", s.mean},
                     {"exact", s.exact},
                     {"within", s.within},
                     {"tolerance", s.tolerance}});
  }
  nlohmann::json j = {{"fence", r.fence.to_string()},
                      {"realm", to_string(r.realm)},
                      {"seed", r.seed},
                      {"steps", r.steps},
                      {"order", opt(r.order)},
                      {"order_searched", r.order_searched},
                      {"statistics", stats},
                      {"passed", r.passed()}};
  if (r.exact_stopped) j["exact_stopped"] = *r.exact_stopped;
  if (r.identities) j["identities"] = to_json(*r.identities);
  if (r.bounds) {
    j["bounds"] = {{"observed_min", static_cast<double>(r.bounds->observed_min)},
                   {"observed_max", static_cast<double>(r.bounds->observed_max)},
                   {"lower_bound", static_cast<double>(r.bounds->lower_bound)},
                   {"upper_bound", static_cast<double>(r.bounds->upper_bound)},
                   {"within", r.bounds->within}};
  }
  return j;
}

LiftedReport run_lifted(const Fence& fence, const RunConfig& config, std::ostream* trace) {
  if (config.steps == 0) throw std::invalid_argument("--steps must be positive");
  const Realm realm = parse_realm(config.realm);
  const ExactLimits limits{config.step_cap, config.max_label_bits};
  const ExactLabeling start = random_labeling(fence, realm, config.seed);
  LiftedReport r{.fence = fence.shape(), .realm = realm, .seed = config.seed, .steps = config.steps};

  // exact trace and order search; states are kept only until the period closes
  std::vector<ExactLabeling> period{start};
  ExactLabeling cur = start;
  if (trace) *trace << trace_line(0, cur).dump() << '\n';
  for (std::size_t i = 1; i <= config.steps; ++i) {
    try {
      cur = exact_rowmotion_step(fence, cur, i, limits);
    } catch (const StepCapExceeded& e) {
      r.exact_stopped = e.what();
      break;
    }
    r.order_searched = i;
    if (trace) *trace << trace_line(i, cur).dump() << '\n';
    if (!r.order) {
      if (cur == start) r.order = i;
      else period.push_back(cur);
    }
  }
  if (!r.order) period.clear();

  if (realm == Realm::Birational) {
    r.identities = exact_b_suite(fence, start, std::min<std::size_t>(config.steps, 50),
                                 std::min<std::size_t>(config.steps, 30), limits);
    r.bounds = boundedness_monitor(fence, start, config.steps);
  } else {
    r.identities = exact_pl_telescoping(fence, start, std::min<std::size_t>(config.steps, 30));
  }

  for (const auto& target : lifted_targets(fence, start, config.tolerances)) {
    LiftedStatReport s{.name = target.name, .target = to_string(target.target), .tolerance = target.tolerance};
    if (r.order) {
      // exact average over one full period
      const auto k = static_cast<long>(period.size());
      s.exact = true;
      if (realm == Realm::PiecewiseLinear) {
        Rational sum = 0;
        for (const auto& pi : period) sum += target.stat.pl(fence, pi);
        const Rational mean = sum / Rational(k);
        s.mean = mean.get_d();
        s.within = mean == target.target;
      } else {
        Rational product = 1;
        for (const auto& pi : period) product *= target.stat.b(fence, pi);
        s.within = product == power(target.target, Rational(k));
        s.mean = std::exp(log_of(product) / static_cast<double>(k));
      }
    } else {
      const CesaroEstimate e = cesaro_homomesy_estimate(fence, target.stat, start, config.steps);
      s.mean = static_cast<double>(e.mean);
      s.within = std::abs(s.mean - target.target.get_d()) < target.tolerance;
    }
    r.stats.push_back(std::move(s));
  }
  return r;
}

}  // namespace fences
