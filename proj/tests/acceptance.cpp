// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fences/parallel.hpp"
#include "fences/reports.hpp"

using namespace fences;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned workers() { return default_workers(); }

std::vector<FenceShape> shapes_where(int max_n, const std::function<bool(const FenceShape&)>& keep) {
  std::vector<FenceShape> out;
  for (const auto& s : shapes_up_to(max_n)) {
    if (keep(s)) out.push_back(s);
  }
  return out;
}

/// Runs a per-fence suite over shapes; returns the first witness if any.
Outcome over_fences(const std::vector<FenceShape>& shapes, const std::function<SuiteResult(const Fence&)>& suite) {
  const auto results = parallel_map(shapes, workers(), [&](const FenceShape& s) { return suite(Fence(s)); });
  std::size_t checks = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    checks += results[i].checks;
    if (!results[i].passed) return {false, shapes[i].to_string() + " " + results[i].name + ": " + results[i].witness};
  }
  return {true, std::to_string(shapes.size()) + " fences, " + std::to_string(checks) + " checks"};
}

Outcome four_cycle_orbit() {
  const Fence f(parse_fence("F(3,3,2)"));
  const std::string printed =
      format_orbit(f, orbit_through(f, parse_ideal(f, "{1,5,6}"), DynamicsMap::Rowmotion), DynamicsMap::Rowmotion);
  const std::string expected = "F(3,3,2) rowmotion orbit of size 4\n{1,5,6}\n{1,2,4,5,6,7}\n{1,2,3,4,5,6}\n{6,7}\n";
  return {printed == expected, "{1,5,6} -> {1,2,4,5,6,7} -> {1,2,3,4,5,6} -> {6,7}"};
}

const std::vector<SpaceReport>& all_dims_14() {
  static const std::vector<SpaceReport> reports = sweep_dims(shapes_up_to(14), workers());
  return reports;
}

Outcome dimension_formula() {
  const auto& reports = all_dims_14();
  for (const auto& r : reports) {
    if (r.dim_it != r.formula || r.dim_at != r.formula) {
      return {false, r.shape.to_string() + ": dim_IT=" + std::to_string(r.dim_it) + " dim_AT=" +
                         std::to_string(r.dim_at) + " formula=" + std::to_string(r.formula)};
    }
  }
  return {true, std::to_string(reports.size()) + " fences with n <= 14"};
}

Outcome basis_certificates() {
  return over_fences(shapes_up_to(12), [](const Fence& f) {
    SuiteResult s{"bases"};
    const IdealIndex index = enumerate_ideals(f);
    try {
      for (const auto& e : basis_bi(f, index)) s.record(e.cert.holds_for(f, index, e.stat.evaluate(f, index)), "BI");
      for (const auto& e : basis_ba(f, index)) s.record(e.cert.holds_for(f, index, e.stat.evaluate(f, index)), "BA");
    } catch (const CertificateMismatch& e) {
      s.record(false, e.what());
    }
    return s;
  });
}

Outcome segment_count_sweeps() {
  struct Row {
    int t, max_n;
    std::size_t fences, single, equal;
  };
  const Row rows[] = {{3, 20, 969, 234, 40}, {4, 20, 3876, 346, 188}, {7, 15, 3432, 2, 472}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& row : rows) {
    const DimsSummary s = summarize(sweep_dims(shapes_with_segments(row.t, row.max_n), workers()));
    const bool match = s.fences == row.fences && s.single_orbit == row.single && s.ih_equals_it == row.equal;
    ok &= match;
    detail << "t=" << row.t << ": " << s.fences << '/' << s.single_orbit << '/' << s.ih_equals_it
           << (match ? "" : " (mismatch)") << "; ";
  }
  return {ok, detail.str()};
}

Outcome homomesy_dims_agree() {
  const auto& reports = all_dims_14();
  for (const auto& r : reports) {
    if (r.dim_ih != r.dim_ah) {
      return {false, r.shape.to_string() + ": dim_IH=" + std::to_string(r.dim_ih) + " dim_AH=" +
                         std::to_string(r.dim_ah)};
    }
  }
  return {true, std::to_string(reports.size()) + " fences with n <= 14"};
}

Outcome antichain_rank() {
  return over_fences(shapes_up_to(10), [](const Fence& f) {
    const IdealIndex index = enumerate_ideals(f);
    return antichain_rank_suite(f, index, orbit_decomposition(f, index, DynamicsMap::Rowmotion));
  });
}

Outcome three_segment() {
  std::ostringstream detail;
  bool ok = true;
  for (int a = 2; a <= 4; ++a) {
    const IdentityCheck c = verify_three_segment_peak_valley_identity(a);
    ok &= c.holds;
    detail << "a=" << a << ' ' << (c.holds ? "holds" : "fails") << " (" << c.terms << " terms); ";
  }
  // the a = 3 display, written out term by term
  const Fence f(parse_fence("F(3,3,3)"));
  auto ac = [&](std::vector<int> e) { return make_antichain(f, e); };
  const AntichainCombination display = {
      {ac({1}), -1},       {ac({2}), -2},       {ac({3}), -3},      {ac({6}), -2},      {ac({7}), -2},
      {ac({8}), -1},       {ac({1, 6}), 3},     {ac({1, 7}), 3},    {ac({2, 6}), 3},    {ac({2, 7}), 3},
      {ac({2, 8}), 3},     {ac({3, 7}), 3},     {ac({3, 8}), 3},    {ac({1, 5, 7}), -3}, {ac({2, 4, 8}), -3}};
  const IdealIndex index = enumerate_ideals(f);
  const bool display_ok = evaluate(f, index, display) == chi(f, index, 3) - chi(f, index, 6) &&
                          three_segment_peak_valley_identity(f, 3) == display;
  ok &= display_ok;
  detail << "a=3 display " << (display_ok ? "matches" : "differs");
  return {ok, detail.str()};
}

Outcome self_dual() {
  const auto shapes =
      shapes_where(12, [](const FenceShape& s) { return s.palindromic() && s.segments() % 2 == 1; });
  return over_fences(shapes, [](const Fence& f) {
    SuiteResult all{"self-dual"};
    for (const auto& s : verify_self_dual_suite(f)) {
      all.checks += s.checks - 1;
      all.record(s.passed, s.name + ": " + s.witness);
    }
    return all;
  });
}

Outcome conjecture_scans() {
  std::ostringstream detail;
  bool ok = true;
  for (auto id : {Conjecture::C5_1, Conjecture::C5_2, Conjecture::C5_3}) {
    const auto reports = scan_conjecture(id, ScanRange{.max_apt = 8, .workers = workers()});
    std::size_t holding = 0;
    for (const auto& r : reports) holding += r.holds;
    ok &= holding == reports.size() && !reports.empty();
    detail << to_string(id) << ' ' << holding << '/' << reports.size() << "; ";
  }
  return {ok, detail.str()};
}

Outcome recombination_conjugacy() {
  return over_fences(shapes_up_to(12), [](const Fence& f) { return recombination_suite(f, enumerate_ideals(f)); });
}

Outcome birational_order() {
  std::ostringstream detail;
  bool ok = true;
  for (int a = 2; a <= 4; ++a) {
    const Fence f(FenceShape({a, a}));
    detail << "F(" << a << ',' << a << "):";
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto r = detect_finite_order(f, random_labeling(f, Realm::Birational, seed), 100);
      ok &= r.order && *r.order == static_cast<std::size_t>(a * (a + 1));
      detail << ' ' << (r.order ? std::to_string(*r.order) : "unknown");
    }
    detail << "; ";
  }
  return {ok, detail.str()};
}

Outcome exact_birational() {
  std::ostringstream detail;
  bool ok = true;
  for (const char* name : {"F(2,2,2)", "F(3,3,2)"}) {
    const Fence f(parse_fence(name));
    const ExactLabeling pi = random_labeling(f, Realm::Birational, 7);
    const BSuiteReport r = exact_b_suite(f, pi, 50, 30);
    ok &= r.passed();
    detail << name << " over Q: ";
    if (r.passed()) {
      detail << "gamma 50 steps, adjacency, telescoping N=30 hold";
    } else if (r.incomplete) {
      detail << "incomplete after " << r.steps_completed << " steps (" << *r.incomplete << ")";
    } else {
      detail << "fails: " << r.witness;
    }
    if (!r.passed()) {
      // not a substitute for the rational check, only a cross-check of the same identities
      std::size_t agree = 0;
      const auto residues = residue_b_suite(f, pi, 50, 30);
      for (const auto& m : residues) agree += m.suite.passed();
      detail << "; mod-p images agree for " << agree << '/' << residues.size() << " 61-63 bit primes";
    }
    detail << ". ";
  }
  return {ok, detail.str()};
}

Outcome specialization() {
  return over_fences(shapes_up_to(12), [](const Fence& f) { return specialization_suite(f, enumerate_ideals(f)); });
}

Outcome cesaro() {
  const Fence f(parse_fence("F(2,2,2)"));
  constexpr std::size_t N = 2000;
  constexpr std::uint64_t seed = 7;
  const IdealIndex index = enumerate_ideals(f);
  const ExactLabeling pl = random_labeling(f, Realm::PiecewiseLinear, seed);
  const ExactLabeling b = random_labeling(f, Realm::Birational, seed);
  double worst_pl = 0, worst_b = 0, worst_basis = 0;
  for (int p = 1; p <= f.size(); ++p) {
    worst_pl = std::max(worst_pl, std::abs(static_cast<double>(
                                      cesaro_homomesy_estimate(f, LiftedStat::toggle(p), pl, N).mean)));
    worst_b = std::max(worst_b, std::abs(static_cast<double>(
                                    cesaro_homomesy_estimate(f, LiftedStat::toggle(p), b, N).mean) - 1));
  }
  auto basis_check = [&](const std::vector<BasisEntry>& entries) {
    for (const auto& e : entries) {
      const double c = e.cert.constant.get_d();
      const double pl_target = c * Rational(pl.omega - pl.alpha).get_d();
      const double b_target = std::pow(Rational(b.omega / b.alpha).get_d(), c);
      const auto mpl = cesaro_homomesy_estimate(f, LiftedStat::from_expr(e.stat, Realm::PiecewiseLinear), pl, N);
      const auto mb = cesaro_homomesy_estimate(f, LiftedStat::from_expr(e.stat, Realm::Birational), b, N);
      worst_basis = std::max({worst_basis, std::abs(static_cast<double>(mpl.mean) - pl_target),
                              std::abs(static_cast<double>(mb.mean) - b_target)});
    }
  };
  basis_check(basis_ba(f, index));
  basis_check(basis_bi(f, index));
  const bool ok = worst_pl < 1e-3 && worst_b < 1e-3 && worst_basis < 1e-2;

  // the same checks over seeds 1..10, reported but not gating
  std::size_t seeds_ok = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    bool all = true;
    for (int p = 1; p <= f.size(); ++p) {
      all &= std::abs(static_cast<double>(cesaro_homomesy_estimate(
                 f, LiftedStat::toggle(p), random_labeling(f, Realm::PiecewiseLinear, s), N).mean)) < 1e-3;
      all &= std::abs(static_cast<double>(cesaro_homomesy_estimate(
                 f, LiftedStat::toggle(p), random_labeling(f, Realm::Birational, s), N).mean) - 1) < 1e-3;
    }
    seeds_ok += all;
  }
  std::ostringstream detail;
  detail << std::setprecision(3) << "seed 7, N=2000: max |T^PL mean| " << worst_pl << ", max |T^B gmean - 1| "
         << worst_b << ", max basis deviation " << worst_basis << "; T_p within 1e-3 for " << seeds_ok
         << "/10 seeds 1..10";
  return {ok, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"F(3,3,2) four-cycle orbit", four_cycle_orbit},
      {"dim_IT = dim_AT = n-(t-1) n<=14", dimension_formula},
      {"basis certificates n<=12", basis_certificates},
      {"t=3,4,7 sweep counts", segment_count_sweeps},
      {"dim_IH = dim_AH n<=14", homomesy_dims_agree},
      {"antichain toggle rank n<=10", antichain_rank},
      {"three-segment identity", three_segment},
      {"self-dual suite n<=12", self_dual},
      {"conjecture scans a+t<=8", conjecture_scans},
      {"recombination n<=12", recombination_conjugacy},
      {"birational order F(a,a)", birational_order},
      {"exact birational suite", exact_birational},
      {"PL specialization n<=12", specialization},
      {"Cesaro homomesy", cesaro},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << std::setw(2) << i + 1 << ' ' << criteria[i].first << ": "
              << o.detail << " [" << std::fixed << std::setprecision(2) << secs << " s]" << std::defaultfloat
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << '/' << criteria.size() << " criteria pass"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
