#include "doctest.h"

#include "fences/lifted.hpp"
#include "fences/toggle_spaces.hpp"

using namespace fences;

TEST_CASE("PL rowmotion specializes to rowmotion") {
  for (const auto& shape : shapes_up_to(8)) {
    const Fence f(shape);
    const IdealIndex index = enumerate_ideals(f);
    for (std::size_t i = 0; i < index.size(); ++i) {
      const ExactLabeling pi = indicator_labeling(f, index[i]);
      CHECK(pl_rowmotion(f, pi) == indicator_labeling(f, rowmotion(f, index[i])));
      for (int p = 1; p <= f.size(); ++p) {
        CHECK(togg_lift(f, pi, p, ToggleSign::Net) == togg(f, index, p)[i]);
        CHECK(lifted_chi_hat(f, pi, p) == chi_hat(f, index, p)[i]);
        CHECK(lifted_chi(f, pi, p) == chi(f, index, p)[i]);
      }
    }
  }
}

TEST_CASE("F(2,2) worked PL step") {
  const Fence f(parse_fence("F(2,2)"));
  // pi = (0,1,0) is the indicator labeling of {1,3}
  const ExactLabeling pi = make_labeling(f, Realm::PiecewiseLinear, {0, 1, 0}, 0, 1);
  CHECK(pi == indicator_labeling(f, parse_ideal(f, "{1,3}")));
  CHECK(pl_rowmotion(f, pi) == indicator_labeling(f, parse_ideal(f, "{1,2,3}")));
}

TEST_CASE("toggles are involutions and gamma is conserved") {
  const Fence f(parse_fence("F(3,3,2)"));
  const ExactLabeling b = random_labeling(f, Realm::Birational, 1);
  const ExactLabeling pl = random_labeling(f, Realm::PiecewiseLinear, 1);
  for (int p = 1; p <= f.size(); ++p) {
    CHECK(b_toggle(f, b_toggle(f, b, p), p) == b);
    CHECK(pl_toggle(f, pl_toggle(f, pl, p), p) == pl);
    CHECK(gamma(f, b_toggle(f, b, p)) == gamma(f, b));
    CHECK(lifted_chi(f, b, p) == togg_lift(f, b, p, ToggleSign::Minus));
  }
  ExactLabeling cur = b;
  for (int step = 0; step < 8; ++step) {
    cur = b_rowmotion(f, cur);
    CHECK(gamma(f, cur) == gamma(f, b));
    for (const auto& q : cur.values) CHECK(sgn(q) > 0);
  }
}

TEST_CASE("gamma of the all-ones labeling counts covers of the bounded poset") {
  for (const char* name : {"F(2,2)", "F(3,3,2)", "F(2,1,3)"}) {
    const Fence f(parse_fence(name));
    const ExactLabeling ones = make_labeling(f, Realm::Birational, std::vector<Rational>(f.size(), 1), 1, 1);
    std::size_t boundary = 0;
    for (int p = 1; p <= f.size(); ++p) {
      boundary += f.lower_covers(p).empty();
      boundary += f.upper_covers(p).empty();
    }
    CHECK(gamma(f, ones) == static_cast<long>(f.covers().size() + boundary));
  }
}

TEST_CASE("birational order of F(a,a) is a(a+1)") {
  for (int a = 2; a <= 3; ++a) {
    const Fence f(FenceShape({a, a}));
    const auto r = detect_finite_order(f, random_labeling(f, Realm::Birational, 5), 40);
    REQUIRE(r.order);
    CHECK(*r.order == static_cast<std::size_t>(a * (a + 1)));
  }
  const Fence g(parse_fence("F(2,2,2)"));
  const auto r = detect_finite_order(g, random_labeling(g, Realm::Birational, 5), 30);
  CHECK(r.searched == 30);
}

TEST_CASE("exact limits stop runaway iteration with a clear error") {
  const Fence f(parse_fence("F(3,3,2)"));
  const ExactLabeling pi = random_labeling(f, Realm::Birational, 7);
  CHECK_THROWS_AS(exact_trace(f, pi, 30, ExactLimits{.step_cap = 200, .max_label_bits = 4096}), LabelSizeExceeded);
  CHECK_THROWS_AS(exact_trace(f, pi, 5, ExactLimits{.step_cap = 3}), StepCapExceeded);
  CHECK(exact_trace(f, pi, 3).size() == 4);
  // PL iteration is not capped
  CHECK(exact_trace(f, random_labeling(f, Realm::PiecewiseLinear, 7), 300, ExactLimits{.step_cap = 3}).size() == 301);
}

TEST_CASE("exact and residue birational suites") {
  const Fence f(parse_fence("F(2,2,2)"));
  const ExactLabeling pi = random_labeling(f, Realm::Birational, 3);
  const BSuiteReport exact = exact_b_suite(f, pi, 20, 12);
  CHECK(exact.passed());
  for (const auto& r : residue_b_suite(f, pi, 20, 12)) {
    CHECK(r.suite.passed());
    CHECK(r.suite.checks == exact.checks);
  }
  const auto stopped = exact_b_suite(Fence(parse_fence("F(3,3,2)")), random_labeling(Fence(parse_fence("F(3,3,2)")), Realm::Birational, 3), 40, 30, ExactLimits{.max_label_bits = 20000});
  CHECK_FALSE(stopped.passed());
  CHECK(stopped.incomplete.has_value());
  CHECK(exact_pl_telescoping(f, random_labeling(f, Realm::PiecewiseLinear, 3), 25).passed());
}

TEST_CASE("lifted statistics") {
  const Fence f(parse_fence("F(2,2,2)"));
  const IdealIndex index = enumerate_ideals(f);
  const auto basis = basis_bi(f, index);
  CHECK_NOTHROW(LiftedStat::from_expr(basis.front().stat, Realm::Birational));
  StatExpr half;
  half.add_ideal(1, Rational(1, 2));
  CHECK_THROWS_AS(LiftedStat::from_expr(half, Realm::Birational), NonIntegerExponent);
  CHECK_NOTHROW(LiftedStat::from_expr(half, Realm::PiecewiseLinear));
  StatExpr with_toggle;
  with_toggle.add_toggle(1, 1);
  CHECK_THROWS(LiftedStat::from_expr(with_toggle, Realm::PiecewiseLinear));

  const ExactLabeling b = random_labeling(f, Realm::Birational, 2);
  const LiftedStat t = LiftedStat::toggle(2);
  CHECK(t.b(f, b) == togg_lift(f, b, 2, ToggleSign::Net));
  CHECK(std::abs(std::exp(t.b_log(f, to_float(b))) - t.b(f, b).get_d()) < 1e-12);
}

TEST_CASE("Cesaro means of T_p on F(2,2,2), seed 7") {
  const Fence f(parse_fence("F(2,2,2)"));
  for (int p = 1; p <= f.size(); ++p) {
    const auto pl = cesaro_homomesy_estimate(f, LiftedStat::toggle(p), random_labeling(f, Realm::PiecewiseLinear, 7), 2000);
    CHECK(std::abs(pl.mean) < 1e-3L);
    CHECK(pl.running.size() == 2000);
    const auto b = cesaro_homomesy_estimate(f, LiftedStat::toggle(p), random_labeling(f, Realm::Birational, 7), 2000);
    CHECK(std::abs(b.mean - 1) < 1e-3L);
  }
}

TEST_CASE("boundedness monitor and trace format") {
  const Fence f(parse_fence("F(2,2,2)"));
  const ExactLabeling b = random_labeling(f, Realm::Birational, 4);
  const auto r = boundedness_monitor(f, b, 500);
  CHECK(r.within);
  CHECK(r.lower_bound <= r.observed_min);
  CHECK(r.observed_max <= r.upper_bound);
  const auto line = trace_line(0, b);
  CHECK(line["step"] == 0);
  CHECK(line["alpha"] == "1/1");
  CHECK(line["omega"] == "2/1");
  CHECK(line["labels"].size() == 5);
  CHECK(random_labeling(f, Realm::Birational, 4) == b);
  CHECK_THROWS(make_labeling(f, Realm::Birational, {1, 2, 0, 1, 1}, 1, 2));
  CHECK(parse_realm("PL") == Realm::PiecewiseLinear);
  CHECK_THROWS(parse_realm("tropical"));
}
