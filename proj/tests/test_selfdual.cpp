#include "doctest.h"

#include "fences/selfdual.hpp"
#include "fences/toggle_spaces.hpp"

using namespace fences;

TEST_CASE("complement and prime maps on F(2,3,2)") {
  const Fence f(parse_fence("F(2,3,2)"));
  const auto kappa = self_dual_involution(f);
  REQUIRE(kappa);
  const IdealIndex index = enumerate_ideals(f);
  for (const Ideal& ideal : index) {
    CHECK(ideal_complement(f, *kappa, ideal_complement(f, *kappa, ideal)) == ideal);
    CHECK(prime_map(f, *kappa, prime_map(f, *kappa, ideal)) == ideal);
    CHECK(rowmotion_inverse(f, prime_map(f, *kappa, ideal)) == prime_map(f, *kappa, rowmotion(f, ideal)));
  }
  const auto dihedral = dihedral_orbits(f, index, *kappa);
  const auto rowmotion_orbits = orbit_decomposition(f, index, DynamicsMap::Rowmotion);
  CHECK(dihedral.count() <= rowmotion_orbits.count());
  CHECK(dihedral.count() * 2 >= rowmotion_orbits.count());
}

TEST_CASE("self-dual suites pass and reject non-self-dual fences") {
  for (const char* name : {"F(2,2,2)", "F(3,1,3)", "F(2,2,2,2,2)"}) {
    for (const auto& s : verify_self_dual_suite(Fence(parse_fence(name)))) {
      CHECK_MESSAGE(s.passed, name << ' ' << s.name << ": " << s.witness);
      // every orbit can be self-paired, leaving nothing to pair
      if (s.name != "paired-orbits") CHECK(s.checks > 0);
    }
  }
  CHECK_THROWS(verify_self_dual_suite(Fence(parse_fence("F(2,2)"))));
  CHECK_THROWS(verify_self_dual_suite(Fence(parse_fence("F(3,2)"))));
}

TEST_CASE("conjecture checks") {
  CHECK(parse_conjecture("c5_3") == Conjecture::C5_3);
  CHECK(to_string(Conjecture::C7_2) == "C7_2");
  CHECK_THROWS(parse_conjecture("c9"));
  for (auto id : {Conjecture::C5_1, Conjecture::C5_2, Conjecture::C5_3}) {
    const auto r = check_conjecture(id, Fence(parse_fence("F(2,2,2)")));
    CHECK(r.holds);
    CHECK_FALSE(r.verdicts.empty());
  }
  CHECK_THROWS(check_conjecture(Conjecture::C5_1, Fence(parse_fence("F(2,3,2)"))));
  const auto shapes = equal_part_odd_shapes(8);
  CHECK(shapes.size() == 6);
  const auto c72 = check_conjecture(Conjecture::C7_2, Fence(parse_fence("F(3,3,2)")));
  REQUIRE(c72.codimension);
  const auto dims = space_dims(Fence(parse_fence("F(3,3,2)")));
  CHECK(*c72.codimension == dims.dim_ih - dims.dim_it);
}

TEST_CASE("C7_2 codimensions for t = 3, n <= 14") {
  const auto reports = scan_conjecture(Conjecture::C7_2, ScanRange{.t = 3, .max_n = 14, .workers = 2});
  CHECK(codimension_counts(reports) == std::map<std::size_t, std::size_t>{{0, 6}, {1, 220}, {2, 60}});
}

TEST_CASE("sufficiency families are consistent") {
  for (const char* name : {"F(2,2,2)", "F(3,3,3)", "F(2,1,2)", "F(3,1,1,1,3)"}) {
    const auto r = verify_sufficiency(Fence(parse_fence(name)));
    CHECK(r.consistent());
  }
  CHECK_THROWS(verify_sufficiency(Fence(parse_fence("F(3,2)"))));
}
