#include "doctest.h"

#include <filesystem>
#include <set>
#include <sstream>

#include "fences/reports.hpp"

using namespace fences;

TEST_CASE("run config round-trips") {
  RunConfig c;
  c.command = "lifted";
  c.fence = "F(2,2)";
  c.seed = 99;
  c.steps = 17;
  c.tolerances.basis = 0.25;
  c.max_n = 9;
  c.use_cache = false;
  c.cache_dir = "/tmp/x";
  CHECK(run_config_from_json(to_json(c)) == c);
  CHECK(run_config_from_json(to_json(RunConfig{})) == RunConfig{});
  const auto path = std::filesystem::temp_directory_path() / "fences_config_test.json";
  save_run_config(c, path);
  CHECK(load_run_config(path) == c);
  std::filesystem::remove(path);
  CHECK_THROWS(run_config_from_json(nlohmann::json::array()));
}

TEST_CASE("cache hits return identical reports") {
  const auto dir = std::filesystem::temp_directory_path() / "fences_cache_test";
  std::filesystem::remove_all(dir);
  const auto shapes = shapes_with_segments(3, 9);
  ResultCache cold(dir, true);
  const auto first = sweep_dims(shapes, 2, &cold);
  CHECK(cold.hits() == 0);
  ResultCache warm(dir, true);
  const auto second = sweep_dims(shapes, 1, &warm);
  CHECK(warm.hits() == shapes.size());
  CHECK(first == second);
  CHECK(dims_csv(first) == dims_csv(sweep_dims(shapes, 1, nullptr)));
  ResultCache off(dir, false);
  sweep_dims(shapes, 1, &off);
  CHECK(off.hits() == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("dims CSV layout and summary") {
  const auto reports = sweep_dims({parse_fence("F(3,3,2)")}, 1);
  const std::string csv = dims_csv(reports);
  CHECK(csv.rfind("n,t,ideals,orbits,dim_IT,dim_AT,dim_IH,dim_AH,single_orbit,IH_eq_IT,fence\n", 0) == 0);
  const auto s = summarize(reports);
  CHECK(s.fences == 1);
  CHECK(s.formula_mismatches == 0);
}

TEST_CASE("verify suites pass on F(3,3,3) with witnesses empty") {
  const auto v = verify_fence(Fence(parse_fence("F(3,3,3)")));
  CHECK(v.passed());
  std::set<std::string> names;
  for (const auto& s : v.suites) {
    names.insert(s.name);
    CHECK_MESSAGE(s.passed, s.name << ": " << s.witness);
  }
  for (const char* n : {"ideal-basis", "antichain-basis", "dictionary", "prime-conjugation", "peak-valley-certificate",
                        "three-segment-identity", "recombination", "specialization", "birational-identities"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK(to_json(v)["passed"] == true);
}

TEST_CASE("orbit text") {
  const Fence f(parse_fence("F(2,2)"));
  CHECK(format_orbit(f, orbit_through(f, Ideal{0}, DynamicsMap::Rowmotion), DynamicsMap::Rowmotion) ==
        "F(2,2) rowmotion orbit of size 3\n{}\n{1,3}\n{1,2,3}\n");
}

TEST_CASE("lifted report on F(2,2) is exact over the period") {
  RunConfig c;
  c.steps = 40;
  std::ostringstream trace;
  const auto r = run_lifted(Fence(parse_fence("F(2,2)")), c, &trace);
  REQUIRE(r.order);
  CHECK(*r.order == 6);
  CHECK(r.passed());
  for (const auto& s : r.stats) CHECK(s.exact);
  std::size_t lines = 0;
  for (char ch : trace.str()) lines += ch == '\n';
  CHECK(lines == 41);
  std::ostringstream again;
  run_lifted(Fence(parse_fence("F(2,2)")), c, &again);
  CHECK(again.str() == trace.str());
  CHECK(to_json(run_lifted(Fence(parse_fence("F(2,2)")), c, nullptr)).dump() == to_json(r).dump());
}
