#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fences/fence.hpp"
#include "fences/ideals.hpp"
#include "fences/lifted.hpp"
#include "fences/selfdual.hpp"
#include "fences/toggle_spaces.hpp"

namespace fences {

inline constexpr const char* kVersionTag = "fences-1.0";

struct Tolerances {
  double pl = 1e-3;
  double b = 1e-3;
  double basis = 1e-2;
  bool operator==(const Tolerances&) const = default;
};

/// Everything a command needs. Unset optionals fall back to per-command
/// defaults.
struct RunConfig {
  std::string command;
  std::optional<std::string> fence;
  std::optional<int> t;
  std::optional<int> max_n;
  std::optional<int> max_apt;
  std::optional<std::string> conjecture;
  std::optional<std::string> ideal;
  std::string map = "rowmotion";
  std::string realm = "birational";
  std::uint64_t seed = 7;
  std::size_t steps = 100;
  Tolerances tolerances;
  std::size_t step_cap = kDefaultExactStepCap;
  std::size_t max_label_bits = kDefaultExactBitCap;
  std::optional<std::string> output;
  std::optional<std::string> trace;
  std::optional<std::string> cache_dir;
  bool use_cache = true;
  unsigned workers = 0;  // 0 picks the hardware concurrency

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& c, const std::filesystem::path& path);

/// FENCES_CACHE_DIR, else $XDG_CACHE_HOME/fences, else ~/.cache/fences,
/// else ./.fences-cache.
std::filesystem::path default_cache_dir();

/// JSON-lines store of per-fence results keyed by (fence, operation, version
/// tag). One file per operation; entries from other versions are ignored.
/// Thread safe.
class ResultCache {
 public:
  ResultCache(std::filesystem::path dir, bool enabled);

  bool enabled() const { return enabled_; }
  std::optional<nlohmann::json> get(const std::string& fence, const std::string& op);
  void put(const std::string& fence, const std::string& op, const nlohmann::json& value);
  std::size_t hits() const { return hits_; }

 private:
  void load(const std::string& op);
  std::filesystem::path file_for(const std::string& op) const;

  std::filesystem::path dir_;
  bool enabled_;
  std::mutex mutex_;
  std::map<std::string, std::map<std::string, nlohmann::json>> entries_;  // op -> fence -> value
  std::size_t hits_ = 0;
};

// ---- dims ----

std::vector<SpaceReport> sweep_dims(const std::vector<FenceShape>& shapes, unsigned workers,
                                    ResultCache* cache = nullptr);

struct DimsSummary {
  std::size_t fences = 0;
  std::size_t single_orbit = 0;
  std::size_t ih_equals_it = 0;
  std::size_t formula_mismatches = 0;  // dim_IT, dim_AT or both differ from n-(t-1)
  std::size_t ih_ah_mismatches = 0;
};

DimsSummary summarize(const std::vector<SpaceReport>& reports);
nlohmann::json to_json(const DimsSummary& s);

/// Header plus one row per report, columns in the order
/// n,t,ideals,orbits,dim_IT,dim_AT,dim_IH,dim_AH,single_orbit,IH_eq_IT,fence.
std::string dims_csv(const std::vector<SpaceReport>& reports);

// ---- verify ----

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t gamma_steps = 10;
  std::size_t telescoping_n = 10;
  int antichain_rank_max_n = 10;
  ExactLimits limits;
};

struct FenceVerification {
  FenceShape shape;
  std::vector<SuiteResult> suites;

  bool passed() const;
};

nlohmann::json to_json(const FenceVerification& v);

/// Every suite that applies to the fence: both basis certificates, orbit
/// sums and adjacency of the toggleability statistics, the indicator
/// dictionary, the self-dual suite when k -> n+1-k reverses the order, the
/// peak/valley certificate on F(a^t) with t odd, the three-segment identity on
/// F(a,a,a), recombination, PL specialization, the exact birational identities
/// with a seeded labeling, and the antichain toggle rank for small fences.
FenceVerification verify_fence(const Fence& fence, const VerifyOptions& options = {});

std::vector<FenceVerification> verify_sweep(const std::vector<FenceShape>& shapes, const VerifyOptions& options,
                                            unsigned workers);

/// Per suite name: [fences passed, fences run].
std::map<std::string, std::pair<std::size_t, std::size_t>> suite_tally(const std::vector<FenceVerification>& runs);

// ---- individual suites, also used by the acceptance checks ----

/// Certificates hold componentwise and agree with the orbit averages.
SuiteResult basis_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits,
                        IndicatorKind kind);
SuiteResult toggle_orbit_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits);
SuiteResult dictionary_suite(const Fence& fence, const IdealIndex& index);
SuiteResult recombination_suite(const Fence& fence, const IdealIndex& index);
SuiteResult specialization_suite(const Fence& fence, const IdealIndex& index);
SuiteResult antichain_rank_suite(const Fence& fence, const IdealIndex& index, const OrbitDecomposition& orbits);
SuiteResult birational_suite(const Fence& fence, const VerifyOptions& options);

// ---- orbit ----

/// "<fence> <map> orbit of size k" followed by one ideal per line.
std::string format_orbit(const Fence& fence, const std::vector<Ideal>& orbit, DynamicsMap map);

// ---- lifted ----

struct LiftedStatReport {
  std::string name;
  std::string target;         // exact target value
  double mean = 0;            // Cesaro mean, or the exact period mean
  bool exact = false;         // true when computed over a full finite period
  bool within = false;
  double tolerance = 0;
};

struct LiftedReport {
  FenceShape fence;
  Realm realm = Realm::Birational;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::optional<std::size_t> order;
  std::size_t order_searched = 0;
  std::optional<std::string> exact_stopped;  // why exact iteration stopped early
  std::optional<BSuiteReport> identities;
  std::optional<BoundednessReport> bounds;
  std::vector<LiftedStatReport> stats;

  bool passed() const;
};

nlohmann::json to_json(const LiftedReport& r);

/// Writes the exact trace as JSON lines (until the exact limits stop it) and
/// returns the summary: finite order search, exact identities, boundedness
/// monitor, and the lifted homomesy checks for every T_p and basis statistic.
LiftedReport run_lifted(const Fence& fence, const RunConfig& config, std::ostream* trace);

}  // namespace fences
