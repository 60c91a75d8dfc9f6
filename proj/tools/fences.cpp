#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fences/parallel.hpp"
#include "fences/reports.hpp"

using namespace fences;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Writes to the --out path when one is configured, else to stdout.
void emit(const RunConfig& config, const std::string& text) {
  if (!config.output) {
    std::cout << text;
    return;
  }
  std::ofstream out(*config.output);
  if (!out) throw std::runtime_error("cannot write " + *config.output);
  out << text;
}

bool wants_json(const RunConfig& config) {
  return config.output && config.output->size() >= 5 &&
         config.output->compare(config.output->size() - 5, 5, ".json") == 0;
}

unsigned workers_of(const RunConfig& config) { return config.workers ? config.workers : default_workers(); }

FenceShape fence_of(const RunConfig& config) {
  if (!config.fence) throw UsageError("--fence is required");
  return parse_fence(*config.fence);
}

int cmd_dims(const RunConfig& config) {
  if (!config.max_n) throw UsageError("dims needs --max-n");
  const auto shapes = config.t ? shapes_with_segments(*config.t, *config.max_n) : shapes_up_to(*config.max_n);
  ResultCache cache(config.cache_dir ? std::filesystem::path(*config.cache_dir) : default_cache_dir(),
                    config.use_cache);
  const auto reports = sweep_dims(shapes, workers_of(config), &cache);
  const DimsSummary summary = summarize(reports);
  if (wants_json(config)) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(to_json(r));
    emit(config, nlohmann::json{{"summary", to_json(summary)}, {"reports", rows}}.dump(1) + "\n");
  } else {
    emit(config, dims_csv(reports));
  }
  if (config.output) std::cout << to_json(summary).dump() << '\n';
  return summary.formula_mismatches == 0 && summary.ih_ah_mismatches == 0 ? kPass : kFail;
}

int cmd_verify(const RunConfig& config) {
  std::vector<FenceShape> shapes;
  if (config.fence) shapes.push_back(fence_of(config));
  else shapes = shapes_up_to(config.max_n.value_or(12));
  VerifyOptions options;
  options.seed = config.seed;
  options.limits = {config.step_cap, config.max_label_bits};
  const auto runs = verify_sweep(shapes, options, workers_of(config));

  std::ostringstream text;
  bool ok = true;
  for (const auto& [name, counts] : suite_tally(runs)) {
    text << (counts.first == counts.second ? "PASS " : "FAIL ") << name << ' ' << counts.first << '/'
         << counts.second << '\n';
    ok &= counts.first == counts.second;
  }
  for (const auto& run : runs) {
    for (const auto& s : run.suites) {
      if (!s.passed) text << "witness " << run.shape.to_string() << ' ' << s.name << ": " << s.witness << '\n';
    }
  }
  if (wants_json(config)) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& run : runs) all.push_back(to_json(run));
    emit(config, nlohmann::json{{"passed", ok}, {"fences", all}}.dump(1) + "\n");
    std::cout << text.str();
  } else {
    emit(config, text.str());
  }
  return ok ? kPass : kFail;
}

int cmd_scan(const RunConfig& config) {
  if (!config.conjecture) throw UsageError("scan needs --conj");
  const Conjecture id = parse_conjecture(*config.conjecture);
  ScanRange range;
  range.max_apt = config.max_apt.value_or(range.max_apt);
  range.t = config.t.value_or(range.t);
  range.max_n = config.max_n.value_or(range.max_n);
  range.workers = workers_of(config);
  const auto reports = scan_conjecture(id, range);

  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream text;
  for (const auto& r : reports) {
    ok &= r.holds;
    rows.push_back(to_json(r));
    text << r.fence.to_string() << ' ' << (r.holds ? "holds" : "fails");
    if (r.codimension) text << " codimension " << *r.codimension;
    text << '\n';
  }
  nlohmann::json summary = {{"conjecture", to_string(id)}, {"fences", reports.size()}, {"holds", ok}};
  if (id == Conjecture::C7_2) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [codim, count] : codimension_counts(reports)) counts[std::to_string(codim)] = count;
    summary["codimension_counts"] = counts;
  }
  text << summary.dump() << '\n';
  if (wants_json(config)) {
    emit(config, nlohmann::json{{"summary", summary}, {"reports", rows}}.dump(1) + "\n");
    std::cout << summary.dump() << '\n';
  } else {
    emit(config, text.str());
  }
  return ok ? kPass : kFail;
}

int cmd_orbit(const RunConfig& config) {
  const Fence fence(fence_of(config));
  if (!config.ideal) throw UsageError("orbit needs --ideal");
  const Ideal start = parse_ideal(fence, *config.ideal);
  const DynamicsMap map = parse_dynamics_map(config.map);
  emit(config, format_orbit(fence, orbit_through(fence, start, map), map));
  return kPass;
}

int cmd_lifted(const RunConfig& config) {
  const Fence fence(fence_of(config));
  std::ofstream trace_file;
  std::ostream* trace = &std::cout;
  if (config.trace) {
    trace_file.open(*config.trace);
    if (!trace_file) throw std::runtime_error("cannot write " + *config.trace);
    trace = &trace_file;
  }
  const LiftedReport report = run_lifted(fence, config, trace);
  const std::string summary = nlohmann::json{{"summary", to_json(report)}}.dump() + "\n";
  if (config.output) emit(config, summary);
  else std::cout << summary;
  if (report.exact_stopped) std::cerr << "fences: " << *report.exact_stopped << '\n';
  return report.passed() ? kPass : kFail;
}

int dispatch(const RunConfig& config) {
  if (config.command == "dims") return cmd_dims(config);
  if (config.command == "verify") return cmd_verify(config);
  if (config.command == "scan") return cmd_scan(config);
  if (config.command == "orbit") return cmd_orbit(config);
  if (config.command == "lifted") return cmd_lifted(config);
  throw UsageError("unknown command '" + config.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rowmotion, toggleability and homomesy on fence posets"};
  app.require_subcommand(1);

  RunConfig cli;
  std::string config_path, save_path;
  std::string tol_pl, tol_b, tol_basis;
  bool no_cache = false;
  std::vector<CLI::Option*> set_options;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run config to start from");
    sub->add_option("--save-config", save_path, "write the effective run config here");
    set_options.push_back(sub->add_option("--out", cli.output, "output file (.json for JSON)"));
    set_options.push_back(sub->add_option("--workers", cli.workers, "worker threads, 0 for all cores"));
    set_options.push_back(sub->add_option("--cache-dir", cli.cache_dir, "cache directory"));
    sub->add_flag("--no-cache", no_cache, "do not read or write the cache");
  };

  auto* dims = app.add_subcommand("dims", "toggleability and homomesy space dimensions");
  set_options.push_back(dims->add_option("--t", cli.t, "number of segments (default: all)"));
  set_options.push_back(dims->add_option("--max-n", cli.max_n, "largest fence size"));
  common(dims);

  auto* verify = app.add_subcommand("verify", "run every identity suite");
  set_options.push_back(verify->add_option("--max-n", cli.max_n, "largest fence size (default 12)"));
  set_options.push_back(verify->add_option("--fence", cli.fence, "a single fence, e.g. F(3,3,2)"));
  set_options.push_back(verify->add_option("--seed", cli.seed, "labeling seed"));
  common(verify);

  auto* scan = app.add_subcommand("scan", "scan a conjecture over a range of fences");
  set_options.push_back(scan->add_option("--conj", cli.conjecture, "c5_1, c5_2, c5_3 or c7_2"));
  set_options.push_back(scan->add_option("--max-apt", cli.max_apt, "largest a+t for the c5 conjectures"));
  set_options.push_back(scan->add_option("--t", cli.t, "segments for c7_2"));
  set_options.push_back(scan->add_option("--max-n", cli.max_n, "largest fence size for c7_2"));
  common(scan);

  auto* orbit = app.add_subcommand("orbit", "print the orbit through an ideal");
  set_options.push_back(orbit->add_option("--fence", cli.fence, "fence, e.g. F(3,3,2)"));
  set_options.push_back(orbit->add_option("--ideal", cli.ideal, "ideal, e.g. {1,5,6}"));
  set_options.push_back(orbit->add_option("--map", cli.map, "rowmotion or promotion"));
  common(orbit);

  auto* lifted = app.add_subcommand("lifted", "piecewise-linear and birational rowmotion");
  set_options.push_back(lifted->add_option("--fence", cli.fence, "fence, e.g. F(2,2)"));
  set_options.push_back(lifted->add_option("--realm", cli.realm, "pl or birational"));
  set_options.push_back(lifted->add_option("--seed", cli.seed, "labeling seed"));
  set_options.push_back(lifted->add_option("--steps", cli.steps, "rowmotion steps"));
  lifted->add_option("--tol-pl", tol_pl, "tolerance for PL toggleability means");
  lifted->add_option("--tol-b", tol_b, "tolerance for birational toggleability means");
  lifted->add_option("--tol-basis", tol_basis, "tolerance for lifted basis statistics");
  set_options.push_back(lifted->add_option("--step-cap", cli.step_cap, "exact birational step cap"));
  set_options.push_back(lifted->add_option("--max-bits", cli.max_label_bits, "exact label size budget in bits"));
  set_options.push_back(lifted->add_option("--trace", cli.trace, "write the JSON-lines trace here"));
  common(lifted);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    config.command = app.get_subcommands().front()->get_name();
    // command-line values override the config file
    for (const CLI::Option* o : set_options) {
      if (o->count() == 0) continue;
      const std::string& name = o->get_name();
      if (name == "--out") config.output = cli.output;
      else if (name == "--workers") config.workers = cli.workers;
      else if (name == "--cache-dir") config.cache_dir = cli.cache_dir;
      else if (name == "--t") config.t = cli.t;
      else if (name == "--max-n") config.max_n = cli.max_n;
      else if (name == "--fence") config.fence = cli.fence;
      else if (name == "--seed") config.seed = cli.seed;
      else if (name == "--conj") config.conjecture = cli.conjecture;
      else if (name == "--max-apt") config.max_apt = cli.max_apt;
      else if (name == "--ideal") config.ideal = cli.ideal;
      else if (name == "--map") config.map = cli.map;
      else if (name == "--realm") config.realm = cli.realm;
      else if (name == "--steps") config.steps = cli.steps;
      else if (name == "--step-cap") config.step_cap = cli.step_cap;
      else if (name == "--max-bits") config.max_label_bits = cli.max_label_bits;
      else if (name == "--trace") config.trace = cli.trace;
    }
    if (!tol_pl.empty()) config.tolerances.pl = std::stod(tol_pl);
    if (!tol_b.empty()) config.tolerances.b = std::stod(tol_b);
    if (!tol_basis.empty()) config.tolerances.basis = std::stod(tol_basis);
    if (no_cache) config.use_cache = false;
    if (!save_path.empty()) save_run_config(config, save_path);
    return dispatch(config);
  } catch (const UsageError& e) {
    std::cerr << "fences: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fences: " << e.what() << '\n';
    return kUsage;
  } catch (const NotAnIdeal& e) {
    std::cerr << "fences: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "fences: " << e.what() << '\n';
    return kFail;
  }
}
