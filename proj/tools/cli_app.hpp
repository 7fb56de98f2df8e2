#pragma once

// Command-line front end. Kept in a header so the test suite can drive the
// dispatcher in-process.

#include "sto/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace sto::cli {

namespace fs = std::filesystem;
using io::json;

enum exit_code : int { ok = 0, runtime_failure = 1, usage_error = 2 };

inline constexpr const char* version = "0.1.0";
inline constexpr const char* out_dir_env = "STO_OUT_DIR";

struct Options
{
  std::string function = "beale";
  std::size_t dim = 0;
  std::string algorithm = "sto";
  std::string algorithms = "sto,pso,ga,tlbo";
  std::size_t pop = 40;
  std::size_t iters = 100;
  std::size_t trials = 200;
  std::size_t tune_trials = 100;
  std::size_t runs = 50;
  std::uint64_t seed = 1;
  std::string k1 = "random";
  std::string dims = "2,4,6,8,10,12";
  std::string preset;
  std::string out;
  std::size_t workers = 0;
  bool serial = false;
  bool trace_particles = false;
  std::string manifest;
};

/// Thrown for semantically invalid flag values; maps to exit code 2.
struct usage_failure : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

inline DiameterPolicy parse_k1(const std::string& text, std::size_t k)
{
  if (text == "random")
    return RandomizedDiameter{};
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw usage_failure("--k1 expects an integer or 'random', got '" + text + "'");
  if (v < 1 || v >= k)
    throw usage_failure("--k1 must satisfy 1 <= k1 < pop (" + std::to_string(k) + ")");
  return FixedDiameter{v};
}

inline Algorithm make_algorithm(const std::string& name, const Options& o)
{
  AlgorithmConfig cfg;
  if (name == "sto") {
    StoConfig c;
    c.diameter = parse_k1(o.k1, o.pop);
    cfg = c;
  } else if (name == "pso") {
    cfg = PsoConfig{};
  } else if (name == "ga") {
    cfg = GaConfig{};
  } else if (name == "tlbo") {
    cfg = TlboConfig{};
  } else {
    throw usage_failure("unknown algorithm '" + name + "'; valid: sto, pso, ga, tlbo");
  }
  set_population(cfg, o.pop);
  set_iterations(cfg, o.iters);
  std::string label = name;
  if (const auto* s = std::get_if<StoConfig>(&cfg))
    if (const auto* f = std::get_if<FixedDiameter>(&s->diameter))
      label += "_k1_" + std::to_string(f->k1);
  return {label, cfg};
}

inline std::vector<Algorithm> make_algorithms(const Options& o)
{
  std::vector<Algorithm> out;
  for (const auto& n : split_list(o.algorithms))
    out.push_back(make_algorithm(n, o));
  if (out.empty())
    throw usage_failure("--algorithms is empty");
  return out;
}

inline ObjectiveFunction make_function(const Options& o)
{
  if (std::find(benchmarks::names.begin(), benchmarks::names.end(), o.function) ==
      benchmarks::names.end())
    throw usage_failure("unknown function '" + o.function + "'; valid: " + benchmarks::names_list());
  try {
    return benchmarks::make(o.function, o.dim);
  } catch (const config_error& e) {
    throw usage_failure(e.what());
  }
}

inline std::string timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Collects output files for one invocation and writes the manifest.
class Session
{
public:
  Session(std::string subcommand, std::vector<std::string> args, const Options& o)
      : subcommand_(std::move(subcommand)), args_(std::move(args)), opts_(o)
  {
    dir_ = o.out;
    if (dir_.empty()) {
      const char* env = std::getenv(out_dir_env);
      dir_ = env && *env ? env : ".";
    }
    fs::create_directories(dir_);
  }

  ExecutionPolicy policy() const { return {opts_.workers, opts_.serial}; }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer)
  {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os)
      throw std::runtime_error("cannot open " + (dir_ / name).string());
    writer(os);
    if (!os)
      throw std::runtime_error("failed writing " + (dir_ / name).string());
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const json& j)
  {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

  json& resolved() { return resolved_; }
  json& timing() { return timing_; }

  void finish(std::ostream& out)
  {
    json m;
    m["tool"] = "sto_cli";
    m["version"] = version;
    m["subcommand"] = subcommand_;
    m["command"] = args_;
    m["resolved"] = resolved_;
    m["outputs"] = outputs_;
    m["created_at"] = timestamp();
    if (!timing_.is_null())
      m["timing"] = timing_;
    std::ofstream os(dir_ / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
    out << "wrote";
    for (const auto& f : outputs_)
      out << ' ' << (dir_ / f).string();
    out << ' ' << (dir_ / "manifest.json").string() << '\n';
  }

private:
  std::string subcommand_;
  std::vector<std::string> args_;
  Options opts_;
  fs::path dir_;
  std::vector<std::string> outputs_;
  json resolved_ = json::object();
  json timing_;
};

inline json common_resolved(const Options& o)
{
  json j;
  j["population"] = o.pop;
  j["iterations"] = o.iters;
  j["seed"] = o.seed;
  j["workers"] = ExecutionPolicy{o.workers, o.serial}.resolved_workers();
  j["serial"] = o.serial;
  return j;
}

inline void cmd_run(Session& s, const Options& o, std::ostream& out)
{
  const auto f = make_function(o);
  Algorithm alg = make_algorithm(o.algorithm, o);
  if (o.trace_particles) {
    auto* sto_cfg = std::get_if<StoConfig>(&alg.config);
    if (!sto_cfg)
      throw usage_failure("--trace-particles is only available for --algorithm sto");
    sto_cfg->trace_particles = true;
  }
  const auto start = std::chrono::steady_clock::now();
  const RunTrace t = run_algorithm(f, alg.config, o.seed);
  s.timing()["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json r = common_resolved(o);
  r["function"] = f.name;
  r["dimension"] = f.dimension;
  r["algorithm"] = io::to_json(alg.config);
  s.resolved() = r;

  json j;
  j["function"] = f.name;
  j["dimension"] = f.dimension;
  j["algorithm"] = io::to_json(alg.config);
  j["seed"] = o.seed;
  j["result"] = io::to_json(t);
  s.write_json("run.json", j);
  s.write("trace.csv", [&](std::ostream& os) { io::write_trace_csv(os, t); });
  if (o.trace_particles)
    s.write("particles.csv", [&](std::ostream& os) { io::write_particles_csv(os, t, f.dimension); });
  out << f.name << ' ' << alg.label << " best_cost=" << io::format_double(t.best_cost)
      << " iterations=" << t.iterations_used << " evaluations=" << t.total_evaluations << '\n';
}

inline void cmd_trace(Session& s, const Options& o, std::ostream& out, std::ostream& err)
{
  Options local = o;
  if (local.k1 == "random")
    local.k1 = std::to_string(local.pop / 2);
  const auto f = make_function(local);
  if (f.dimension != 2)
    err << "warning: trajectory requested for a " << f.dimension
        << "-dimensional function; rows are emitted but are not directly plottable\n";
  StoConfig cfg;
  cfg.population_k = local.pop;
  cfg.max_iterations = local.iters;
  cfg.diameter = parse_k1(local.k1, local.pop);
  cfg.trace_particles = true;
  cfg.seed = local.seed;
  const RunTrace t = sto_run(f, cfg);

  json r = common_resolved(local);
  r["function"] = f.name;
  r["dimension"] = f.dimension;
  r["algorithm"] = io::to_json(AlgorithmConfig{cfg});
  s.resolved() = r;
  s.write("trajectory.csv", [&](std::ostream& os) { io::write_particles_csv(os, t, f.dimension); });
  out << f.name << " frames=" << t.iterations_used + 1 << " terminated_by=" << to_string(t.terminated_by)
      << '\n';
}

inline void cmd_success(Session& s, const Options& o, std::ostream& out)
{
  const auto f = make_function(o);
  ExperimentSpec spec{f.name, f.dimension, make_algorithm(o.algorithm, o), o.trials, std::nullopt,
                      o.seed};
  if (o.trials < 1)
    throw usage_failure("--trials must be at least 1");
  const auto report = run_success_experiment(spec, s.policy());
  json r = common_resolved(o);
  r["spec"] = io::to_json(spec);
  s.resolved() = r;
  s.timing()["mean_seconds_per_run"] = report.mean_seconds;

  json j;
  j["spec"] = io::to_json(spec);
  j["report"] = io::to_json(report);
  s.write_json("report.json", j);
  out << f.name << ' ' << spec.algorithm.label << " success=" << io::format_double(report.success_probability)
      << " (" << report.successes << '/' << report.trials << ")\n";
}

inline void cmd_table(Session& s, const Options& o, std::ostream& out)
{
  if (!o.preset.empty() && o.preset != "paper")
    throw usage_failure("unknown preset '" + o.preset + "'; valid: paper");
  Options p = o;
  if (o.preset == "paper") {
    p.pop = 40;
    p.iters = 100;
  }
  if (p.trials < 1)
    throw usage_failure("--trials must be at least 1");
  const auto columns = paper_table_columns();
  p.algorithms = "sto,pso,ga,tlbo";
  p.k1 = "random";
  const auto algs = make_algorithms(p);

  // Tuned STO row: k1 = 35 on Modified Rosenbrock, rediscovered by a
  // diameter sweep on an independent seed for the other 2-D functions.
  std::vector<std::pair<std::string, std::size_t>> tuned{{"rosenbrock_modified", 35}};
  json tuning = json::object();
  for (const char* fn : {"eggholder", "ripple25", "beale"}) {
    const auto sweep = diameter_sweep(fn, 2, p.pop, p.tune_trials, p.iters,
                                      child_seed(p.seed, 0x7475'6e65ULL), s.policy());
    tuned.emplace_back(fn, best_k1(sweep));
    tuning[fn] = tuned.back().second;
  }
  tuning["rosenbrock_modified"] = 35;
  if (p.pop <= 35)
    tuned.erase(tuned.begin());

  const auto rows = success_table(columns, algs, tuned, p.pop, p.iters, p.trials, p.seed, s.policy());

  json r = common_resolved(p);
  r["preset"] = o.preset;
  r["trials"] = p.trials;
  r["tune_trials"] = p.tune_trials;
  r["tuned_k1"] = tuning;
  s.resolved() = r;

  json j = io::to_json(columns, rows);
  j["tuned_k1"] = tuning;
  j["trials"] = p.trials;
  j["population"] = p.pop;
  j["iterations"] = p.iters;
  j["master_seed"] = p.seed;
  s.write_json("table.json", j);

  out << std::left << std::setw(12) << "algorithm";
  for (const auto& c : columns)
    out << std::setw(22) << c.function + (c.dimension != 2 ? "(" + std::to_string(c.dimension) + "D)" : "");
  out << '\n';
  for (const auto& row : rows) {
    out << std::setw(12) << row.algorithm;
    for (const auto& v : row.success) {
      std::ostringstream cell;
      if (v)
        cell << std::fixed << std::setprecision(3) << *v;
      else
        cell << "-";
      out << std::setw(22) << cell.str();
    }
    out << '\n';
  }
}

inline void cmd_sweep_diameter(Session& s, const Options& o, std::ostream& out)
{
  const auto f = make_function(o);
  if (o.pop < 3)
    throw usage_failure("--pop must be at least 3");
  const auto points = diameter_sweep(f.name, f.dimension, o.pop, o.trials, o.iters, o.seed, s.policy());
  json r = common_resolved(o);
  r["function"] = f.name;
  r["dimension"] = f.dimension;
  r["trials"] = o.trials;
  s.resolved() = r;
  s.write("sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, points); });
  out << f.name << " k1=1.." << o.pop - 1 << " best_k1=" << best_k1(points) << '\n';
}

inline void cmd_dim_sweep(Session& s, const Options& o, std::ostream& out)
{
  std::vector<std::size_t> dims;
  for (const auto& d : split_list(o.dims)) {
    std::size_t v = 0;
    const auto res = std::from_chars(d.data(), d.data() + d.size(), v);
    if (res.ec != std::errc{} || res.ptr != d.data() + d.size() || v < 1)
      throw usage_failure("--dims expects a comma-separated list of positive integers");
    dims.push_back(v);
  }
  if (dims.empty())
    throw usage_failure("--dims is empty");
  if (o.trials < 1)
    throw usage_failure("--trials must be at least 1");
  const auto algs = make_algorithms(o);
  const auto cells = dimension_sweep(dims, algs, o.trials, o.iters, o.seed, s.policy());
  json r = common_resolved(o);
  r["function"] = "styblinski_tang";
  r["dims"] = dims;
  r["trials"] = o.trials;
  r["algorithms"] = split_list(o.algorithms);
  s.resolved() = r;
  s.write("dim_sweep.csv", [&](std::ostream& os) { io::write_dimension_csv(os, cells); });
  for (const auto& c : cells)
    out << c.algorithm << " dim=" << c.dimension << " success=" << io::format_double(c.success_probability)
        << '\n';
}

inline void cmd_curves(Session& s, const Options& o, std::ostream& out)
{
  const auto f = make_function(o);
  const auto algs = make_algorithms(o);
  if (o.runs < 1)
    throw usage_failure("--runs must be at least 1");
  const auto series = convergence_curves(f.name, f.dimension, algs, o.runs, o.iters, o.seed, s.policy());
  json r = common_resolved(o);
  r["function"] = f.name;
  r["dimension"] = f.dimension;
  r["runs"] = o.runs;
  r["algorithms"] = split_list(o.algorithms);
  s.resolved() = r;
  s.write("convergence.csv", [&](std::ostream& os) { io::write_convergence_csv(os, series); });
  s.write("convergence_runs.csv", [&](std::ostream& os) { io::write_convergence_runs_csv(os, series); });
  for (const auto& c : series)
    out << c.algorithm << " final_mean=" << io::format_double(c.mean_best_cost.back()) << '\n';
}

inline void cmd_runtime(Session& s, const Options& o, std::ostream& out)
{
  const auto f = make_function(o);
  const auto algs = make_algorithms(o);
  if (o.runs < 1)
    throw usage_failure("--runs must be at least 1");
  const auto entries = runtime_comparison(f.name, f.dimension, algs, o.runs, o.iters, o.seed);
  json r = common_resolved(o);
  r["function"] = f.name;
  r["dimension"] = f.dimension;
  r["runs"] = o.runs;
  r["algorithms"] = split_list(o.algorithms);
  s.resolved() = r;
  s.timing()["runtime"] = io::to_json(entries, true);
  s.write("runtime.csv", [&](std::ostream& os) {
    os << "algorithm,evaluations_per_iteration,mean_evaluations\n";
    for (const auto& e : entries)
      os << e.algorithm << ',' << e.evaluations_per_iteration << ',' << io::format_double(e.mean_evaluations)
         << '\n';
  });
  // wall-clock numbers are machine dependent and kept out of runtime.csv
  s.write_json("runtime_timing.json", io::to_json(entries, true));
  for (const auto& e : entries)
    out << std::left << std::setw(8) << e.algorithm << " evals/iter=" << e.evaluations_per_iteration
        << " normalized_time=" << std::fixed << std::setprecision(3) << e.normalized << '\n';
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

inline int replay(const Options& o, std::ostream& out, std::ostream& err)
{
  std::ifstream is(o.manifest);
  if (!is) {
    err << "cannot read manifest " << o.manifest << '\n';
    return usage_error;
  }
  json m;
  try {
    m = json::parse(is);
  } catch (const json::exception& e) {
    err << "invalid manifest: " << e.what() << '\n';
    return usage_error;
  }
  if (!m.contains("command") || !m["command"].is_array()) {
    err << "manifest has no command\n";
    return usage_error;
  }
  std::vector<std::string> args;
  for (std::size_t i = 0; i < m["command"].size(); ++i) {
    const auto a = m["command"][i].get<std::string>();
    if (a == "--out") {
      ++i;
      continue;
    }
    args.push_back(a);
  }
  if (!o.out.empty()) {
    args.push_back("--out");
    args.push_back(o.out);
  }
  return run(std::move(args), out, err);
}

/// Parses `args` (without the program name) and dispatches. Returns the
/// process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Tornado optimizer and metaheuristic benchmark harness", "sto_cli"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, std::string("output directory (default $") + out_dir_env + " or .)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--pop", o.pop, "population size")->check(CLI::PositiveNumber);
    sub->add_option("--iters", o.iters, "iterations per run")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "trial worker threads (0 = all cores)");
    sub->add_flag("--serial", o.serial, "run trials serially in index order");
  };
  auto add_function = [&](CLI::App* sub) {
    sub->add_option("--function", o.function, "benchmark: " + benchmarks::names_list());
    sub->add_option("--dim", o.dim, "dimension for styblinski_tang / rastrigin");
  };

  auto* run_cmd = app.add_subcommand("run", "single optimization run");
  add_common(run_cmd);
  add_function(run_cmd);
  run_cmd->add_option("--algorithm", o.algorithm, "sto, pso, ga or tlbo");
  run_cmd->add_option("--k1", o.k1, "tornado diameter: integer or 'random'");
  run_cmd->add_flag("--trace-particles", o.trace_particles, "also write particles.csv (sto only)");

  auto* success_cmd = app.add_subcommand("success", "success probability over many trials");
  add_common(success_cmd);
  add_function(success_cmd);
  success_cmd->add_option("--algorithm", o.algorithm, "sto, pso, ga or tlbo");
  success_cmd->add_option("--k1", o.k1, "tornado diameter: integer or 'random'");
  success_cmd->add_option("--trials", o.trials, "number of trials");

  auto* table_cmd = app.add_subcommand("table", "success table over the five comparison functions");
  add_common(table_cmd);
  table_cmd->add_option("--preset", o.preset, "'paper' = population 40, 100 iterations");
  table_cmd->add_option("--trials", o.trials, "trials per cell");
  table_cmd->add_option("--tune-trials", o.tune_trials, "trials per k1 when tuning the fixed-diameter row")
      ->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep-diameter", "success versus fixed k1");
  add_common(sweep_cmd);
  add_function(sweep_cmd);
  sweep_cmd->add_option("--trials", o.trials, "trials per k1")->check(CLI::PositiveNumber);

  auto* dim_cmd = app.add_subcommand("dim-sweep", "Styblinski-Tang success versus dimension");
  add_common(dim_cmd);
  dim_cmd->add_option("--dims", o.dims, "comma-separated dimensions");
  dim_cmd->add_option("--algorithms", o.algorithms, "comma-separated algorithms");
  dim_cmd->add_option("--k1", o.k1, "tornado diameter for sto");
  dim_cmd->add_option("--trials", o.trials, "trials per cell");

  auto* curves_cmd = app.add_subcommand("curves", "mean best-cost convergence curves");
  add_common(curves_cmd);
  add_function(curves_cmd);
  curves_cmd->add_option("--algorithms", o.algorithms, "comma-separated algorithms");
  curves_cmd->add_option("--k1", o.k1, "tornado diameter for sto");
  curves_cmd->add_option("--runs", o.runs, "independent runs to average");

  auto* runtime_cmd = app.add_subcommand("runtime", "relative run time and evaluation counts");
  add_common(runtime_cmd);
  add_function(runtime_cmd);
  runtime_cmd->add_option("--algorithms", o.algorithms, "comma-separated algorithms");
  runtime_cmd->add_option("--k1", o.k1, "tornado diameter for sto");
  runtime_cmd->add_option("--runs", o.runs, "runs per algorithm");

  auto* trace_cmd = app.add_subcommand("trace", "particle trajectory of one STO run");
  add_common(trace_cmd);
  add_function(trace_cmd);
  trace_cmd->add_option("--k1", o.k1, "tornado diameter (default pop/2)");

  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", o.manifest, "manifest.json to replay")->required();
  replay_cmd->add_option("--out", o.out, "output directory for the replay");

  // CLI11 wants argv order reversed when given a vector
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  if (replay_cmd->parsed())
    return replay(o, out, err);

  // per-subcommand defaults that differ from the shared ones
  if ((curves_cmd->parsed() || runtime_cmd->parsed()) && app.get_subcommands().front()->count("--function") == 0) {
    o.function = "rastrigin";
    if (o.dim == 0)
      o.dim = 5;
  }
  if (dim_cmd->parsed() && dim_cmd->count("--iters") == 0)
    o.iters = 5000;
  if (dim_cmd->parsed() && dim_cmd->count("--trials") == 0)
    o.trials = 100;
  if (trace_cmd->parsed() && trace_cmd->count("--function") == 0)
    o.function = "eggholder";

  CLI::App* chosen = app.get_subcommands().front();
  try {
    Session session(chosen->get_name(), args, o);
    if (chosen == run_cmd)
      cmd_run(session, o, out);
    else if (chosen == success_cmd)
      cmd_success(session, o, out);
    else if (chosen == table_cmd)
      cmd_table(session, o, out);
    else if (chosen == sweep_cmd)
      cmd_sweep_diameter(session, o, out);
    else if (chosen == dim_cmd)
      cmd_dim_sweep(session, o, out);
    else if (chosen == curves_cmd)
      cmd_curves(session, o, out);
    else if (chosen == runtime_cmd)
      cmd_runtime(session, o, out);
    else
      cmd_trace(session, o, out, err);
    session.finish(out);
  } catch (const usage_failure& e) {
    err << "error: " << e.what() << '\n' << chosen->help();
    return usage_error;
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_failure;
  }
  return ok;
}

} // namespace sto::cli
