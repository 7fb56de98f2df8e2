#pragma once

#include "sto/baselines.hpp"
#include "sto/benchmarks.hpp"
#include "sto/sto.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace sto {

using AlgorithmConfig = std::variant<StoConfig, PsoConfig, GaConfig, TlboConfig>;

/// A configured algorithm plus the label it is reported under.
struct Algorithm
{
  std::string label;
  AlgorithmConfig config;
};

inline std::string algorithm_kind(const AlgorithmConfig& cfg)
{
  constexpr const char* kinds[] = {"sto", "pso", "ga", "tlbo"};
  return kinds[cfg.index()];
}

inline std::size_t population_of(const AlgorithmConfig& cfg)
{
  return std::visit([](const auto& c) { return c.population_k; }, cfg);
}

inline std::size_t iterations_of(const AlgorithmConfig& cfg)
{
  return std::visit([](const auto& c) { return c.max_iterations; }, cfg);
}

inline void set_iterations(AlgorithmConfig& cfg, std::size_t iterations)
{
  std::visit([&](auto& c) { c.max_iterations = iterations; }, cfg);
}

inline void set_population(AlgorithmConfig& cfg, std::size_t k)
{
  std::visit([&](auto& c) { c.population_k = k; }, cfg);
}

inline void validate(const AlgorithmConfig& cfg)
{
  std::visit([](const auto& c) { c.validate(); }, cfg);
}

/// Objective evaluations spent by one iteration of the main loop.
inline std::size_t evaluations_per_iteration(const AlgorithmConfig& cfg)
{
  const std::size_t k = population_of(cfg);
  switch (cfg.index()) {
  case 0: return k - 1;
  case 3: return 2 * k;
  default: return k;
  }
}

inline RunTrace run_algorithm(const ObjectiveFunction& f, AlgorithmConfig cfg, std::uint64_t seed)
{
  return std::visit(
      [&](auto& c) -> RunTrace {
        c.seed = seed;
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, StoConfig>)
          return sto_run(f, c);
        else if constexpr (std::is_same_v<C, PsoConfig>)
          return pso_run(f, c);
        else if constexpr (std::is_same_v<C, GaConfig>)
          return ga_run(f, c);
        else
          return tlbo_run(f, c);
      },
      cfg);
}

// ---------------------------------------------------------------------------
// success metrics

struct DistortionBelow
{
  double threshold = 1e-4;
  bool operator==(const DistortionBelow&) const = default;
};

struct CostBelow
{
  double threshold;
  bool operator==(const CostBelow&) const = default;
};

using SuccessCriterion = std::variant<DistortionBelow, CostBelow>;

/// Relative Euclidean error ||x* - x_hat|| / ||x*||.
inline double distortion(std::span<const double> x_hat, std::span<const double> x_star)
{
  if (x_hat.size() != x_star.size())
    throw domain_error("distortion: vectors differ in length");
  const double ref = euclidean_norm(x_star);
  if (!(ref > 0.0))
    throw domain_error("distortion: optimum has zero norm; use a CostBelow criterion");
  return std::sqrt(squared_distance(x_hat, x_star)) / ref;
}

/// Modified Rosenbrock succeeds below cost 36, Rastrigin below 1e-4, and
/// everything else on distortion < 1e-4.
inline SuccessCriterion default_criterion(const ObjectiveFunction& f)
{
  if (f.name == "rosenbrock_modified")
    return CostBelow{36.0};
  if (f.name == "rastrigin")
    return CostBelow{1e-4};
  return DistortionBelow{1e-4};
}

inline void validate(const SuccessCriterion& c, const ObjectiveFunction& f)
{
  if (const auto* d = std::get_if<DistortionBelow>(&c)) {
    if (!(d->threshold > 0.0))
      throw config_error("distortion threshold must be positive");
    if (!f.known_optimum || !(euclidean_norm(*f.known_optimum) > 0.0))
      throw config_error(f.name + ": distortion needs a known non-zero optimum; use cost_below");
  }
}

inline bool is_success(const SuccessCriterion& c, const ObjectiveFunction& f, const RunTrace& t)
{
  if (const auto* cb = std::get_if<CostBelow>(&c))
    return t.best_cost < cb->threshold;
  return distortion(t.best_position, *f.known_optimum) < std::get<DistortionBelow>(c).threshold;
}

// ---------------------------------------------------------------------------
// trial execution

struct ExecutionPolicy
{
  /// 0 = one worker per hardware thread.
  std::size_t workers = 0;
  bool serial = false;

  std::size_t resolved_workers() const
  {
    if (serial)
      return 1;
    if (workers > 0)
      return workers;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Calls fn(i) for i in [0, count). Work is handed out dynamically; results
/// must be written to per-index slots so the outcome does not depend on the
/// schedule. The first exception thrown by any worker is rethrown.
template <typename Fn>
void for_each_trial(std::size_t count, const ExecutionPolicy& policy, Fn&& fn)
{
  const std::size_t workers = std::min(policy.resolved_workers(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
          next = count;
        }
      }
    });
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

struct ExperimentSpec
{
  std::string function = "beale";
  std::size_t dimension = 0;
  Algorithm algorithm{"sto", StoConfig{}};
  std::size_t trials = 200;
  /// Empty means the per-function default.
  std::optional<SuccessCriterion> criterion;
  std::uint64_t master_seed = 1;
};

struct TrialOutcome
{
  std::uint64_t seed = 0;
  double final_cost = 0.0;
  Vector final_position;
  std::optional<double> distortion;
  bool success = false;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

struct ExperimentReport
{
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_probability = 0.0;
  double mean_final_cost = 0.0;
  double min_final_cost = 0.0;
  double median_final_cost = 0.0;
  std::optional<double> mean_distortion;
  double mean_evaluations = 0.0;
  double mean_iterations = 0.0;
  /// Wall-clock figures; the only schedule-dependent part of the report.
  double mean_seconds = 0.0;
  std::vector<TrialOutcome> outcomes;
};

inline ExperimentReport aggregate(std::vector<TrialOutcome> outcomes)
{
  ExperimentReport r;
  r.trials = outcomes.size();
  if (r.trials == 0)
    return r;
  std::vector<double> costs;
  costs.reserve(r.trials);
  double dist_sum = 0.0;
  std::size_t dist_count = 0;
  for (const auto& o : outcomes) {
    r.successes += o.success ? 1 : 0;
    costs.push_back(o.final_cost);
    r.mean_final_cost += o.final_cost;
    r.mean_evaluations += static_cast<double>(o.evaluations);
    r.mean_iterations += static_cast<double>(o.iterations);
    r.mean_seconds += o.seconds;
    if (o.distortion) {
      dist_sum += *o.distortion;
      ++dist_count;
    }
  }
  const auto n = static_cast<double>(r.trials);
  r.success_probability = static_cast<double>(r.successes) / n;
  r.mean_final_cost /= n;
  r.mean_evaluations /= n;
  r.mean_iterations /= n;
  r.mean_seconds /= n;
  if (dist_count > 0)
    r.mean_distortion = dist_sum / static_cast<double>(dist_count);
  std::sort(costs.begin(), costs.end());
  r.min_final_cost = costs.front();
  r.median_final_cost = r.trials % 2 == 1
                            ? costs[r.trials / 2]
                            : 0.5 * (costs[r.trials / 2 - 1] + costs[r.trials / 2]);
  r.outcomes = std::move(outcomes);
  return r;
}

inline ExperimentReport run_success_experiment(const ExperimentSpec& spec,
                                               const ExecutionPolicy& policy = {})
{
  if (spec.trials < 1)
    throw config_error("experiment: trials must be at least 1");
  const ObjectiveFunction f = benchmarks::make(spec.function, spec.dimension);
  const SuccessCriterion criterion = spec.criterion.value_or(default_criterion(f));
  validate(criterion, f);
  validate(spec.algorithm.config);
  const bool has_distortion = f.known_optimum && euclidean_norm(*f.known_optimum) > 0.0;

  std::vector<TrialOutcome> outcomes(spec.trials);
  for_each_trial(spec.trials, policy, [&](std::size_t t) {
    TrialOutcome& o = outcomes[t];
    o.seed = child_seed(spec.master_seed, t);
    const auto start = std::chrono::steady_clock::now();
    const RunTrace trace = run_algorithm(f, spec.algorithm.config, o.seed);
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.final_cost = trace.best_cost;
    o.final_position = trace.best_position;
    if (has_distortion)
      o.distortion = distortion(trace.best_position, *f.known_optimum);
    o.success = is_success(criterion, f, trace);
    o.evaluations = trace.total_evaluations;
    o.iterations = trace.iterations_used;
  });
  return aggregate(std::move(outcomes));
}

// ---------------------------------------------------------------------------
// protocols

struct SweepPoint
{
  std::size_t k1;
  double success_probability;
};

/// Fixed-diameter STO for every k1 in {1, ..., k-1}. Every point reuses the
/// same trial seeds.
inline std::vector<SweepPoint> diameter_sweep(const std::string& function, std::size_t dimension,
                                              std::size_t k, std::size_t trials,
                                              std::size_t iterations, std::uint64_t master_seed,
                                              const ExecutionPolicy& policy = {})
{
  if (k < 3)
    throw config_error("diameter_sweep: k must be at least 3");
  std::vector<SweepPoint> out;
  out.reserve(k - 1);
  for (std::size_t k1 = 1; k1 < k; ++k1) {
    StoConfig cfg;
    cfg.population_k = k;
    cfg.diameter = FixedDiameter{k1};
    cfg.max_iterations = iterations;
    ExperimentSpec spec{function, dimension, {"sto", cfg}, trials, std::nullopt, master_seed};
    out.push_back({k1, run_success_experiment(spec, policy).success_probability});
  }
  return out;
}

/// k1 with the highest success in a sweep; lowest k1 on ties.
inline std::size_t best_k1(std::span<const SweepPoint> points)
{
  if (points.empty())
    throw config_error("best_k1: empty sweep");
  const SweepPoint* best = &points.front();
  for (const auto& p : points)
    if (p.success_probability > best->success_probability)
      best = &p;
  return best->k1;
}

struct DimensionCell
{
  std::string algorithm;
  std::size_t dimension;
  double success_probability;
};

/// Styblinski-Tang success per (algorithm, dimension) on distortion.
inline std::vector<DimensionCell> dimension_sweep(std::span<const std::size_t> dims,
                                                  std::span<const Algorithm> algorithms,
                                                  std::size_t trials, std::size_t max_iterations,
                                                  std::uint64_t master_seed,
                                                  const ExecutionPolicy& policy = {})
{
  if (dims.empty())
    throw config_error("dimension_sweep: no dimensions given");
  if (trials < 1)
    throw config_error("dimension_sweep: trials must be at least 1");
  std::vector<DimensionCell> out;
  for (const auto& alg : algorithms) {
    for (auto dim : dims) {
      Algorithm a = alg;
      set_iterations(a.config, max_iterations);
      ExperimentSpec spec{"styblinski_tang", dim, a, trials, DistortionBelow{}, master_seed};
      out.push_back({alg.label, dim, run_success_experiment(spec, policy).success_probability});
    }
  }
  return out;
}

struct ConvergenceSeries
{
  std::string algorithm;
  std::vector<double> mean_best_cost;
  /// Raw per-run series, padded with the final value when a run stopped
  /// early.
  std::vector<std::vector<double>> runs;
};

inline std::vector<double> pad_series(std::vector<double> s, std::size_t length)
{
  if (!s.empty() && s.size() < length)
    s.resize(length, s.back());
  return s;
}

inline std::vector<ConvergenceSeries> convergence_curves(const std::string& function,
                                                         std::size_t dimension,
                                                         std::span<const Algorithm> algorithms,
                                                         std::size_t runs, std::size_t iterations,
                                                         std::uint64_t master_seed,
                                                         const ExecutionPolicy& policy = {})
{
  if (runs < 1)
    throw config_error("convergence_curves: runs must be at least 1");
  const ObjectiveFunction f = benchmarks::make(function, dimension);
  std::vector<ConvergenceSeries> out;
  for (const auto& alg : algorithms) {
    AlgorithmConfig cfg = alg.config;
    set_iterations(cfg, iterations);
    validate(cfg);
    ConvergenceSeries series{alg.label, std::vector<double>(iterations, 0.0),
                             std::vector<std::vector<double>>(runs)};
    for_each_trial(runs, policy, [&](std::size_t r) {
      series.runs[r] = pad_series(
          run_algorithm(f, cfg, child_seed(master_seed, r)).best_cost_per_iteration, iterations);
    });
    for (const auto& run : series.runs)
      for (std::size_t i = 0; i < iterations; ++i)
        series.mean_best_cost[i] += run[i];
    for (auto& m : series.mean_best_cost)
      m /= static_cast<double>(runs);
    out.push_back(std::move(series));
  }
  return out;
}

struct RuntimeEntry
{
  std::string algorithm;
  double mean_seconds = 0.0;
  double mean_seconds_per_iteration = 0.0;
  /// mean_seconds divided by the slowest algorithm's mean_seconds.
  double normalized = 0.0;
  std::size_t evaluations_per_iteration = 0;
  double mean_evaluations = 0.0;
};

inline void normalize_runtimes(std::vector<RuntimeEntry>& entries)
{
  double slowest = 0.0;
  for (const auto& e : entries)
    slowest = std::max(slowest, e.mean_seconds);
  for (auto& e : entries)
    e.normalized = slowest > 0.0 ? e.mean_seconds / slowest : 0.0;
}

/// Wall time of the optimization loop per algorithm. Runs are executed one
/// after another so timings are not distorted by sibling threads.
inline std::vector<RuntimeEntry> runtime_comparison(const std::string& function,
                                                    std::size_t dimension,
                                                    std::span<const Algorithm> algorithms,
                                                    std::size_t runs, std::size_t iterations,
                                                    std::uint64_t master_seed)
{
  if (runs < 1)
    throw config_error("runtime_comparison: runs must be at least 1");
  const ObjectiveFunction f = benchmarks::make(function, dimension);
  std::vector<RuntimeEntry> out;
  for (const auto& alg : algorithms) {
    AlgorithmConfig cfg = alg.config;
    set_iterations(cfg, iterations);
    validate(cfg);
    RuntimeEntry e;
    e.algorithm = alg.label;
    e.evaluations_per_iteration = evaluations_per_iteration(cfg);
    double iters = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const RunTrace t = run_algorithm(f, cfg, child_seed(master_seed, r));
      e.mean_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      e.mean_evaluations += static_cast<double>(t.total_evaluations);
      iters += static_cast<double>(t.iterations_used);
    }
    e.mean_seconds_per_iteration = e.mean_seconds / iters;
    e.mean_seconds /= static_cast<double>(runs);
    e.mean_evaluations /= static_cast<double>(runs);
    out.push_back(e);
  }
  normalize_runtimes(out);
  return out;
}

/// STO (randomized diameter), PSO, GA, TLBO with their default settings.
inline std::vector<Algorithm> standard_algorithms(std::size_t k, std::size_t iterations)
{
  std::vector<Algorithm> algs{{"sto", StoConfig{}}, {"pso", PsoConfig{}}, {"ga", GaConfig{}},
                              {"tlbo", TlboConfig{}}};
  for (auto& a : algs) {
    set_population(a.config, k);
    set_iterations(a.config, iterations);
  }
  return algs;
}

struct TableRow
{
  std::string algorithm;
  /// One entry per table column; empty where the row does not apply.
  std::vector<std::optional<double>> success;
};

struct TableColumn
{
  std::string function;
  std::size_t dimension;
};

inline std::vector<TableColumn> paper_table_columns()
{
  return {{"eggholder", 2}, {"ripple25", 2}, {"beale", 2}, {"rosenbrock_modified", 2}, {"rastrigin", 5}};
}

/// Success table: rows are algorithms, columns are functions. `tuned_k1`
/// adds a fixed-diameter STO row for the columns that have an entry.
inline std::vector<TableRow> success_table(
    std::span<const TableColumn> columns, std::span<const Algorithm> algorithms,
    const std::vector<std::pair<std::string, std::size_t>>& tuned_k1, std::size_t k,
    std::size_t iterations, std::size_t trials, std::uint64_t master_seed,
    const ExecutionPolicy& policy = {})
{
  std::vector<TableRow> rows;
  auto run_cell = [&](const TableColumn& col, const Algorithm& alg) {
    ExperimentSpec spec{col.function, col.dimension, alg, trials, std::nullopt, master_seed};
    return run_success_experiment(spec, policy).success_probability;
  };

  if (!tuned_k1.empty()) {
    TableRow row{"sto_tuned", {}};
    for (const auto& col : columns) {
      auto it = std::find_if(tuned_k1.begin(), tuned_k1.end(),
                             [&](const auto& p) { return p.first == col.function; });
      if (it == tuned_k1.end()) {
        row.success.emplace_back();
        continue;
      }
      StoConfig cfg;
      cfg.population_k = k;
      cfg.max_iterations = iterations;
      cfg.diameter = FixedDiameter{it->second};
      row.success.emplace_back(run_cell(col, {"sto_tuned", cfg}));
    }
    rows.push_back(std::move(row));
  }
  for (const auto& alg : algorithms) {
    TableRow row{alg.label, {}};
    for (const auto& col : columns)
      row.success.emplace_back(run_cell(col, alg));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace sto
