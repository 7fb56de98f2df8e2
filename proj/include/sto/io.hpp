#pragma once

// CSV and JSON emission for traces and experiment results. Data files carry
// no timestamps or wall-clock numbers so that replays are byte-identical;
// timings are written to the run manifest instead.

#include "sto/experiments.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <ostream>

namespace sto::io {

using json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_trace_csv(std::ostream& os, const RunTrace& t)
{
  os << "iteration,best_cost\n";
  for (std::size_t i = 0; i < t.best_cost_per_iteration.size(); ++i)
    os << i + 1 << ',' << format_double(t.best_cost_per_iteration[i]) << '\n';
}

/// One row per particle per iteration: iteration 0 is the initial swarm.
inline void write_particles_csv(std::ostream& os, const RunTrace& t, std::size_t dimension)
{
  os << "iteration,particle,current_type";
  for (std::size_t d = 0; d < dimension; ++d)
    os << ",x" << d + 1;
  os << ",cost\n";
  for (const auto& p : t.particles) {
    os << p.iteration << ',' << p.particle << ',' << to_string(p.current);
    for (double v : p.position)
      os << ',' << format_double(v);
    os << ',' << format_double(p.cost) << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points,
                            const std::string& algorithm = "sto")
{
  os << "k1,algorithm,success\n";
  for (const auto& p : points)
    os << p.k1 << ',' << algorithm << ',' << format_double(p.success_probability) << '\n';
}

inline void write_dimension_csv(std::ostream& os, std::span<const DimensionCell> cells)
{
  os << "dim,algorithm,success\n";
  for (const auto& c : cells)
    os << c.dimension << ',' << c.algorithm << ',' << format_double(c.success_probability) << '\n';
}

inline void write_convergence_csv(std::ostream& os, std::span<const ConvergenceSeries> series)
{
  os << "iteration,algorithm,mean_best_cost\n";
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.mean_best_cost.size(); ++i)
      os << i + 1 << ',' << s.algorithm << ',' << format_double(s.mean_best_cost[i]) << '\n';
}

/// Raw per-run series behind the mean curves.
inline void write_convergence_runs_csv(std::ostream& os, std::span<const ConvergenceSeries> series)
{
  os << "iteration,algorithm,run,best_cost\n";
  for (const auto& s : series)
    for (std::size_t r = 0; r < s.runs.size(); ++r)
      for (std::size_t i = 0; i < s.runs[r].size(); ++i)
        os << i + 1 << ',' << s.algorithm << ',' << r << ',' << format_double(s.runs[r][i]) << '\n';
}

inline json to_json(const DiameterPolicy& p)
{
  if (const auto* f = std::get_if<FixedDiameter>(&p))
    return json{{"policy", "fixed"}, {"k1", f->k1}};
  return json{{"policy", "randomized"}};
}

inline json to_json(const AlgorithmConfig& cfg)
{
  return std::visit(
      [](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        json j;
        j["population"] = c.population_k;
        j["max_iterations"] = c.max_iterations;
        if constexpr (std::is_same_v<C, StoConfig>) {
          j["algorithm"] = "sto";
          j["diameter"] = to_json(c.diameter);
          j["vanish_epsilon"] = c.vanish_epsilon;
        } else if constexpr (std::is_same_v<C, PsoConfig>) {
          j["algorithm"] = "pso";
          j["phi1"] = c.phi1;
          j["phi2"] = c.phi2;
          j["chi"] = constriction_coefficient(c.phi1 + c.phi2);
        } else if constexpr (std::is_same_v<C, GaConfig>) {
          j["algorithm"] = "ga";
          j["crossover_fraction"] = c.crossover_fraction;
          j["crossover_coefficient"] = c.crossover_coefficient;
          j["mutation_probability"] = c.mutation_probability;
          j["mutation_scale"] = c.mutation_scale;
          j["tournament_size"] = c.tournament_size;
        } else {
          j["algorithm"] = "tlbo";
        }
        return j;
      },
      cfg);
}

inline json to_json(const SuccessCriterion& c)
{
  if (const auto* d = std::get_if<DistortionBelow>(&c))
    return json{{"kind", "distortion"}, {"threshold", d->threshold}};
  return json{{"kind", "cost_below"}, {"threshold", std::get<CostBelow>(c).threshold}};
}

inline json to_json(const ExperimentSpec& s)
{
  const auto f = benchmarks::make(s.function, s.dimension);
  json j;
  j["function"] = f.name;
  j["dimension"] = f.dimension;
  j["algorithm_label"] = s.algorithm.label;
  j["algorithm"] = to_json(s.algorithm.config);
  j["trials"] = s.trials;
  j["criterion"] = to_json(s.criterion.value_or(default_criterion(f)));
  j["master_seed"] = s.master_seed;
  return j;
}

/// Deterministic part of a report (everything except wall-clock time).
inline json to_json(const ExperimentReport& r)
{
  json j;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["success_probability"] = r.success_probability;
  j["mean_final_cost"] = r.mean_final_cost;
  j["min_final_cost"] = r.min_final_cost;
  j["median_final_cost"] = r.median_final_cost;
  j["mean_distortion"] = r.mean_distortion ? json(*r.mean_distortion) : json(nullptr);
  j["mean_evaluations"] = r.mean_evaluations;
  j["mean_iterations"] = r.mean_iterations;
  json trials = json::array();
  for (const auto& o : r.outcomes) {
    json t;
    t["seed"] = o.seed;
    t["final_cost"] = o.final_cost;
    t["final_position"] = o.final_position;
    t["distortion"] = o.distortion ? json(*o.distortion) : json(nullptr);
    t["success"] = o.success;
    t["evaluations"] = o.evaluations;
    t["iterations"] = o.iterations;
    trials.push_back(std::move(t));
  }
  j["per_trial"] = std::move(trials);
  return j;
}

inline json to_json(const RunTrace& t)
{
  json j;
  j["best_cost"] = t.best_cost;
  j["best_position"] = t.best_position;
  j["total_evaluations"] = t.total_evaluations;
  j["iterations_used"] = t.iterations_used;
  j["terminated_by"] = to_string(t.terminated_by);
  return j;
}

inline json to_json(std::span<const TableColumn> columns, std::span<const TableRow> rows)
{
  json j;
  json cols = json::array();
  for (const auto& c : columns)
    cols.push_back(json{{"function", c.function}, {"dimension", c.dimension}});
  j["columns"] = std::move(cols);
  json rs = json::array();
  for (const auto& r : rows) {
    json row;
    row["algorithm"] = r.algorithm;
    json cells = json::array();
    for (const auto& s : r.success)
      cells.push_back(s ? json(*s) : json(nullptr));
    row["success"] = std::move(cells);
    rs.push_back(std::move(row));
  }
  j["rows"] = std::move(rs);
  return j;
}

inline json to_json(std::span<const RuntimeEntry> entries, bool include_timing)
{
  json arr = json::array();
  for (const auto& e : entries) {
    json j;
    j["algorithm"] = e.algorithm;
    j["evaluations_per_iteration"] = e.evaluations_per_iteration;
    j["mean_evaluations"] = e.mean_evaluations;
    if (include_timing) {
      j["mean_seconds"] = e.mean_seconds;
      j["mean_seconds_per_iteration"] = e.mean_seconds_per_iteration;
      j["normalized_time"] = e.normalized;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

} // namespace sto::io
