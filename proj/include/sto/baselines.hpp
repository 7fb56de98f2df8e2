#pragma once

// Reference metaheuristics the tornado optimizer is compared against.
// All share the box clamping and evaluation accounting used by sto_run.

#include "sto/core.hpp"

namespace sto {

struct PsoConfig
{
  std::size_t population_k = 40;
  double phi1 = 2.05;
  double phi2 = 2.05;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  /// Test hook: replaces both r1 and r2 draws with this constant.
  std::optional<double> fixed_r;

  void validate() const
  {
    if (population_k < 1)
      throw config_error("pso: population must be positive");
    if (max_iterations < 1)
      throw config_error("pso: max_iterations must be at least 1");
    if (!(phi1 + phi2 > 4.0))
      throw config_error("pso: constriction needs phi1 + phi2 > 4");
  }
};

/// Clerc-Kennedy constriction multiplier for phi = phi1 + phi2 > 4.
inline double constriction_coefficient(double phi)
{
  if (!(phi > 4.0))
    throw config_error("constriction_coefficient: phi must exceed 4");
  return 2.0 / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
}

struct GaConfig
{
  std::size_t population_k = 40;
  double crossover_fraction = 0.8;
  /// Blend extension: each crossover weight is drawn from [-c, 1 + c].
  double crossover_coefficient = 0.05;
  /// Per-gene mutation probability.
  double mutation_probability = 0.08;
  /// Mutation standard deviation as a fraction of the domain width.
  double mutation_scale = 0.1;
  std::size_t tournament_size = 2;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;

  void validate() const
  {
    if (population_k < 2)
      throw config_error("ga: population must be at least 2");
    if (max_iterations < 1)
      throw config_error("ga: max_iterations must be at least 1");
    if (!(crossover_fraction > 0.0 && crossover_fraction < 1.0))
      throw config_error("ga: crossover_fraction must lie in (0, 1)");
    if (!(crossover_coefficient >= 0.0 && crossover_coefficient <= 1.0))
      throw config_error("ga: crossover_coefficient must lie in [0, 1]");
    if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0))
      throw config_error("ga: mutation_probability must lie in [0, 1]");
    if (!(mutation_scale > 0.0))
      throw config_error("ga: mutation_scale must be positive");
    if (tournament_size < 1)
      throw config_error("ga: tournament_size must be positive");
  }
};

struct TlboConfig
{
  std::size_t population_k = 40;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  /// Test hook: teaching factor forced to 1 or 2 instead of drawn.
  std::optional<int> fixed_teaching_factor;

  void validate() const
  {
    if (population_k < 2)
      throw config_error("tlbo: population must be at least 2");
    if (max_iterations < 1)
      throw config_error("tlbo: max_iterations must be at least 1");
    if (fixed_teaching_factor && *fixed_teaching_factor != 1 && *fixed_teaching_factor != 2)
      throw config_error("tlbo: teaching factor must be 1 or 2");
  }
};

namespace detail {

struct Population
{
  std::vector<Vector> x;
  std::vector<double> cost;
};

inline Population random_population(const ObjectiveFunction& f, std::size_t k, RandomStream& rng)
{
  Population p;
  p.x.reserve(k);
  p.cost.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    p.x.push_back(random_point(f.bounds, rng));
    p.cost.push_back(evaluate(f, p.x.back()));
  }
  return p;
}

inline void finish(RunTrace& t, const Vector& best_x, double best_cost, std::size_t evals)
{
  t.iterations_used = t.best_cost_per_iteration.size();
  t.best_position = best_x;
  t.best_cost = best_cost;
  t.total_evaluations = evals;
  t.terminated_by = Termination::MaxIterations;
}

} // namespace detail

/// Constriction-form PSO with a global-best topology and zero initial
/// velocities. The global best is refreshed once per sweep.
inline RunTrace pso_run(const ObjectiveFunction& f, const PsoConfig& cfg)
{
  cfg.validate();
  RandomStream rng(cfg.seed);
  const std::size_t k = cfg.population_k;
  const std::size_t n = f.dimension;
  const double chi = constriction_coefficient(cfg.phi1 + cfg.phi2);

  auto swarm = detail::random_population(f, k, rng);
  std::vector<Vector> velocity(k, Vector(n, 0.0));
  std::vector<Vector> pbest = swarm.x;
  std::vector<double> pbest_cost = swarm.cost;
  std::size_t g = argmin(pbest_cost);
  Vector gbest = pbest[g];
  double gbest_cost = pbest_cost[g];
  std::size_t evals = k;

  RunTrace trace;
  trace.best_cost_per_iteration.reserve(cfg.max_iterations);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      Vector& x = swarm.x[i];
      Vector& v = velocity[i];
      for (std::size_t d = 0; d < n; ++d) {
        const double r1 = cfg.fixed_r ? *cfg.fixed_r : rng.uniform();
        const double r2 = cfg.fixed_r ? *cfg.fixed_r : rng.uniform();
        v[d] = chi * (v[d] + cfg.phi1 * r1 * (pbest[i][d] - x[d]) + cfg.phi2 * r2 * (gbest[d] - x[d]));
        x[d] += v[d];
      }
      clamp_in_place(x, f.bounds);
      swarm.cost[i] = evaluate(f, x);
      if (swarm.cost[i] < pbest_cost[i]) {
        pbest_cost[i] = swarm.cost[i];
        pbest[i] = x;
      }
    }
    evals += k;
    g = argmin(pbest_cost);
    if (pbest_cost[g] < gbest_cost) {
      gbest_cost = pbest_cost[g];
      gbest = pbest[g];
    }
    trace.best_cost_per_iteration.push_back(gbest_cost);
  }
  detail::finish(trace, gbest, gbest_cost, evals);
  return trace;
}

namespace ga {

/// Blend crossover: child = a + u (b - a), u_d ~ U[-ext, 1 + ext].
inline Vector blend_crossover(const Vector& a, const Vector& b, double ext, RandomStream& rng)
{
  Vector child(a.size());
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double u = rng.uniform(-ext, 1.0 + ext);
    child[d] = a[d] + u * (b[d] - a[d]);
  }
  return child;
}

/// Gaussian perturbation of each gene with probability `p`.
inline Vector gaussian_mutation(Vector x, const Bounds& b, double p, double scale, RandomStream& rng)
{
  for (std::size_t d = 0; d < x.size(); ++d)
    if (rng.uniform() < p)
      x[d] += scale * b.width(d) * rng.normal();
  return x;
}

inline std::size_t tournament(std::span<const double> cost, std::size_t size, RandomStream& rng)
{
  std::size_t best = rng.uniform_index(0, cost.size() - 1);
  for (std::size_t t = 1; t < size; ++t) {
    const std::size_t c = rng.uniform_index(0, cost.size() - 1);
    if (cost[c] < cost[best] || (cost[c] == cost[best] && c < best))
      best = c;
  }
  return best;
}

} // namespace ga

/// Generational real-coded GA. Each generation produces ceil(fraction * k)
/// children by blend crossover and the rest by Gaussian mutation; the
/// previous best replaces the worst child when no child beats it.
inline RunTrace ga_run(const ObjectiveFunction& f, const GaConfig& cfg)
{
  cfg.validate();
  RandomStream rng(cfg.seed);
  const std::size_t k = cfg.population_k;
  const auto n_cross = std::min(
      k, static_cast<std::size_t>(std::ceil(cfg.crossover_fraction * static_cast<double>(k) - 1e-9)));

  auto pop = detail::random_population(f, k, rng);
  std::size_t evals = k;
  RunTrace trace;
  trace.best_cost_per_iteration.reserve(cfg.max_iterations);

  for (std::size_t gen = 0; gen < cfg.max_iterations; ++gen) {
    const std::size_t elite = argmin(pop.cost);
    detail::Population next;
    next.x.reserve(k);
    next.cost.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      Vector child;
      if (c < n_cross) {
        const auto a = ga::tournament(pop.cost, cfg.tournament_size, rng);
        const auto b = ga::tournament(pop.cost, cfg.tournament_size, rng);
        child = ga::blend_crossover(pop.x[a], pop.x[b], cfg.crossover_coefficient, rng);
      } else {
        const auto a = ga::tournament(pop.cost, cfg.tournament_size, rng);
        child = ga::gaussian_mutation(pop.x[a], f.bounds, cfg.mutation_probability,
                                      cfg.mutation_scale, rng);
      }
      clamp_in_place(child, f.bounds);
      next.cost.push_back(evaluate(f, child));
      next.x.push_back(std::move(child));
    }
    evals += k;

    if (pop.cost[elite] < next.cost[argmin(next.cost)]) {
      const auto worst = static_cast<std::size_t>(
          std::max_element(next.cost.begin(), next.cost.end()) - next.cost.begin());
      next.x[worst] = pop.x[elite];
      next.cost[worst] = pop.cost[elite];
    }
    pop = std::move(next);
    trace.best_cost_per_iteration.push_back(pop.cost[argmin(pop.cost)]);
  }
  const std::size_t best = argmin(pop.cost);
  detail::finish(trace, pop.x[best], pop.cost[best], evals);
  return trace;
}

namespace tlbo {

/// Teacher-phase candidate x + r (teacher - tf * mean), r_d ~ U[0, 1).
inline void teacher_trial(const Vector& x, const Vector& teacher, const Vector& mean, double tf,
                          RandomStream& rng, Vector& out)
{
  for (std::size_t d = 0; d < x.size(); ++d)
    out[d] = x[d] + rng.uniform() * (teacher[d] - tf * mean[d]);
}

/// Learner-phase candidate: step from x towards the better of (x, partner).
inline void learner_trial(const Vector& x, const Vector& partner, bool x_is_better, RandomStream& rng,
                          Vector& out)
{
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double step = x_is_better ? x[d] - partner[d] : partner[d] - x[d];
    out[d] = x[d] + rng.uniform() * step;
  }
}

} // namespace tlbo

/// Two-phase TLBO (teacher phase then learner phase) with greedy
/// acceptance; 2k evaluations per iteration.
inline RunTrace tlbo_run(const ObjectiveFunction& f, const TlboConfig& cfg)
{
  cfg.validate();
  RandomStream rng(cfg.seed);
  const std::size_t k = cfg.population_k;
  const std::size_t n = f.dimension;

  auto pop = detail::random_population(f, k, rng);
  std::size_t evals = k;
  RunTrace trace;
  trace.best_cost_per_iteration.reserve(cfg.max_iterations);
  Vector trial(n);

  auto accept = [&](std::size_t i) {
    clamp_in_place(trial, f.bounds);
    const double c = evaluate(f, trial);
    if (c < pop.cost[i]) {
      pop.x[i] = trial;
      pop.cost[i] = c;
    }
  };

  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    // teacher phase
    const Vector teacher = pop.x[argmin(pop.cost)];
    Vector mean(n, 0.0);
    for (const auto& x : pop.x)
      for (std::size_t d = 0; d < n; ++d)
        mean[d] += x[d];
    for (auto& m : mean)
      m /= static_cast<double>(k);

    for (std::size_t i = 0; i < k; ++i) {
      const double tf = cfg.fixed_teaching_factor
                            ? static_cast<double>(*cfg.fixed_teaching_factor)
                            : static_cast<double>(rng.uniform_index(1, 2));
      tlbo::teacher_trial(pop.x[i], teacher, mean, tf, rng, trial);
      accept(i);
    }

    // learner phase
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = rng.uniform_index(0, k - 2);
      if (j >= i)
        ++j;
      tlbo::learner_trial(pop.x[i], pop.x[j], pop.cost[i] < pop.cost[j], rng, trial);
      accept(i);
    }
    evals += 2 * k;
    trace.best_cost_per_iteration.push_back(pop.cost[argmin(pop.cost)]);
  }
  const std::size_t best = argmin(pop.cost);
  detail::finish(trace, pop.x[best], pop.cost[best], evals);
  return trace;
}

} // namespace sto
