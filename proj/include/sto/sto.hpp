#pragma once

#include "sto/core.hpp"

#include <variant>

namespace sto {

/// Tornado diameter policy. k1 counts the coldest particle plus the spiral
/// movers, so a sweep moves k1 - 1 particles along the spiral current and
/// k - k1 along the updraft.
struct FixedDiameter
{
  std::size_t k1;
  bool operator==(const FixedDiameter&) const = default;
};

/// k1 redrawn uniformly from {1, ..., k-1} before every sweep.
struct RandomizedDiameter
{
  bool operator==(const RandomizedDiameter&) const = default;
};

using DiameterPolicy = std::variant<FixedDiameter, RandomizedDiameter>;

struct StoConfig
{
  std::size_t population_k = 40;
  DiameterPolicy diameter = RandomizedDiameter{};
  std::size_t max_iterations = 100;
  /// The tornado has vanished once every particle is within this distance
  /// of the coldest one.
  double vanish_epsilon = 1e-12;
  std::uint64_t seed = 0;
  bool trace_particles = false;
  /// Test hook: when set, every turbulence entry equals this value and no
  /// normal variates are drawn.
  std::optional<double> fixed_turbulence;

  void validate() const
  {
    if (population_k < 3)
      throw config_error("sto: population must be at least 3");
    if (max_iterations < 1)
      throw config_error("sto: max_iterations must be at least 1");
    if (!(vanish_epsilon > 0.0))
      throw config_error("sto: vanish_epsilon must be positive");
    if (const auto* fixed = std::get_if<FixedDiameter>(&diameter))
      if (fixed->k1 < 1 || fixed->k1 >= population_k)
        throw config_error("sto: k1 must satisfy 1 <= k1 < k");
  }
};

struct CurrentAssignment
{
  std::size_t coldest = 0;
  std::vector<std::size_t> spiral;
  std::vector<std::size_t> updraft;

  /// Role of every particle, indexed by particle.
  std::vector<CurrentType> roles(std::size_t k) const
  {
    std::vector<CurrentType> r(k, CurrentType::Updraft);
    for (auto i : spiral)
      r[i] = CurrentType::Spiral;
    r[coldest] = CurrentType::Coldest;
    return r;
  }
};

/// n i.i.d. standard normal step multipliers.
inline Vector sample_turbulence(std::size_t n, RandomStream& rng)
{
  Vector mu(n);
  for (auto& m : mu)
    m = rng.normal();
  return mu;
}

/// x + mu * (p - x). At mu = 1 the rounding of (p - x) could leave x one
/// ulp off p, so that case returns p directly.
inline double step_toward(double x, double p, double mu)
{
  return mu == 1.0 ? p : x + mu * (p - x);
}

inline std::size_t draw_k1(const DiameterPolicy& policy, std::size_t k, RandomStream& rng)
{
  if (const auto* fixed = std::get_if<FixedDiameter>(&policy))
    return fixed->k1;
  return rng.uniform_index(1, k - 1);
}

/// The coldest particle stays put; the rest are shuffled and split so the
/// first k1 - 1 ride the spiral current and the remainder the updraft.
inline CurrentAssignment assign_currents(const SwarmState& state, std::size_t k1, RandomStream& rng)
{
  const std::size_t k = state.size();
  if (k1 < 1 || k1 >= k)
    throw config_error("assign_currents: k1 must satisfy 1 <= k1 < k");

  CurrentAssignment a;
  a.coldest = state.coldest_index;
  std::vector<std::size_t> others;
  others.reserve(k - 1);
  for (std::size_t i = 0; i < k; ++i)
    if (i != a.coldest)
      others.push_back(i);
  rng.shuffle(others);

  a.spiral.assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k1 - 1));
  a.updraft.assign(others.begin() + static_cast<std::ptrdiff_t>(k1 - 1), others.end());
  return a;
}

namespace detail {

/// Contiguous copy of the spiral-side particles, ordered by cost so a
/// nearest-better search can stop at the first candidate that is not better.
class CandidateSet
{
public:
  CandidateSet(const SwarmState& state, std::span<const std::size_t> candidates)
      : n_(state.positions.empty() ? 0 : state.positions.front().size()),
        ids_(candidates.begin(), candidates.end())
  {
    std::sort(ids_.begin(), ids_.end(), [&](std::size_t a, std::size_t b) {
      return state.costs[a] < state.costs[b] || (state.costs[a] == state.costs[b] && a < b);
    });
    costs_.reserve(ids_.size());
    points_.resize(ids_.size() * n_);
    for (std::size_t s = 0; s < ids_.size(); ++s) {
      costs_.push_back(state.costs[ids_[s]]);
      std::copy(state.positions[ids_[s]].begin(), state.positions[ids_[s]].end(),
                points_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t id(std::size_t slot) const { return ids_[slot]; }
  const double* point(std::size_t slot) const { return points_.data() + slot * n_; }

  /// Slot of the nearest candidate with cost strictly below `own_cost`, or
  /// size() if there is none. Distance ties go to the lowest particle index.
  std::size_t nearest_better(const double* x, double own_cost) const
  {
    std::size_t best = ids_.size();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < ids_.size() && costs_[s] < own_cost; ++s) {
      const double* y = point(s);
      double d2 = 0.0;
      for (std::size_t d = 0; d < n_ && !(d2 > best_d2); ++d)
        d2 += (y[d] - x[d]) * (y[d] - x[d]);
      if (best == ids_.size() || d2 < best_d2 || (d2 == best_d2 && ids_[s] < ids_[best])) {
        best = s;
        best_d2 = d2;
      }
    }
    return best;
  }

private:
  std::size_t n_;
  std::vector<std::size_t> ids_;
  std::vector<double> costs_;
  std::vector<double> points_;
};

} // namespace detail

/// Nearest candidate with strictly lower cost than particle `i`; distance
/// ties go to the lowest index. Falls back to the coldest particle when no
/// candidate is strictly better.
inline std::size_t nearest_better_target(const SwarmState& state, std::size_t i,
                                         std::span<const std::size_t> candidates)
{
  const detail::CandidateSet set(state, candidates);
  const std::size_t s = set.nearest_better(state.positions[i].data(), state.costs[i]);
  return s == set.size() ? state.coldest_index : set.id(s);
}

/// Moves every non-coldest particle once according to `a`. Spiral targets
/// are resolved against the pre-update swarm before anything moves.
inline void apply_currents(SwarmState& state, const CurrentAssignment& a, const ObjectiveFunction& f,
                           const StoConfig& cfg, RandomStream& rng)
{
  const std::size_t k = state.size();
  const std::size_t n = f.dimension;

  std::vector<std::size_t> candidates;
  candidates.reserve(a.spiral.size() + 1);
  candidates.push_back(a.coldest);
  candidates.insert(candidates.end(), a.spiral.begin(), a.spiral.end());

  // The candidate set doubles as the pre-update snapshot: spiral particles
  // move during the sweep but are pulled toward at their old positions.
  const detail::CandidateSet set(state, candidates);
  std::size_t coldest_slot = 0;
  while (set.id(coldest_slot) != a.coldest)
    ++coldest_slot;

  // target[i] is the snapshot slot particle i is attracted to this sweep
  std::vector<std::size_t> target(k, coldest_slot);
  for (auto i : a.spiral) {
    const std::size_t s = set.nearest_better(state.positions[i].data(), state.costs[i]);
    if (s != set.size())
      target[i] = s;
  }

  Vector mu(n, cfg.fixed_turbulence.value_or(0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (i == a.coldest)
      continue;
    if (!cfg.fixed_turbulence)
      for (auto& m : mu)
        m = rng.normal();
    const double* pull = set.point(target[i]);
    Vector& x = state.positions[i];
    for (std::size_t d = 0; d < n; ++d)
      x[d] = step_toward(x[d], pull[d], mu[d]);
    clamp_in_place(x, f.bounds);
    state.costs[i] = evaluate(f, x);
  }
  state.eval_count += k - 1;
  state.refresh_coldest();
  ++state.iteration;
}

/// One full sweep: draw the diameter, assign currents, move.
inline SwarmState sto_iteration(SwarmState state, const ObjectiveFunction& f, const StoConfig& cfg,
                                RandomStream& rng)
{
  const std::size_t k1 = draw_k1(cfg.diameter, state.size(), rng);
  const auto a = assign_currents(state, k1, rng);
  apply_currents(state, a, f, cfg, rng);
  return state;
}

inline bool has_vanished(const SwarmState& state, double epsilon)
{
  const double eps2 = epsilon * epsilon;
  const Vector& c = state.coldest();
  for (const auto& x : state.positions)
    if (!(squared_distance(x, c) < eps2))
      return false;
  return true;
}

namespace detail {

inline void snapshot(RunTrace& trace, const SwarmState& s, const std::vector<CurrentType>& roles)
{
  for (std::size_t i = 0; i < s.size(); ++i)
    trace.particles.push_back({s.iteration, i, roles[i], s.positions[i], s.costs[i]});
}

} // namespace detail

inline RunTrace sto_run(const ObjectiveFunction& f, const StoConfig& cfg)
{
  cfg.validate();
  RandomStream rng(cfg.seed);
  SwarmState state = initialize_swarm(f, cfg.population_k, rng);
  const std::size_t k = cfg.population_k;

  RunTrace trace;
  trace.best_cost_per_iteration.reserve(cfg.max_iterations);

  std::vector<CurrentType> last_roles;
  while (state.iteration < cfg.max_iterations) {
    const std::size_t k1 = draw_k1(cfg.diameter, k, rng);
    const auto a = assign_currents(state, k1, rng);
    if (cfg.trace_particles) {
      last_roles = a.roles(k);
      detail::snapshot(trace, state, last_roles);
    }
    apply_currents(state, a, f, cfg, rng);
    trace.best_cost_per_iteration.push_back(state.coldest_cost());
    if (has_vanished(state, cfg.vanish_epsilon)) {
      trace.terminated_by = Termination::Vanished;
      break;
    }
  }

  if (cfg.trace_particles) {
    // Final frame: the previous coldest inherits the role of the particle
    // that replaced it, so the current sizes are preserved.
    const auto old_coldest = static_cast<std::size_t>(
        std::find(last_roles.begin(), last_roles.end(), CurrentType::Coldest) - last_roles.begin());
    std::swap(last_roles[old_coldest], last_roles[state.coldest_index]);
    detail::snapshot(trace, state, last_roles);
  }

  trace.iterations_used = trace.best_cost_per_iteration.size();
  trace.total_evaluations = state.eval_count;
  trace.best_position = state.coldest();
  trace.best_cost = state.coldest_cost();
  return trace;
}

} // namespace sto
