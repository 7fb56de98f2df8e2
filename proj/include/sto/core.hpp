#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sto {

using Vector = std::vector<double>;

/// Raised for invalid algorithm or experiment parameters.
class config_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an objective is evaluated outside its contract
/// (wrong dimension, out of the box domain).
class domain_error : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

struct Bounds
{
  Vector lower;
  Vector upper;

  Bounds() = default;
  Bounds(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi))
  {
    if (lower.size() != upper.size())
      throw config_error("bounds: lower and upper differ in length");
    for (std::size_t d = 0; d < lower.size(); ++d)
      if (!(lower[d] < upper[d]))
        throw config_error("bounds: lower[" + std::to_string(d) + "] must be < upper");
  }

  /// Same interval [lo, hi] on every one of `n` coordinates.
  static Bounds uniform(std::size_t n, double lo, double hi)
  {
    return Bounds(Vector(n, lo), Vector(n, hi));
  }

  std::size_t size() const { return lower.size(); }

  bool contains(std::span<const double> x) const
  {
    if (x.size() != size())
      return false;
    for (std::size_t d = 0; d < x.size(); ++d)
      if (!(x[d] >= lower[d] && x[d] <= upper[d]))
        return false;
    return true;
  }

  double width(std::size_t d) const { return upper[d] - lower[d]; }
};

/// A named minimization problem over a box.
struct ObjectiveFunction
{
  std::string name;
  std::size_t dimension = 0;
  Bounds bounds;
  std::optional<Vector> known_optimum;
  std::optional<double> known_minimum_cost;
  /// Raw cost expression; called only after the domain has been checked.
  std::function<double(std::span<const double>)> cost;
};

/// Evaluates `f` at `x`. Counting evaluations is the caller's business.
inline double evaluate(const ObjectiveFunction& f, std::span<const double> x)
{
  if (x.size() != f.dimension)
    throw domain_error(f.name + ": expected dimension " + std::to_string(f.dimension) +
                       ", got " + std::to_string(x.size()));
  if (!f.bounds.contains(x))
    throw domain_error(f.name + ": point outside the search domain");
  return f.cost(x);
}

inline Vector clamp_to_bounds(Vector x, const Bounds& b)
{
  for (std::size_t d = 0; d < x.size(); ++d)
    x[d] = std::clamp(x[d], b.lower[d], b.upper[d]);
  return x;
}

inline void clamp_in_place(Vector& x, const Bounds& b)
{
  for (std::size_t d = 0; d < x.size(); ++d)
    x[d] = std::clamp(x[d], b.lower[d], b.upper[d]);
}

inline double squared_distance(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

inline double euclidean_norm(std::span<const double> a)
{
  double s = 0.0;
  for (double v : a)
    s += v * v;
  return std::sqrt(s);
}

/// Lowest index among the minima.
inline std::size_t argmin(std::span<const double> values)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best])
      best = i;
  return best;
}

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index)
{
  return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Deterministic random source shared by every algorithm. Equal seed and
/// equal call sequence give equal output.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform real in [0, 1).
  double uniform()
  {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double lo, double hi)
  {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform integer in the closed range [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi)
  {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

  double normal()
  {
    return normal_(engine_);
  }

  std::vector<std::size_t> permutation(std::size_t n)
  {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), engine_);
    return idx;
  }

  template <typename T>
  void shuffle(std::vector<T>& v)
  {
    std::shuffle(v.begin(), v.end(), engine_);
  }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct SwarmState
{
  std::vector<Vector> positions;
  std::vector<double> costs;
  std::size_t coldest_index = 0;
  std::size_t iteration = 0;
  std::size_t eval_count = 0;

  std::size_t size() const { return positions.size(); }
  const Vector& coldest() const { return positions[coldest_index]; }
  double coldest_cost() const { return costs[coldest_index]; }

  void refresh_coldest() { coldest_index = argmin(costs); }
};

enum class Termination { MaxIterations, Vanished };

inline const char* to_string(Termination t)
{
  return t == Termination::Vanished ? "vanished" : "max_iterations";
}

/// Role of a particle during one sweep of the tornado.
enum class CurrentType { Coldest, Spiral, Updraft };

inline const char* to_string(CurrentType c)
{
  switch (c) {
  case CurrentType::Coldest: return "coldest";
  case CurrentType::Spiral: return "spiral";
  case CurrentType::Updraft: return "updraft";
  }
  return "?";
}

struct ParticleSnapshot
{
  std::size_t iteration;
  std::size_t particle;
  CurrentType current;
  Vector position;
  double cost;
};

struct RunTrace
{
  std::vector<double> best_cost_per_iteration;
  Vector best_position;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t total_evaluations = 0;
  std::size_t iterations_used = 0;
  Termination terminated_by = Termination::MaxIterations;
  /// Filled only when particle tracing is requested.
  std::vector<ParticleSnapshot> particles;

  bool operator==(const RunTrace&) const = default;
};

inline bool operator==(const ParticleSnapshot& a, const ParticleSnapshot& b)
{
  return a.iteration == b.iteration && a.particle == b.particle && a.current == b.current &&
         a.position == b.position && a.cost == b.cost;
}

inline Vector random_point(const Bounds& b, RandomStream& rng)
{
  Vector x(b.size());
  for (std::size_t d = 0; d < x.size(); ++d)
    x[d] = rng.uniform(b.lower[d], b.upper[d]);
  return x;
}

/// `k` uniform samples inside the box, evaluated; eval_count = k.
inline SwarmState initialize_swarm(const ObjectiveFunction& f, std::size_t k, RandomStream& rng)
{
  if (k < 3)
    throw config_error("initialize_swarm: population must be at least 3");
  SwarmState s;
  s.positions.reserve(k);
  s.costs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    s.positions.push_back(random_point(f.bounds, rng));
    s.costs.push_back(evaluate(f, s.positions.back()));
  }
  s.eval_count = k;
  s.refresh_coldest();
  return s;
}

} // namespace sto
