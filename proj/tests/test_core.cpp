#include "sto/benchmarks.hpp"
#include "sto/core.hpp"

#include <gtest/gtest.h>

using namespace sto;

TEST(Bounds, RejectsInvertedOrMismatchedIntervals)
{
  EXPECT_THROW(Bounds({0.0}, {0.0}), config_error);
  EXPECT_THROW(Bounds({1.0}, {0.0}), config_error);
  EXPECT_THROW(Bounds({0.0, 0.0}, {1.0}), config_error);
  EXPECT_NO_THROW(Bounds({-1.0, 0.0}, {1.0, 0.5}));
}

TEST(ClampToBounds, ProjectsEachCoordinate)
{
  EXPECT_EQ(clamp_to_bounds({600.0, 0.0}, Bounds::uniform(2, -512, 512)), (Vector{512.0, 0.0}));
  EXPECT_EQ(clamp_to_bounds({0.5, 0.5}, Bounds::uniform(2, 0, 1)), (Vector{0.5, 0.5}));
  EXPECT_EQ(clamp_to_bounds({-6.0, 6.0}, Bounds::uniform(2, -4.5, 4.5)), (Vector{-4.5, 4.5}));
}

TEST(Evaluate, ChecksDimensionAndDomain)
{
  const auto beale = benchmarks::make_beale();
  EXPECT_DOUBLE_EQ(evaluate(beale, Vector{3.0, 0.5}), 0.0);
  EXPECT_THROW(evaluate(beale, Vector{3.0}), domain_error);
  EXPECT_THROW(evaluate(beale, Vector{3.0, 0.5, 1.0}), domain_error);
  EXPECT_THROW(evaluate(beale, Vector{4.6, 0.0}), domain_error);
  EXPECT_THROW(evaluate(beale, Vector{std::nan(""), 0.0}), domain_error);
}

TEST(Evaluate, DoesNotCountCalls)
{
  const auto f = benchmarks::make_rastrigin(5);
  EXPECT_EQ(evaluate(f, Vector(5, 0.0)), 0.0);
  EXPECT_EQ(evaluate(f, Vector(5, 0.0)), 0.0);
}

TEST(Argmin, LowestIndexWinsTies)
{
  const std::vector<double> v{3.0, 1.0, 2.0, 1.0};
  EXPECT_EQ(argmin(v), 1u);
}

TEST(RandomStream, SameSeedSameSequence)
{
  RandomStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_EQ(a.normal(), b.normal());
  EXPECT_EQ(a.permutation(10), b.permutation(10));
  EXPECT_NE(a.uniform(), c.uniform());
}

TEST(RandomStream, IndexAndPermutationContracts)
{
  RandomStream r(7);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_index(3, 5);
    EXPECT_GE(v, 3u);
    EXPECT_LE(v, 5u);
  }
  auto p = r.permutation(20);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_EQ(p[i], i);
}

TEST(ChildSeed, DistinctPerTrialAndStable)
{
  EXPECT_EQ(child_seed(5, 3), child_seed(5, 3));
  EXPECT_NE(child_seed(5, 3), child_seed(5, 4));
  EXPECT_NE(child_seed(5, 3), child_seed(6, 3));
}

TEST(InitializeSwarm, SamplesInsideBoundsAndCachesCosts)
{
  const auto f = benchmarks::make_beale();
  RandomStream rng(1);
  const auto s = initialize_swarm(f, 40, rng);
  ASSERT_EQ(s.size(), 40u);
  EXPECT_EQ(s.eval_count, 40u);
  EXPECT_EQ(s.iteration, 0u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_TRUE(f.bounds.contains(s.positions[i]));
    EXPECT_EQ(s.costs[i], evaluate(f, s.positions[i]));
  }
  EXPECT_EQ(s.coldest_index, argmin(s.costs));
}

TEST(InitializeSwarm, RippleSamplesStayInUnitBox)
{
  const auto f = benchmarks::make_ripple25();
  RandomStream rng(99);
  const auto s = initialize_swarm(f, 500, rng);
  for (const auto& x : s.positions)
    for (double v : x) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
}

TEST(InitializeSwarm, DeterministicAndValidated)
{
  const auto f = benchmarks::make_eggholder();
  RandomStream a(11), b(11);
  const auto sa = initialize_swarm(f, 40, a);
  const auto sb = initialize_swarm(f, 40, b);
  EXPECT_EQ(sa.positions, sb.positions);
  EXPECT_EQ(sa.costs, sb.costs);
  EXPECT_EQ(sa.coldest_index, sb.coldest_index);
  RandomStream c(1);
  EXPECT_THROW(initialize_swarm(f, 2, c), config_error);
}
