#include "sto/baselines.hpp"
#include "sto/benchmarks.hpp"

#include <gtest/gtest.h>

using namespace sto;

namespace {

void expect_monotone(const RunTrace& t)
{
  for (std::size_t i = 1; i < t.best_cost_per_iteration.size(); ++i)
    ASSERT_LE(t.best_cost_per_iteration[i], t.best_cost_per_iteration[i - 1]);
}

// Single point domain-free objective: a flat function over [-1, 1]^2.
ObjectiveFunction flat()
{
  return {"flat", 2, Bounds::uniform(2, -1, 1), std::nullopt, std::nullopt,
          [](std::span<const double>) { return 0.0; }};
}

} // namespace

TEST(Pso, ConstrictionCoefficient)
{
  // 2 / |2 - 4.1 - sqrt(4.1^2 - 16.4)|, evaluated independently
  EXPECT_NEAR(constriction_coefficient(4.1), 0.7298437881283576, 1e-12);
  EXPECT_NEAR(constriction_coefficient(4.1), 0.7298, 1e-4);
  EXPECT_THROW(constriction_coefficient(4.0), config_error);
}

TEST(Pso, ParticleAtGlobalBestWithZeroVelocityStaysPut)
{
  PsoConfig cfg;
  cfg.population_k = 1;
  cfg.max_iterations = 50;
  cfg.fixed_r = 1.0;
  const auto t = pso_run(benchmarks::make_beale(), cfg);
  RandomStream rng(cfg.seed);
  const Vector start = random_point(benchmarks::make_beale().bounds, rng);
  EXPECT_EQ(t.best_position, start);
  EXPECT_EQ(t.total_evaluations, 1u + 50u);
}

TEST(Pso, AccountingMonotoneDeterministic)
{
  PsoConfig cfg;
  cfg.max_iterations = 80;
  cfg.seed = 4;
  const auto f = benchmarks::make_eggholder();
  const auto t = pso_run(f, cfg);
  EXPECT_EQ(t.total_evaluations, 40u + 80u * 40u);
  EXPECT_EQ(t.iterations_used, 80u);
  expect_monotone(t);
  EXPECT_EQ(t.best_cost, evaluate(f, t.best_position));
  EXPECT_EQ(t, pso_run(f, cfg));
}

TEST(Pso, Validation)
{
  PsoConfig cfg;
  cfg.phi1 = 2.0;
  cfg.phi2 = 2.0;
  EXPECT_THROW(pso_run(benchmarks::make_beale(), cfg), config_error);
}

TEST(Ga, CrossoverOfIdenticalParentsIsIdentity)
{
  RandomStream rng(1);
  const Vector p{0.25, -3.0, 7.5};
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(ga::blend_crossover(p, p, 0.05, rng), p);
}

TEST(Ga, CrossoverStaysInExtendedBox)
{
  RandomStream rng(2);
  const Vector a{0.0, 10.0}, b{1.0, 0.0};
  for (int i = 0; i < 1000; ++i) {
    const auto c = ga::blend_crossover(a, b, 0.05, rng);
    EXPECT_GE(c[0], -0.05);
    EXPECT_LE(c[0], 1.05);
    EXPECT_GE(c[1], -0.5);
    EXPECT_LE(c[1], 10.5);
  }
}

TEST(Ga, ZeroMutationProbabilityClones)
{
  RandomStream rng(3);
  const Vector p{1.0, 2.0};
  EXPECT_EQ(ga::gaussian_mutation(p, Bounds::uniform(2, -5, 5), 0.0, 0.1, rng), p);
  const auto m = ga::gaussian_mutation(p, Bounds::uniform(2, -5, 5), 1.0, 0.1, rng);
  EXPECT_NE(m, p);
}

TEST(Ga, TournamentPrefersBetter)
{
  RandomStream rng(4);
  const std::vector<double> cost{5, 1, 9, 3};
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(ga::tournament(cost, 50, rng), 1u);
}

TEST(Ga, AccountingMonotoneDeterministic)
{
  GaConfig cfg;
  cfg.max_iterations = 60;
  cfg.seed = 8;
  const auto f = benchmarks::make_ripple25();
  const auto t = ga_run(f, cfg);
  EXPECT_EQ(t.total_evaluations, 40u + 60u * 40u);
  expect_monotone(t);
  EXPECT_EQ(t.best_cost, evaluate(f, t.best_position));
  EXPECT_EQ(t, ga_run(f, cfg));
}

TEST(Ga, Validation)
{
  const auto f = benchmarks::make_beale();
  GaConfig cfg;
  cfg.crossover_fraction = 1.0;
  EXPECT_THROW(ga_run(f, cfg), config_error);
  cfg = {};
  cfg.mutation_probability = 1.5;
  EXPECT_THROW(ga_run(f, cfg), config_error);
  cfg = {};
  cfg.population_k = 1;
  EXPECT_THROW(ga_run(f, cfg), config_error);
}

TEST(Tlbo, IdenticalLearnersGiveZeroTeacherStepWithFactorOne)
{
  RandomStream rng(5);
  const Vector x{0.3, -0.2, 4.0};
  Vector out(3);
  tlbo::teacher_trial(x, x, x, 1.0, rng, out);
  EXPECT_EQ(out, x);
  tlbo::teacher_trial(x, x, x, 2.0, rng, out);
  EXPECT_NE(out, x);
}

TEST(Tlbo, LearnerStepMovesTowardsBetterPartner)
{
  RandomStream rng(6);
  const Vector x{0.0}, partner{1.0};
  Vector out(1);
  for (int i = 0; i < 100; ++i) {
    tlbo::learner_trial(x, partner, false, rng, out);
    EXPECT_GE(out[0], 0.0);
    EXPECT_LE(out[0], 1.0);
    tlbo::learner_trial(x, partner, true, rng, out);
    EXPECT_LE(out[0], 0.0);
  }
}

TEST(Tlbo, GreedyAcceptanceRejectsEqualCostMoves)
{
  TlboConfig cfg;
  cfg.population_k = 6;
  cfg.max_iterations = 20;
  const auto t = tlbo_run(flat(), cfg);
  RandomStream rng(cfg.seed);
  std::vector<Vector> start;
  for (int i = 0; i < 6; ++i)
    start.push_back(random_point(flat().bounds, rng));
  EXPECT_NE(std::find(start.begin(), start.end(), t.best_position), start.end());
}

TEST(Tlbo, AccountingMonotoneDeterministic)
{
  TlboConfig cfg;
  cfg.max_iterations = 70;
  cfg.seed = 12;
  const auto f = benchmarks::make_rastrigin(5);
  const auto t = tlbo_run(f, cfg);
  EXPECT_EQ(t.total_evaluations, 40u + 70u * 80u);
  expect_monotone(t);
  EXPECT_EQ(t.best_cost, evaluate(f, t.best_position));
  EXPECT_EQ(t, tlbo_run(f, cfg));
}

TEST(Tlbo, Validation)
{
  TlboConfig cfg;
  cfg.population_k = 1;
  EXPECT_THROW(tlbo_run(benchmarks::make_beale(), cfg), config_error);
  cfg = {};
  cfg.fixed_teaching_factor = 3;
  EXPECT_THROW(tlbo_run(benchmarks::make_beale(), cfg), config_error);
}

TEST(Baselines, AllMonotoneOverManySeeds)
{
  const std::vector<ObjectiveFunction> fs{benchmarks::make_eggholder(), benchmarks::make_beale(),
                                          benchmarks::make_styblinski_tang(6)};
  for (const auto& f : fs)
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      PsoConfig p;
      p.seed = seed;
      p.max_iterations = 50;
      expect_monotone(pso_run(f, p));
      GaConfig g;
      g.seed = seed;
      g.max_iterations = 50;
      expect_monotone(ga_run(f, g));
      TlboConfig t;
      t.seed = seed;
      t.max_iterations = 50;
      expect_monotone(tlbo_run(f, t));
    }
}
