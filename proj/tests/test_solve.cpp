#include <gtest/gtest.h>

#include <cstdlib>
#include <vector>

#include "riskgp/baskets.hpp"
#include "riskgp/fixtures.hpp"
#include "riskgp/solve.hpp"

using namespace riskgp;

namespace {

RiskModel linear_model() {
  return RiskModel({Criterion::expected_loss(2), Criterion::expected_loss(3), Criterion::expected_loss(4)},
                   baskets::linear());
}

// Independent grid walk: nested loops in the same order as the documented enumeration.
std::vector<std::vector<double>> nested_grid(int k) {
  std::vector<std::vector<double>> out;
  for (int m1 = k; m1 >= 0; --m1)
    for (int m2 = k - m1; m2 >= 0; --m2) out.push_back({double(m1) / k, double(m2) / k, double(k - m1 - m2) / k});
  return out;
}

}  // namespace

TEST(SimplexGrid, SmallCases) {
  const auto g = simplex_grid(3, 2);
  const std::vector<std::vector<double>> expected{{1, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5},
                                                  {0, 1, 0}, {0, 0.5, 0.5}, {0, 0, 1}};
  ASSERT_EQ(g.size(), expected.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_EQ(std::vector<double>(g[i].weights().begin(), g[i].weights().end()), expected[i]);
  EXPECT_EQ(simplex_grid(1, 7).size(), 1u);
  EXPECT_EQ(simplex_grid(3, 200).size(), 20301u);
  EXPECT_EQ(grid_size(3, 200), 20301u);
  EXPECT_EQ(grid_size(4, 10), 286u);
}

TEST(SimplexGrid, MatchesNestedEnumeration) {
  const auto g = simplex_grid(3, 17);
  const auto n = nested_grid(17);
  ASSERT_EQ(g.size(), n.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(g[i][j], n[i][j], 1e-15);
}

TEST(Solve, IdealGoalsAreRealizedByRisklessCorner) {
  const GoalProgram gp(linear_model(), {-1, -1, -1}, {1, 1, 1}, {1, 1, 1}, {}, ObjectiveKind::plain_gp);
  const auto r = solve(gp, Settings{50, 500, 1e-9, 1});
  EXPECT_EQ(r.best_alpha, (Strategy{1.0, 0.0, 0.0}));
  for (const auto& d : r.deviations) EXPECT_EQ(d.plus + d.minus, 0.0);
  EXPECT_TRUE(r.feasible);
  ASSERT_TRUE(r.region);
  EXPECT_EQ(r.region->variant_name(), "upper_box");
}

TEST(Solve, GoalsMetOnGridPointAreRecovered) {
  const auto model = linear_model();
  const Strategy target{0.25, 0.5, 0.25};
  const GoalProgram gp(model, model.evaluate(target), {1, 1, 1}, {1, 1, 1}, {}, ObjectiveKind::plain_gp);
  const auto r = brute_force(gp, 20);
  EXPECT_EQ(r.best_alpha, target);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.trace.method, "grid");
}

TEST(Solve, RefinementNeverWorsensAndIsDeterministic) {
  for (const auto& f : fixtures()) {
    const auto gp = f.program();
    const auto a = solve(gp, Settings{40, 200, 1e-9, 1});
    const auto b = solve(gp, Settings{40, 200, 1e-9, 3});
    EXPECT_GE(a.objective, a.grid_objective) << f.id;
    EXPECT_EQ(a.best_alpha, b.best_alpha) << f.id;
    EXPECT_EQ(a.objective, b.objective) << f.id;
    EXPECT_EQ(a.achievements, b.achievements) << f.id;
  }
}

TEST(Solve, ReportIsConsistentWithItsAlpha) {
  const auto f = find_fixture("var-triangle");
  const auto gp = f->program();
  const auto r = solve(gp, Settings{60, 500, 1e-9, 0});
  const auto e = evaluate(gp, r.best_alpha);
  EXPECT_NEAR(e.objective, r.objective, 1e-10);
  for (std::size_t i = 0; i < e.achievements.size(); ++i) EXPECT_NEAR(e.achievements[i], r.achievements[i], 1e-10);
  ASSERT_TRUE(r.region);
  EXPECT_EQ(r.region->variant_name(), "triangle");
}

TEST(Solve, RefinementImprovesOffGridOptimum) {
  // A single criterion with goal strictly between grid points: refinement should close the gap.
  const RiskModel model({Criterion::expected_loss(2)}, baskets::linear());
  const GoalProgram gp(model, {-0.9123}, {1}, {1}, {}, ObjectiveKind::plain_gp);
  const auto r = solve(gp, Settings{10, 500, 1e-12, 1});
  EXPECT_LT(r.objective, r.grid_objective);
  EXPECT_LT(r.objective, 1e-8);
}

TEST(Solve, InfeasibleProgram) {
  const RiskModel model({Criterion::expected_loss(2)}, baskets::linear());
  const GoalProgram gp(model, {500.0}, {1}, {1}, SatisfactionSpec{SatisfactionKind::inverse_quadratic, 10, 60, 60, 1e-6},
                       ObjectiveKind::satisfaction_gp);
  const auto r = solve(gp, Settings{10, 10, 1e-9, 1});
  EXPECT_FALSE(r.feasible);
}

TEST(Solve, ThreadOverrideFromEnvironment) {
  ::setenv("RISKGP_THREADS", "2", 1);
  EXPECT_EQ(resolve_threads(0), 2u);
  EXPECT_EQ(resolve_threads(5), 2u);
  ::unsetenv("RISKGP_THREADS");
  EXPECT_EQ(resolve_threads(3), 3u);
  EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Pareto, LinearFrontIsIdealPoint) {
  const auto front = pareto_front(linear_model(), 50);
  ASSERT_EQ(front.size(), 1u);
  EXPECT_EQ(front[0].alpha, (Strategy{1.0, 0.0, 0.0}));
}

TEST(Pareto, SingleCriterionFrontIsGridArgmin) {
  const RiskModel model({Criterion::var_of_sum(0.05)}, baskets::var_triangle());
  const auto front = pareto_front(model, 30);
  const auto grid = simplex_grid(3, 30);
  double best = INFINITY;
  for (const auto& a : grid) best = std::min(best, model.evaluate(a)[0]);
  ASSERT_FALSE(front.empty());
  for (const auto& p : front) EXPECT_EQ(p.values[0], best);
}

TEST(Pareto, FrontMembersAreNondominated) {
  const auto model = find_fixture("var-triangle")->model();
  const auto front = pareto_front(model, 30);
  ASSERT_GT(front.size(), 1u);
  for (std::size_t i = 1; i < front.size(); ++i) EXPECT_LT(front[i - 1].alpha, front[i].alpha);
  for (const auto& p : front) EXPECT_TRUE(nondominance_test(model, p.alpha, 30).nondominated);
}

TEST(Nondominance, LinearCorners) {
  const auto model = linear_model();
  EXPECT_TRUE(nondominance_test(model, Strategy{1.0, 0.0, 0.0}, 50).nondominated);
  const auto r = nondominance_test(model, Strategy{0.0, 0.0, 1.0}, 50);
  EXPECT_FALSE(r.nondominated);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->alpha, (Strategy{1.0, 0.0, 0.0}));
  EXPECT_EQ(r.checked, grid_size(3, 50));
}

TEST(Transfer, LinearModel) {
  const auto model = linear_model();
  EXPECT_TRUE(transfer_check(model, Strategy{1.0, 0.0, 0.0}, 50).holds);
  const auto r = transfer_check(model, Strategy{0.0, 1.0, 0.0}, 50);
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.witness);
}

TEST(Transfer, SingleCriterionMatchesArgmin) {
  const RiskModel model({Criterion::expected_loss(3)}, baskets::linear());
  for (const auto& a : simplex_grid(3, 6)) {
    const bool is_min = a == Strategy{1.0, 0.0, 0.0};
    EXPECT_EQ(transfer_check(model, a, 6).holds, is_min);
  }
}

TEST(MinimizeOnSimplex, FindsInteriorMinimum) {
  const auto m = minimize_on_simplex(
      [](const Strategy& a) { return (a[0] - 0.2) * (a[0] - 0.2) + (a[1] - 0.37) * (a[1] - 0.37); }, 3,
      Settings{20, 500, 1e-14, 1});
  EXPECT_NEAR(m.alpha[0], 0.2, 1e-6);
  EXPECT_NEAR(m.alpha[1], 0.37, 1e-6);
  EXPECT_LE(m.value, m.grid_value);
}
