#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "riskgp/baskets.hpp"
#include "riskgp/fixtures.hpp"
#include "riskgp/gp.hpp"
#include "riskgp/sampling.hpp"

using namespace riskgp;

namespace {

SatisfactionSpec ramp() { return {SatisfactionKind::linear_ramp, 0.05, 0.4, 1.0, 1e-6}; }

GoalProgram linear_program(ObjectiveKind kind, std::vector<double> wp = {1, 1, 1}, std::vector<double> wm = {1, 1, 1}) {
  const RiskModel model({Criterion::expected_loss(2), Criterion::expected_loss(3), Criterion::expected_loss(4)},
                        baskets::linear());
  return GoalProgram(model, {-0.7, -0.6, -0.5}, std::move(wp), std::move(wm), SatisfactionSpec{}, kind);
}

}  // namespace

TEST(Satisfaction, LinearRamp) {
  EXPECT_DOUBLE_EQ(satisfaction(ramp(), 0.03), 1.0);
  EXPECT_NEAR(satisfaction(ramp(), 0.225), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(satisfaction(ramp(), 0.4), 0.0);
  EXPECT_DOUBLE_EQ(satisfaction(ramp(), 0.9), 0.0);
}

TEST(Satisfaction, PrintedInverseQuadratic) {
  const SatisfactionSpec s{SatisfactionKind::inverse_quadratic, 10, 60, 60, 1e-6};
  EXPECT_NEAR(satisfaction(s, 20.0), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(satisfaction(s, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(satisfaction(s, 10.0), 1.0);
  EXPECT_NEAR(satisfaction(s, 40.0), 1.0 / 16.0, 1e-15);
}

TEST(Satisfaction, RejectsOutOfRange) {
  EXPECT_THROW(satisfaction(ramp(), -0.1), ContractError);
  EXPECT_THROW(satisfaction(ramp(), 1.5), ContractError);
  EXPECT_THROW((SatisfactionSpec{SatisfactionKind::linear_ramp, 0.5, 0.2, 1.0, 1e-6}.validate()), ContractError);
  EXPECT_THROW((SatisfactionSpec{SatisfactionKind::inverse_quadratic, 0, 1, 1, 0.0}.validate()), ContractError);
}

TEST(Deviation, ComplementarySplit) {
  const auto d = split_deviation(-0.65, -0.7, 60);
  EXPECT_DOUBLE_EQ(d.plus, 0.0);
  EXPECT_NEAR(d.minus, 0.05, 1e-15);
  const auto z = split_deviation(0.3, 0.3, 60);
  EXPECT_EQ(z.plus, 0.0);
  EXPECT_EQ(z.minus, 0.0);
  EXPECT_THROW(split_deviation(100.3, 0.3, 60), VetoViolation);
  EXPECT_FALSE(try_split_deviation(100.3, 0.3, 60));
}

TEST(GoalProgram, Validation) {
  const RiskModel model({Criterion::expected_loss(2)}, baskets::linear());
  EXPECT_THROW(GoalProgram(model, {0, 0}, {1}, {1}, {}, ObjectiveKind::plain_gp), ContractError);
  EXPECT_THROW(GoalProgram(model, {0}, {0}, {0}, {}, ObjectiveKind::plain_gp), ContractError);
  EXPECT_THROW(GoalProgram(model, {0}, {-1}, {1}, {}, ObjectiveKind::weighted_gp), ContractError);
  EXPECT_THROW(GoalProgram(model, {0}, {1}, {1}, {}, ObjectiveKind::plain_gp, Sense::maximize), ContractError);
  EXPECT_EQ(GoalProgram(model, {0}, {1}, {1}, {}, ObjectiveKind::satisfaction_gp).sense(), Sense::maximize);
}

TEST(Objective, GoalsMetExactly) {
  const RiskModel model({Criterion::expected_loss(2), Criterion::expected_loss(3)}, baskets::linear());
  const Strategy a{0.2, 0.5, 0.3};
  const auto goals = model.evaluate(a);
  const GoalProgram plain(model, goals, {1, 1}, {1, 1}, {}, ObjectiveKind::plain_gp);
  EXPECT_DOUBLE_EQ(objective(plain, a), 0.0);
  const GoalProgram sat(model, goals, {0.5, 2}, {1, 0.25}, SatisfactionSpec{SatisfactionKind::inverse_quadratic, 10, 60, 60, 1e-6},
                        ObjectiveKind::satisfaction_gp);
  EXPECT_DOUBLE_EQ(objective(sat, a), 0.5 + 2 + 1 + 0.25);
}

TEST(Objective, WeightedWithUnitWeightsIsPlain) {
  const auto plain = linear_program(ObjectiveKind::plain_gp);
  const auto weighted = linear_program(ObjectiveKind::weighted_gp);
  sampling::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto a = sampling::strategy(rng, 3);
    EXPECT_DOUBLE_EQ(objective(plain, a), objective(weighted, a));
  }
}

TEST(Objective, ReportedLinearSolutionIsFinite) {
  const auto f = find_fixture("linear-2002");
  const auto e = evaluate(f->program(), f->reported());
  EXPECT_TRUE(e.feasible);
  EXPECT_TRUE(std::isfinite(e.objective));
  // Every deviation is below the indifference threshold, so the capped F saturates.
  EXPECT_NEAR(e.objective, 2.0, 1e-12);
}

TEST(Objective, VetoMarksInfeasible) {
  const RiskModel model({Criterion::expected_loss(2)}, baskets::linear());
  const GoalProgram gp(model, {100.0}, {1}, {1}, SatisfactionSpec{SatisfactionKind::inverse_quadratic, 10, 60, 60, 1e-6},
                       ObjectiveKind::satisfaction_gp);
  const auto e = evaluate(gp, Strategy{1.0, 0.0, 0.0});
  EXPECT_FALSE(e.feasible);
  EXPECT_TRUE(e.deviations.empty());
  EXPECT_EQ(e.objective, -std::numeric_limits<double>::infinity());
}

TEST(Names, RoundTrip) {
  for (auto k : {ObjectiveKind::plain_gp, ObjectiveKind::weighted_gp, ObjectiveKind::satisfaction_gp})
    EXPECT_EQ(parse_objective_kind(to_string(k)), k);
  for (auto k : {SatisfactionKind::linear_ramp, SatisfactionKind::inverse_quadratic})
    EXPECT_EQ(parse_satisfaction_kind(to_string(k)), k);
  EXPECT_EQ(parse_sense("max"), Sense::maximize);
  EXPECT_FALSE(parse_sense("sideways"));
}
