#pragma once

// Built-in goal programs: the linear, entropic and V@R-triangle diversification
// problems with their published parameters and solver-reported optima.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskgp/baskets.hpp"
#include "riskgp/gp.hpp"
#include "riskgp/risk.hpp"

namespace riskgp {

struct Fixture {
  std::string id;
  std::string description;
  std::string source;  // where the parameters come from, in words
  std::vector<Criterion> criteria;
  std::vector<PiecewisePolynomial> assets;
  std::vector<double> goals;
  std::vector<double> reported_alpha;  // as printed; sums to 1 only up to 1e-7
  EvalMode default_mode = EvalMode::oracle;

  RiskModel model(std::optional<EvalMode> mode = std::nullopt) const {
    return RiskModel(criteria, assets, mode.value_or(default_mode));
  }

  /// Weights 1/3 on both deviations, inverse-quadratic satisfaction with veto 60, maximized.
  GoalProgram program(std::optional<EvalMode> mode = std::nullopt) const {
    const std::size_t n = criteria.size();
    SatisfactionSpec sat{SatisfactionKind::inverse_quadratic, 10.0, 60.0, 60.0, 1e-6};
    return GoalProgram(model(mode), goals, std::vector<double>(n, 1.0 / 3.0), std::vector<double>(n, 1.0 / 3.0), sat,
                       ObjectiveKind::satisfaction_gp, Sense::maximize);
  }

  /// The reported optimum projected onto the simplex.
  Strategy reported() const { return Strategy::projected(reported_alpha); }
};

inline std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  out.push_back({"linear-2002",
                 "expected loss under Q_2, Q_3, Q_4 for the basket {1, 2w, 3w^2}",
                 "linear model, goals (-0.7, -0.6, -0.5)",
                 {Criterion::expected_loss(2), Criterion::expected_loss(3), Criterion::expected_loss(4)},
                 baskets::linear(),
                 {-0.7, -0.6, -0.5},
                 {0.0, 0.9510359, 0.04896409},
                 EvalMode::oracle});
  out.push_back({"entropic",
                 "entropic risk (lambda 4, 5, 6) under Q_2, Q_3, Q_4 for the basket {1, 2w, (4w-1)+}",
                 "entropic model, goals (-4, -5, -6)",
                 {Criterion::entropic(2, 4), Criterion::entropic(3, 5), Criterion::entropic(4, 6)},
                 baskets::entropic(),
                 {-4.0, -5.0, -6.0},
                 {0.6659041, 0.0, 0.3340959},
                 EvalMode::oracle});
  out.push_back({"var-triangle",
                 "sum of V@R and V@R of the sum at level 0.05 for the basket {0, 2w-1, 2-4w^2}",
                 "V@R triangle model, goals (0.3, 0.5)",
                 {Criterion::var_sum(0.05), Criterion::var_of_sum(0.05)},
                 baskets::var_triangle(),
                 {0.3, 0.5},
                 {0.6823770, 0.2151639, 0.1024590},
                 EvalMode::oracle});
  return out;
}

inline std::optional<Fixture> find_fixture(std::string_view id) {
  for (auto& f : fixtures())
    if (f.id == id) return f;
  return std::nullopt;
}

}  // namespace riskgp
