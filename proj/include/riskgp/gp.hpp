#pragma once

// Goal programming over a RiskModel: satisfaction functions, complementary
// deviation splitting and the plain / weighted / satisfaction objectives.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/risk.hpp"

namespace riskgp {

enum class SatisfactionKind { linear_ramp, inverse_quadratic };

inline std::string_view to_string(SatisfactionKind k) {
  return k == SatisfactionKind::linear_ramp ? "linear-ramp" : "paper";
}

inline std::optional<SatisfactionKind> parse_satisfaction_kind(std::string_view s) {
  if (s == "linear-ramp") return SatisfactionKind::linear_ramp;
  if (s == "paper" || s == "paper-inverse-quadratic") return SatisfactionKind::inverse_quadratic;
  return std::nullopt;
}

/// Satisfaction function F: [0, xi_v] -> [0, 1].
///
/// linear-ramp: 1 up to the indifference threshold xi_i, linear down to 0 at the
/// dissatisfaction threshold xi_d, 0 beyond.
/// inverse-quadratic: min(1, 1 / (0.01 max(delta, eps)^2)); xi_i and xi_d do not
/// shape this kind, only the veto threshold xi_v applies.
struct SatisfactionSpec {
  SatisfactionKind kind = SatisfactionKind::linear_ramp;
  double xi_i = 0.0;
  double xi_d = 1.0;
  double xi_v = std::numeric_limits<double>::infinity();
  double eps = 1e-6;

  void validate() const {
    if (!(xi_i >= 0.0 && xi_i <= xi_d && xi_d <= xi_v))
      throw ContractError("satisfaction thresholds must satisfy 0 <= xi_i <= xi_d <= xi_v");
    if (!(eps > 0.0)) throw ContractError("satisfaction eps must be > 0");
  }
};

inline double satisfaction(const SatisfactionSpec& spec, double delta) {
  if (!(delta >= 0.0) || delta > spec.xi_v)
    throw ContractError("satisfaction argument must lie in [0, xi_v], got " + std::to_string(delta));
  switch (spec.kind) {
    case SatisfactionKind::linear_ramp:
      if (delta <= spec.xi_i) return 1.0;
      if (delta >= spec.xi_d) return 0.0;
      return (spec.xi_d - delta) / (spec.xi_d - spec.xi_i);
    case SatisfactionKind::inverse_quadratic: {
      const double x = std::max(delta, spec.eps);
      return std::min(1.0, 1.0 / (0.01 * x * x));
    }
  }
  return 0.0;
}

/// achievement + plus - minus = goal, plus * minus = 0.
struct DeviationPair {
  double plus = 0.0;   // over-achievement slack (achievement below goal)
  double minus = 0.0;  // under-achievement slack (achievement above goal)
};

inline std::optional<DeviationPair> try_split_deviation(double achievement, double goal, double xi_v) {
  const DeviationPair d{std::max(goal - achievement, 0.0), std::max(achievement - goal, 0.0)};
  if (d.plus > xi_v || d.minus > xi_v) return std::nullopt;
  return d;
}

/// Complementary split; throws VetoViolation when |achievement - goal| > xi_v.
inline DeviationPair split_deviation(double achievement, double goal, double xi_v) {
  if (auto d = try_split_deviation(achievement, goal, xi_v)) return *d;
  throw VetoViolation("deviation " + std::to_string(std::abs(achievement - goal)) + " exceeds veto threshold " +
                          std::to_string(xi_v),
                      std::abs(achievement - goal));
}

enum class ObjectiveKind { plain_gp, weighted_gp, satisfaction_gp };
enum class Sense { minimize, maximize };

inline std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::plain_gp: return "plain-gp";
    case ObjectiveKind::weighted_gp: return "weighted-gp";
    case ObjectiveKind::satisfaction_gp: return "satisfaction-gp";
  }
  return "?";
}

inline std::optional<ObjectiveKind> parse_objective_kind(std::string_view s) {
  for (auto k : {ObjectiveKind::plain_gp, ObjectiveKind::weighted_gp, ObjectiveKind::satisfaction_gp})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline std::string_view to_string(Sense s) { return s == Sense::minimize ? "min" : "max"; }

inline std::optional<Sense> parse_sense(std::string_view s) {
  if (s == "min" || s == "minimize") return Sense::minimize;
  if (s == "max" || s == "maximize") return Sense::maximize;
  return std::nullopt;
}

/// True when `a` is strictly better than `b` under `sense`.
inline bool better(Sense sense, double a, double b) { return sense == Sense::maximize ? a > b : a < b; }

inline double worst_value(Sense sense) {
  return sense == Sense::maximize ? -std::numeric_limits<double>::infinity()
                                  : std::numeric_limits<double>::infinity();
}

class GoalProgram {
 public:
  GoalProgram(RiskModel model, std::vector<double> goals, std::vector<double> weights_plus,
              std::vector<double> weights_minus, SatisfactionSpec satisfaction, ObjectiveKind kind,
              std::optional<Sense> sense = std::nullopt)
      : model_(std::move(model)),
        goals_(std::move(goals)),
        weights_plus_(std::move(weights_plus)),
        weights_minus_(std::move(weights_minus)),
        satisfaction_(satisfaction),
        kind_(kind),
        sense_(sense.value_or(kind == ObjectiveKind::satisfaction_gp ? Sense::maximize : Sense::minimize)) {
    const std::size_t n = model_.size();
    if (goals_.size() != n || weights_plus_.size() != n || weights_minus_.size() != n)
      throw ContractError("goal program needs one goal and one weight pair per criterion (" + std::to_string(n) +
                          ")");
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(goals_[i])) throw ContractError("goals must be finite");
      if (!(weights_plus_[i] >= 0.0) || !(weights_minus_[i] >= 0.0)) throw ContractError("weights must be >= 0");
      any = any || weights_plus_[i] > 0.0 || weights_minus_[i] > 0.0;
    }
    if (!any) throw ContractError("weights must not all be zero");
    satisfaction_.validate();
    if (kind_ != ObjectiveKind::satisfaction_gp && sense_ != Sense::minimize)
      throw ContractError("plain and weighted goal programs are minimized");
  }

  const RiskModel& model() const noexcept { return model_; }
  const std::vector<double>& goals() const noexcept { return goals_; }
  const std::vector<double>& weights_plus() const noexcept { return weights_plus_; }
  const std::vector<double>& weights_minus() const noexcept { return weights_minus_; }
  const SatisfactionSpec& satisfaction() const noexcept { return satisfaction_; }
  ObjectiveKind kind() const noexcept { return kind_; }
  Sense sense() const noexcept { return sense_; }

  GoalProgram with_model(RiskModel m) const {
    return GoalProgram(std::move(m), goals_, weights_plus_, weights_minus_, satisfaction_, kind_, sense_);
  }

 private:
  RiskModel model_;
  std::vector<double> goals_;
  std::vector<double> weights_plus_;
  std::vector<double> weights_minus_;
  SatisfactionSpec satisfaction_;
  ObjectiveKind kind_;
  Sense sense_;
};

struct Evaluation {
  std::vector<double> achievements;
  std::vector<DeviationPair> deviations;  // empty when infeasible
  double objective = 0.0;
  bool feasible = true;
};

/// Objective from already computed achievements.
inline Evaluation score(const GoalProgram& gp, std::vector<double> achievements) {
  Evaluation e;
  e.achievements = std::move(achievements);
  double total = 0.0;
  for (std::size_t i = 0; i < e.achievements.size(); ++i) {
    const auto d = try_split_deviation(e.achievements[i], gp.goals()[i], gp.satisfaction().xi_v);
    if (!d) {
      e.feasible = false;
      e.deviations.clear();
      e.objective = worst_value(gp.sense());
      return e;
    }
    e.deviations.push_back(*d);
    switch (gp.kind()) {
      case ObjectiveKind::plain_gp:
        total += d->plus + d->minus;
        break;
      case ObjectiveKind::weighted_gp:
        total += gp.weights_plus()[i] * d->plus + gp.weights_minus()[i] * d->minus;
        break;
      case ObjectiveKind::satisfaction_gp:
        total += gp.weights_plus()[i] * satisfaction(gp.satisfaction(), d->plus) +
                 gp.weights_minus()[i] * satisfaction(gp.satisfaction(), d->minus);
        break;
    }
  }
  e.objective = total;
  return e;
}

inline Evaluation evaluate(const GoalProgram& gp, const Strategy& alpha) {
  return score(gp, gp.model().evaluate(alpha));
}

/// Objective value at alpha; the worst-value sentinel when a goal is vetoed.
inline double objective(const GoalProgram& gp, const Strategy& alpha) { return evaluate(gp, alpha).objective; }

}  // namespace riskgp
