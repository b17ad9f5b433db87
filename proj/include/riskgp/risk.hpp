#pragma once

// Scalar risk measures on payoffs and the criterion vector (RiskModel) the
// goal program optimizes over.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskgp/baskets.hpp"
#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/printed_forms.hpp"
#include "riskgp/scenario.hpp"

namespace riskgp {

/// -E_Q[p]
inline double expected_loss(const Scenario& s, const PiecewisePolynomial& p) { return -expect_poly(s, p); }

/// max over scenarios of -E_Q[alpha . X]
inline double sup_expected_loss(const Strategy& alpha, std::span<const PiecewisePolynomial> assets,
                                std::span<const Scenario> scenarios) {
  if (scenarios.empty()) throw ContractError("sup_expected_loss needs at least one scenario");
  const auto position = combine(alpha, assets);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : scenarios) best = std::max(best, expected_loss(s, position));
  return best;
}

/// (1/lambda) ln E_Q[exp(-lambda p)], by quadrature with a max-shift.
inline double entropic_oracle(const Scenario& s, double lambda, const PiecewisePolynomial& p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ContractError("entropic risk aversion must be > 0");
  const double shift = -lambda * ess_inf(p);
  auto g = [&](double w) { return std::exp(-lambda * p(w) - shift); };
  const double e = expect_quadrature(s, g, p.breakpoints());
  return (shift + std::log(e)) / lambda;
}

/// V@R_level(p) = -sup{m : Leb(p <= m) <= level}, by bisection on the exact sublevel measure.
inline double var_numeric(double level, const PiecewisePolynomial& p) {
  if (!(level > 0.0 && level < 1.0)) throw ContractError("V@R level must lie in (0,1)");
  const double inf = ess_inf(p), sup = ess_sup(p);
  double lo = inf - 1.0, hi = sup + 1.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 4.0 * eps * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
    const double mid = 0.5 * (lo + hi);
    if (sublevel_measure(p, mid) <= level)
      lo = mid;
    else
      hi = mid;
  }
  return -std::clamp(lo, inf, sup);
}

/// -ess inf p
inline double worst_case(const PiecewisePolynomial& p) { return -ess_inf(p); }

/// sum_i alpha_i V@R(X_i)
inline double var_sum(const Strategy& alpha, std::span<const PiecewisePolynomial> assets, double level) {
  if (alpha.size() != assets.size()) throw ContractError("var_sum: strategy/asset size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < assets.size(); ++i)
    if (alpha[i] != 0.0) total += alpha[i] * var_numeric(level, assets[i]);
  return total;
}

/// V@R(sum_i alpha_i X_i)
inline double var_of_sum(const Strategy& alpha, std::span<const PiecewisePolynomial> assets, double level) {
  return var_numeric(level, combine(alpha, assets));
}

/// sum_i alpha_i rho_w(X_i)
inline double worst_case_sum(const Strategy& alpha, std::span<const PiecewisePolynomial> assets) {
  if (alpha.size() != assets.size()) throw ContractError("worst_case_sum: strategy/asset size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < assets.size(); ++i)
    if (alpha[i] != 0.0) total += alpha[i] * worst_case(assets[i]);
  return total;
}

enum class CriterionKind { expected_loss, entropic, var_sum, var_of_sum, worst_case_sum };
enum class EvalMode { oracle, printed };
enum class Basket { linear, entropic, var_triangle, custom };

inline std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::expected_loss: return "expected-loss";
    case CriterionKind::entropic: return "entropic";
    case CriterionKind::var_sum: return "var-sum";
    case CriterionKind::var_of_sum: return "var-of-sum";
    case CriterionKind::worst_case_sum: return "worst-case-sum";
  }
  return "?";
}

inline std::optional<CriterionKind> parse_criterion_kind(std::string_view s) {
  for (auto k : {CriterionKind::expected_loss, CriterionKind::entropic, CriterionKind::var_sum,
                 CriterionKind::var_of_sum, CriterionKind::worst_case_sum})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Config spelling: "oracle" | "paper".
inline std::string_view to_string(EvalMode m) { return m == EvalMode::oracle ? "oracle" : "paper"; }

inline std::optional<EvalMode> parse_eval_mode(std::string_view s) {
  if (s == "oracle") return EvalMode::oracle;
  if (s == "paper") return EvalMode::printed;
  return std::nullopt;
}

inline std::string_view to_string(Basket b) {
  switch (b) {
    case Basket::linear: return "linear";
    case Basket::entropic: return "entropic";
    case Basket::var_triangle: return "var-triangle";
    case Basket::custom: return "custom";
  }
  return "?";
}

inline Basket identify_basket(std::span<const PiecewisePolynomial> assets) {
  auto same = [&](const std::vector<PiecewisePolynomial>& b) {
    return std::equal(assets.begin(), assets.end(), b.begin(), b.end());
  };
  if (same(baskets::linear())) return Basket::linear;
  if (same(baskets::entropic())) return Basket::entropic;
  if (same(baskets::var_triangle())) return Basket::var_triangle;
  return Basket::custom;
}

struct Criterion {
  CriterionKind kind = CriterionKind::expected_loss;
  double scenario = 0.0;       // expected-loss, entropic
  double risk_aversion = 0.0;  // entropic
  double level = 0.0;          // var-sum, var-of-sum
  std::optional<EvalMode> mode;

  static Criterion expected_loss(double i) { return {CriterionKind::expected_loss, i, 0.0, 0.0, {}}; }
  static Criterion entropic(double i, double lambda) { return {CriterionKind::entropic, i, lambda, 0.0, {}}; }
  static Criterion var_sum(double level) { return {CriterionKind::var_sum, 0.0, 0.0, level, {}}; }
  static Criterion var_of_sum(double level) { return {CriterionKind::var_of_sum, 0.0, 0.0, level, {}}; }
  static Criterion worst_case_sum() { return {CriterionKind::worst_case_sum, 0.0, 0.0, 0.0, {}}; }

  bool uses_scenario() const { return kind == CriterionKind::expected_loss || kind == CriterionKind::entropic; }
  bool uses_level() const { return kind == CriterionKind::var_sum || kind == CriterionKind::var_of_sum; }

  std::string label() const {
    std::string s(to_string(kind));
    if (uses_scenario()) s += "[i=" + trim(scenario) + "]";
    if (kind == CriterionKind::entropic) s += "[lambda=" + trim(risk_aversion) + "]";
    if (uses_level()) s += "[level=" + trim(level) + "]";
    return s;
  }

 private:
  static std::string trim(double v) {
    std::string s = std::to_string(v);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

/// Named vector of scalar criteria over a fixed asset basket.
class RiskModel {
 public:
  RiskModel(std::vector<Criterion> criteria, std::vector<PiecewisePolynomial> assets,
            EvalMode mode = EvalMode::oracle)
      : criteria_(std::move(criteria)), assets_(std::move(assets)), mode_(mode) {
    if (criteria_.empty()) throw ContractError("risk model needs at least one criterion");
    if (assets_.empty()) throw ContractError("risk model needs at least one asset");
    basket_ = identify_basket(assets_);
    for (std::size_t k = 0; k < criteria_.size(); ++k) validate(k);
    asset_worst_.reserve(assets_.size());
    for (const auto& x : assets_) asset_worst_.push_back(worst_case(x));
    asset_var_.resize(criteria_.size());
    for (std::size_t k = 0; k < criteria_.size(); ++k) {
      if (!criteria_[k].uses_level()) continue;
      for (const auto& x : assets_) asset_var_[k].push_back(var_numeric(criteria_[k].level, x));
    }
  }

  const std::vector<Criterion>& criteria() const noexcept { return criteria_; }
  const std::vector<PiecewisePolynomial>& assets() const noexcept { return assets_; }
  EvalMode mode() const noexcept { return mode_; }
  Basket basket() const noexcept { return basket_; }
  std::size_t size() const noexcept { return criteria_.size(); }
  std::size_t dimension() const noexcept { return assets_.size(); }

  EvalMode effective_mode(std::size_t k) const { return criteria_.at(k).mode.value_or(mode_); }

  /// Same criteria and assets, one mode for all criteria.
  RiskModel with_mode(EvalMode mode) const {
    auto crit = criteria_;
    for (auto& c : crit) c.mode.reset();
    return RiskModel(std::move(crit), assets_, mode);
  }

  /// Criteria are (var-sum, var-of-sum) at a common level: the region is a triangle.
  bool is_var_triangle() const {
    return criteria_.size() == 2 && criteria_[0].kind == CriterionKind::var_sum &&
           criteria_[1].kind == CriterionKind::var_of_sum && criteria_[0].level == criteria_[1].level;
  }

  double evaluate(std::size_t k, const Strategy& alpha) const {
    check_strategy(alpha);
    const auto& c = criteria_.at(k);
    if (effective_mode(k) == EvalMode::printed) return evaluate_printed(c, alpha);
    switch (c.kind) {
      case CriterionKind::expected_loss:
        return expected_loss(Scenario(c.scenario), combine(alpha, assets_));
      case CriterionKind::entropic:
        return entropic_oracle(Scenario(c.scenario), c.risk_aversion, combine(alpha, assets_));
      case CriterionKind::var_sum: {
        double total = 0.0;
        for (std::size_t i = 0; i < assets_.size(); ++i) total += alpha[i] * asset_var_[k][i];
        return total;
      }
      case CriterionKind::var_of_sum:
        return var_numeric(c.level, combine(alpha, assets_));
      case CriterionKind::worst_case_sum:
        return weighted_worst(alpha);
    }
    return 0.0;
  }

  std::vector<double> evaluate(const Strategy& alpha) const {
    std::vector<double> out;
    out.reserve(criteria_.size());
    for (std::size_t k = 0; k < criteria_.size(); ++k) out.push_back(evaluate(k, alpha));
    return out;
  }

  /// sum_i alpha_i rho_w(X_i), in the model's mode.
  double weighted_worst(const Strategy& alpha) const {
    check_strategy(alpha);
    if (mode_ == EvalMode::printed && basket_ == Basket::var_triangle) return printed::worst_case(alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < assets_.size(); ++i) total += alpha[i] * asset_worst_[i];
    return total;
  }

  /// Criterion values of an arbitrary position (Y_1..Y_d), always through the derived evaluators.
  std::vector<double> evaluate_position(std::span<const PiecewisePolynomial> position) const {
    if (position.size() != assets_.size()) throw ContractError("position dimension mismatch");
    std::vector<const PiecewisePolynomial*> terms;
    for (const auto& y : position) terms.push_back(&y);
    const std::vector<double> ones(position.size(), 1.0);
    const auto total = PiecewisePolynomial::axpy(ones, terms);
    std::vector<double> out;
    for (const auto& c : criteria_) {
      switch (c.kind) {
        case CriterionKind::expected_loss:
          out.push_back(expected_loss(Scenario(c.scenario), total));
          break;
        case CriterionKind::entropic:
          out.push_back(entropic_oracle(Scenario(c.scenario), c.risk_aversion, total));
          break;
        case CriterionKind::var_sum: {
          double s = 0.0;
          for (const auto& y : position) s += var_numeric(c.level, y);
          out.push_back(s);
          break;
        }
        case CriterionKind::var_of_sum:
          out.push_back(var_numeric(c.level, total));
          break;
        case CriterionKind::worst_case_sum: {
          double s = 0.0;
          for (const auto& y : position) s += worst_case(y);
          out.push_back(s);
          break;
        }
      }
    }
    return out;
  }

  /// Position-level sum_j rho_w(Y_j).
  static double position_worst(std::span<const PiecewisePolynomial> position) {
    double s = 0.0;
    for (const auto& y : position) s += worst_case(y);
    return s;
  }

 private:
  std::vector<Criterion> criteria_;
  std::vector<PiecewisePolynomial> assets_;
  EvalMode mode_;
  Basket basket_ = Basket::custom;
  std::vector<double> asset_worst_;
  std::vector<std::vector<double>> asset_var_;

  void check_strategy(const Strategy& alpha) const {
    if (alpha.size() != assets_.size())
      throw ContractError("strategy has " + std::to_string(alpha.size()) + " weights, model has " +
                          std::to_string(assets_.size()) + " assets");
  }

  void validate(std::size_t k) const {
    const auto& c = criteria_[k];
    const std::string where = "criterion " + std::to_string(k) + " (" + std::string(to_string(c.kind)) + "): ";
    if (c.uses_scenario() && !(c.scenario > 1.0)) throw ContractError(where + "scenario index must be > 1");
    if (c.kind == CriterionKind::entropic && !(c.risk_aversion > 0.0))
      throw ContractError(where + "risk aversion must be > 0");
    if (c.uses_level() && !(c.level > 0.0 && c.level < 1.0))
      throw ContractError(where + "V@R level must lie in (0,1)");
    if (effective_mode(k) != EvalMode::printed) return;
    switch (c.kind) {
      case CriterionKind::expected_loss:
        if (basket_ != Basket::linear) throw ContractError(where + "printed form exists only for the linear basket");
        break;
      case CriterionKind::entropic:
        if (basket_ != Basket::entropic)
          throw ContractError(where + "printed form exists only for the entropic basket");
        break;
      case CriterionKind::var_sum:
      case CriterionKind::var_of_sum:
        if (basket_ != Basket::var_triangle || c.level != 0.05)
          throw ContractError(where + "printed form exists only for the V@R basket at level 0.05");
        break;
      case CriterionKind::worst_case_sum:
        if (basket_ != Basket::var_triangle)
          throw ContractError(where + "printed form exists only for the V@R basket");
        break;
    }
  }

  double evaluate_printed(const Criterion& c, const Strategy& alpha) const {
    switch (c.kind) {
      case CriterionKind::expected_loss:
        return printed::linear_expected_loss(Scenario(c.scenario), alpha);
      case CriterionKind::entropic:
        return printed::entropic(Scenario(c.scenario), c.risk_aversion, alpha);
      case CriterionKind::var_sum:
        return printed::var_sum(alpha);
      case CriterionKind::var_of_sum:
        if (alpha[2] == 0.0) return var_numeric(c.level, combine(alpha, assets_));
        return printed::var_piecewise(alpha);
      case CriterionKind::worst_case_sum:
        return printed::worst_case(alpha);
    }
    return 0.0;
  }
};

}  // namespace riskgp
