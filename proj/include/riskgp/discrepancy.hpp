#pragma once

// Quantitative comparison of the printed closed forms (printed_forms.hpp)
// against the derived evaluators, plus the corrected entropic closed form.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "riskgp/baskets.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/printed_forms.hpp"
#include "riskgp/risk.hpp"
#include "riskgp/scenario.hpp"
#include "riskgp/solve.hpp"

namespace riskgp {

namespace detail {
inline double entropic_log_j(const Scenario& s, double lambda, const Strategy& a) {
  if (a.size() != 3) throw ContractError("entropic closed form is defined for three-asset strategies only");
  const double A = 2.0 * lambda * a[1] + s.tilt();
  const double B = A + 4.0 * lambda * a[2];
  // e^{l a3} (e^{-B/4} - e^{-B}) = e^{l a3 - B/4} (1 - e^{-3B/4})
  return std::log(-std::expm1(-0.25 * A) / A + std::exp(lambda * a[2] - 0.25 * B) * (-std::expm1(-0.75 * B)) / B);
}
}  // namespace detail

/// Entropic risk of alpha . (1, 2w, (4w-1)+) under Q_i in closed form:
///   (1/l) ln(i ln i) - (1/l) ln(i-1) - alpha_1 + (1/l) ln J,
///   J = (1 - e^{-A/4})/A + e^{l alpha_3} (e^{-B/4} - e^{-B})/B,
///   A = 2 l alpha_2 + ln i,  B = A + 4 l alpha_3.
inline double entropic_closed_form(const Scenario& s, double lambda, const Strategy& a) {
  const double i = s.index();
  return (std::log(i * s.tilt()) - std::log(i - 1.0) + detail::entropic_log_j(s, lambda, a)) / lambda - a[0];
}

/// printed - closed form, split into three additive terms.
struct EntropicGap {
  double scenario = 0.0;
  double lambda = 0.0;
  std::vector<double> alpha;
  double printed = 0.0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double cash_term = 0.0;      // -(l - 1) alpha_1: -l alpha_1 printed where -alpha_1 belongs
  double missing_scale = 0.0;  // (1 - 1/l) ln J_printed: the log bracket lacks its 1/l
  double denominator = 0.0;    // (1/l)(ln J_printed - ln J): e^{alpha_3} divides where e^{l alpha_3} multiplies
  double residual() const { return printed - closed_form - (cash_term + missing_scale + denominator); }
};

inline EntropicGap entropic_gap(const Scenario& s, double lambda, const Strategy& a) {
  const auto t = printed::entropic_terms(s, lambda, a);
  EntropicGap g;
  g.scenario = s.index();
  g.lambda = lambda;
  g.alpha.assign(a.weights().begin(), a.weights().end());
  g.printed = t.total();
  g.closed_form = entropic_closed_form(s, lambda, a);
  g.oracle = entropic_oracle(s, lambda, combine(a, baskets::entropic()));
  const double lnJ = detail::entropic_log_j(s, lambda, a);
  g.cash_term = -(lambda - 1.0) * a[0];
  g.missing_scale = (1.0 - 1.0 / lambda) * t.log_bracket;
  g.denominator = (t.log_bracket - lnJ) / lambda;
  return g;
}

/// Printed-versus-derived gap of one criterion over a simplex grid.
struct GapStats {
  std::string label;
  double max_abs_gap = 0.0;
  double mean_abs_gap = 0.0;
  std::size_t points = 0;
  std::size_t skipped = 0;  // grid points where the printed form is undefined
  std::vector<double> worst_alpha;
  double printed_at_worst = 0.0;
  double derived_at_worst = 0.0;
};

namespace detail {
inline bool printed_defined(const Criterion& c, const Strategy& a) {
  return !(c.kind == CriterionKind::var_of_sum && a[2] == 0.0);
}
}  // namespace detail

/// One GapStats per criterion; the model must admit the printed mode.
inline std::vector<GapStats> printed_vs_derived(const RiskModel& model, int k = 100, int threads = 0) {
  const auto printed_model = model.with_mode(EvalMode::printed);
  const auto derived_model = model.with_mode(EvalMode::oracle);
  const auto grid = simplex_grid(model.dimension(), static_cast<std::size_t>(k));
  const std::size_t n = model.size();
  std::vector<std::vector<double>> pv(grid.size()), dv(grid.size());
  detail::parallel_for(grid.size(), resolve_threads(threads), [&](std::size_t g) {
    pv[g] = printed_model.evaluate(grid[g]);
    dv[g] = derived_model.evaluate(grid[g]);
  });
  std::vector<GapStats> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto& st = out[c];
    st.label = model.criteria()[c].label();
    double sum = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!detail::printed_defined(model.criteria()[c], grid[g])) {
        ++st.skipped;
        continue;
      }
      const double gap = std::abs(pv[g][c] - dv[g][c]);
      sum += gap;
      ++st.points;
      if (gap > st.max_abs_gap || st.worst_alpha.empty()) {
        st.max_abs_gap = std::max(st.max_abs_gap, gap);
        st.worst_alpha.assign(grid[g].weights().begin(), grid[g].weights().end());
        st.printed_at_worst = pv[g][c];
        st.derived_at_worst = dv[g][c];
      }
    }
    st.mean_abs_gap = st.points ? sum / static_cast<double>(st.points) : 0.0;
  }
  return out;
}

/// Sign agreement of the printed lambda = 0.05 V@R table with V@R and with the quantile (-V@R).
struct VarTableReport {
  std::size_t points = 0;
  std::size_t skipped = 0;  // alpha_3 = 0
  std::array<std::size_t, 4> case_counts{};
  std::size_t sign_flips_vs_var = 0;
  std::size_t sign_flips_vs_quantile = 0;
  double max_gap_vs_var = 0.0;
  double max_gap_vs_quantile = 0.0;
  std::size_t triangle_violations = 0;  // printed V@R of the sum above the printed worst-case sum
  double max_triangle_excess = 0.0;
  double corner_printed = 0.0;  // at (0,0,1)
  double corner_var = 0.0;
};

inline VarTableReport var_table_report(int k = 100, int threads = 0) {
  const auto assets = baskets::var_triangle();
  constexpr double level = 0.05;
  const auto grid = simplex_grid(3, static_cast<std::size_t>(k));
  std::vector<double> var(grid.size(), 0.0);
  detail::parallel_for(grid.size(), resolve_threads(threads), [&](std::size_t g) {
    if (grid[g][2] != 0.0) var[g] = var_of_sum(grid[g], assets, level);
  });
  auto sign = [](double x) { return std::abs(x) <= 1e-12 ? 0 : (x > 0 ? 1 : -1); };
  VarTableReport r;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& a = grid[g];
    if (a[2] == 0.0) {
      ++r.skipped;
      continue;
    }
    ++r.points;
    ++r.case_counts[static_cast<std::size_t>(printed::var_case(a) - 1)];
    const double p = printed::var_piecewise(a);
    const double v = var[g], q = -var[g];
    if (sign(p) * sign(v) < 0) ++r.sign_flips_vs_var;
    if (sign(p) * sign(q) < 0) ++r.sign_flips_vs_quantile;
    r.max_gap_vs_var = std::max(r.max_gap_vs_var, std::abs(p - v));
    r.max_gap_vs_quantile = std::max(r.max_gap_vs_quantile, std::abs(p - q));
    const double excess = p - printed::worst_case(a);
    if (excess > 0.0) {
      ++r.triangle_violations;
      r.max_triangle_excess = std::max(r.max_triangle_excess, excess);
    }
  }
  const Strategy corner{0.0, 0.0, 1.0};
  r.corner_printed = printed::var_piecewise(corner);
  r.corner_var = var_of_sum(corner, assets, level);
  return r;
}

/// Printed alpha_3 coefficient of the linear expectation against 3 E_Q[w^2].
struct CoefficientGap {
  double scenario = 0.0;
  double printed = 0.0;
  double exact = 0.0;       // tilted moments
  double quadrature = 0.0;  // adaptive quadrature
  double gap() const { return printed - quadrature; }
};

inline CoefficientGap linear_coefficient_gap(double i) {
  const Scenario s(i);
  CoefficientGap g;
  g.scenario = i;
  g.printed = printed::linear_alpha3_coefficient(s);
  g.exact = expect_poly(s, PiecewisePolynomial::polynomial({0.0, 0.0, 3.0}));
  g.quadrature = expect_quadrature(s, [](double w) { return 3.0 * w * w; });
  return g;
}

/// Published minima of the printed entropic criteria at (i, l) = (2,4), (3,5), (4,6).
inline constexpr std::array<double, 3> kPublishedEntropicMinima{-4.405194, -5.497588, -6.575445};
inline constexpr double kEntropicMinimumTolerance = 5e-3;

struct PrintedMinimum {
  double scenario = 0.0;
  double lambda = 0.0;
  std::vector<double> alpha;
  double value = 0.0;
  double grid_value = 0.0;
  double published = 0.0;
  bool within_tolerance = false;
  EntropicGap decomposition;
};

/// Minimizes each printed entropic criterion of the fixture over the simplex.
inline std::vector<PrintedMinimum> printed_entropic_minima(const Settings& settings = {400, 500, 1e-13, 0}) {
  const std::array<std::array<double, 2>, 3> params{{{2.0, 4.0}, {3.0, 5.0}, {4.0, 6.0}}};
  std::vector<PrintedMinimum> out;
  for (std::size_t c = 0; c < params.size(); ++c) {
    const Scenario s(params[c][0]);
    const double lambda = params[c][1];
    const auto m = minimize_on_simplex([&](const Strategy& a) { return printed::entropic(s, lambda, a); }, 3, settings);
    PrintedMinimum pm;
    pm.scenario = s.index();
    pm.lambda = lambda;
    pm.alpha.assign(m.alpha.weights().begin(), m.alpha.weights().end());
    pm.value = m.value;
    pm.grid_value = m.grid_value;
    pm.published = kPublishedEntropicMinima[c];
    pm.within_tolerance = std::abs(pm.value - pm.published) <= kEntropicMinimumTolerance;
    pm.decomposition = entropic_gap(s, lambda, m.alpha);
    out.push_back(std::move(pm));
  }
  return out;
}

/// Two payoffs with V@R_0.05 = 0 whose even mixture has V@R_0.05 = 0.5:
/// X = -1 on [0, 0.04), Y = -1 on [0.04, 0.08), both 0 elsewhere.
inline std::array<PiecewisePolynomial, 2> var_convexity_pair() {
  const std::vector<PieceSpec> x{{0.04, {-1.0}}, {1.0, {0.0}}};
  const std::vector<PieceSpec> y{{0.04, {0.0}}, {0.08, {-1.0}}, {1.0, {0.0}}};
  return {PiecewisePolynomial::from_pieces(x), PiecewisePolynomial::from_pieces(y)};
}

}  // namespace riskgp
