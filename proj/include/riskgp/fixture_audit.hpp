#pragma once

// audit.json for a built-in fixture: printed-versus-derived gaps, the
// fixture-specific findings, and the scalar and set-valued axiom audits.

#include <cstdint>
#include <string>
#include <vector>

#include "riskgp/audit.hpp"
#include "riskgp/discrepancy.hpp"
#include "riskgp/fixtures.hpp"
#include "riskgp/io.hpp"
#include "riskgp/region.hpp"
#include "riskgp/sampling.hpp"
#include "riskgp/solve.hpp"

namespace riskgp {

struct AuditOptions {
  int gap_grid = 100;
  int nondominance_grid = 200;
  int minima_grid = 400;
  std::size_t positions = 20;
  std::uint64_t seed = 20020417;
  int threads = 0;
};

inline json audit_report_to_json(const AuditReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) {
    json j{{"axiom", f.axiom}, {"passed", f.passed}, {"worst_violation", detail::finite_or_null(f.worst_violation)},
           {"checks", f.checks}};
    j["witness"] = f.witness.empty() ? json(nullptr) : json(f.witness);
    findings.push_back(j);
  }
  return {{"subject", r.subject}, {"tolerance", r.tolerance}, {"findings", findings}};
}

inline json entropic_gap_to_json(const EntropicGap& g) {
  return {{"scenario", g.scenario},       {"lambda", g.lambda},
          {"alpha", g.alpha},             {"printed", g.printed},
          {"closed_form", g.closed_form}, {"oracle", g.oracle},
          {"cash_term", g.cash_term},     {"missing_log_scale", g.missing_scale},
          {"denominator_term", g.denominator}, {"residual", g.residual()}};
}

inline json gap_stats_to_json(const GapStats& s) {
  return {{"criterion", s.label},
          {"max_abs_gap", s.max_abs_gap},
          {"mean_abs_gap", s.mean_abs_gap},
          {"points", s.points},
          {"skipped", s.skipped},
          {"worst_alpha", s.worst_alpha},
          {"printed_at_worst", s.printed_at_worst},
          {"derived_at_worst", s.derived_at_worst}};
}

namespace detail {

inline std::vector<double> weights_of(const Strategy& a) { return {a.weights().begin(), a.weights().end()}; }

/// Scalar audit samples: the basket, a few seeded random payoffs, and extras.
inline std::vector<PiecewisePolynomial> audit_samples(const Fixture& f, std::uint64_t seed,
                                                      std::vector<PiecewisePolynomial> extra = {}) {
  std::vector<PiecewisePolynomial> s = f.assets;
  sampling::Rng rng(seed);
  for (int k = 0; k < 4; ++k) s.push_back(sampling::payoff(rng, 2, 2));
  for (auto& e : extra) s.push_back(std::move(e));
  return s;
}

}  // namespace detail

/// Positions for the set-valued audit: strategy-scaled baskets and random
/// payoffs, alternating. For the V@R model the first two positions carry the
/// V@R convexity counterexample in their first component, so the convexity
/// check (which pairs neighbours) sees it.
inline std::vector<Position> audit_positions(const Fixture& f, std::size_t count, std::uint64_t seed) {
  const std::size_t d = f.assets.size();
  std::vector<Position> out;
  if (f.id == "var-triangle") {
    const auto pair = var_convexity_pair();
    for (const auto& x : pair) {
      Position y(d, PiecewisePolynomial::constant(0.0));
      y[0] = x;
      out.push_back(std::move(y));
    }
  }
  const std::size_t rest = count > out.size() ? count - out.size() : 0;
  const auto scaled = sampling::basket_positions(seed, rest / 2, f.assets);
  const auto random = sampling::positions(seed + 1, rest - rest / 2, d);
  for (std::size_t k = 0; k < std::max(scaled.size(), random.size()); ++k) {
    if (k < random.size()) out.push_back(random[k]);
    if (k < scaled.size()) out.push_back(scaled[k]);
  }
  return out;
}

inline json audit_fixture(const Fixture& f, const AuditOptions& opt = {}) {
  const auto derived = f.model(EvalMode::oracle);
  json out;
  out["fixture"] = f.id;
  out["source"] = f.source;
  out["gap_grid"] = opt.gap_grid;

  json gaps = json::array();
  for (const auto& s : printed_vs_derived(derived, opt.gap_grid, opt.threads)) gaps.push_back(gap_stats_to_json(s));
  out["printed_vs_derived"] = gaps;

  {
    const Strategy a = f.reported();
    json rep{{"alpha_printed", f.reported_alpha}, {"alpha", detail::weights_of(a)}};
    rep["derived_values"] = derived.evaluate(a);
    rep["printed_values"] = f.model(EvalMode::printed).evaluate(a);
    const auto nd = nondominance_test(derived, a, opt.nondominance_grid, opt.threads);
    json ndj{{"grid", opt.nondominance_grid}, {"nondominated", nd.nondominated}, {"checked", nd.checked}};
    ndj["witness"] = nd.witness ? json{{"alpha", detail::weights_of(nd.witness->alpha)}, {"values", nd.witness->values}}
                                : json(nullptr);
    rep["nondominance"] = ndj;
    out["reported_solution"] = rep;
  }

  const double constants_arr[] = {-1.0, 0.5, 2.0};
  const std::span<const double> constants(constants_arr);
  json scalar = json::array();

  if (f.id == "linear-2002") {
    json coeff = json::array();
    for (const auto& c : f.criteria) {
      const auto g = linear_coefficient_gap(c.scenario);
      coeff.push_back({{"scenario", g.scenario},
                       {"printed", g.printed},
                       {"tilted_moments", g.exact},
                       {"quadrature", g.quadrature},
                       {"gap", g.gap()}});
    }
    out["alpha3_coefficient"] = coeff;
    const auto samples = detail::audit_samples(f, opt.seed);
    const Scenario q(f.criteria.front().scenario);
    scalar.push_back(audit_report_to_json(axiom_audit(
        "expected-loss[i=" + detail::fmt(q.index()) + "]", [&](const PiecewisePolynomial& p) { return expected_loss(q, p); },
        samples, constants)));
  } else if (f.id == "entropic") {
    json corner = json::array(), reported = json::array();
    for (const auto& c : f.criteria) {
      const Scenario s(c.scenario);
      corner.push_back(entropic_gap_to_json(entropic_gap(s, c.risk_aversion, Strategy{1.0, 0.0, 0.0})));
      reported.push_back(entropic_gap_to_json(entropic_gap(s, c.risk_aversion, f.reported())));
    }
    out["riskless_corner"] = corner;
    out["reported_alpha_terms"] = reported;
    json minima = json::array();
    for (const auto& m :
         printed_entropic_minima(Settings{opt.minima_grid, 500, 1e-13, opt.threads})) {
      minima.push_back({{"scenario", m.scenario},
                        {"lambda", m.lambda},
                        {"alpha", m.alpha},
                        {"minimum", m.value},
                        {"grid_minimum", m.grid_value},
                        {"published", m.published},
                        {"abs_gap", std::abs(m.value - m.published)},
                        {"within_tolerance", m.within_tolerance},
                        {"tolerance", kEntropicMinimumTolerance},
                        {"terms_at_minimizer", entropic_gap_to_json(m.decomposition)}});
    }
    out["printed_minima"] = minima;
    const auto samples = detail::audit_samples(f, opt.seed);
    const auto& c = f.criteria.front();
    const Scenario q(c.scenario);
    scalar.push_back(audit_report_to_json(axiom_audit(
        "entropic[i=" + detail::fmt(q.index()) + "][lambda=" + detail::fmt(c.risk_aversion) + "]",
        [&](const PiecewisePolynomial& p) { return entropic_oracle(q, c.risk_aversion, p); }, samples, constants)));
  } else if (f.id == "var-triangle") {
    const auto t = var_table_report(opt.gap_grid, opt.threads);
    out["var_table"] = {{"points", t.points},
                        {"skipped_alpha3_zero", t.skipped},
                        {"case_counts", t.case_counts},
                        {"sign_flips_vs_var", t.sign_flips_vs_var},
                        {"sign_flips_vs_quantile", t.sign_flips_vs_quantile},
                        {"max_gap_vs_var", t.max_gap_vs_var},
                        {"max_gap_vs_quantile", t.max_gap_vs_quantile},
                        {"triangle_violations", t.triangle_violations},
                        {"max_triangle_excess", t.max_triangle_excess},
                        {"corner_alpha", {0.0, 0.0, 1.0}},
                        {"corner_printed", t.corner_printed},
                        {"corner_var_numeric", t.corner_var}};
    const auto pair = var_convexity_pair();
    const auto samples = detail::audit_samples(f, opt.seed, {pair[0], pair[1]});
    scalar.push_back(audit_report_to_json(axiom_audit(
        "var[level=0.05]", [](const PiecewisePolynomial& p) { return var_numeric(0.05, p); }, samples, constants)));
    scalar.push_back(audit_report_to_json(
        axiom_audit("worst-case", [](const PiecewisePolynomial& p) { return worst_case(p); }, samples, constants)));
  }
  out["axiom_audit"] = scalar;

  out["set_axiom_audit"] = audit_report_to_json(set_axiom_audit(derived, audit_positions(f, opt.positions, opt.seed)));
  return out;
}

}  // namespace riskgp
