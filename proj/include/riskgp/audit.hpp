#pragma once

// Sampled checks of the scalar risk-measure axioms.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"

namespace riskgp {

inline constexpr double kAuditTolerance = 1e-8;

struct AxiomFinding {
  std::string axiom;
  bool passed = true;
  double worst_violation = 0.0;
  std::size_t checks = 0;
  std::string witness;  // description of the worst instance, empty when passed
};

struct AuditReport {
  std::string subject;
  double tolerance = kAuditTolerance;
  std::vector<AxiomFinding> findings;

  const AxiomFinding* find(std::string_view axiom) const {
    for (const auto& f : findings)
      if (f.axiom == axiom) return &f;
    return nullptr;
  }
  bool passed(std::string_view axiom) const {
    const auto* f = find(axiom);
    return f != nullptr && f->passed;
  }
};

/// Accumulates violations for one axiom; keeps the worst witness.
class FindingBuilder {
 public:
  FindingBuilder(std::string axiom, double tol) : tol_(tol) { f_.axiom = std::move(axiom); }

  template <class Describe>
  void record(double violation, Describe&& describe) {
    ++f_.checks;
    if (!std::isfinite(violation)) violation = std::numeric_limits<double>::infinity();
    if (violation > f_.worst_violation) {
      f_.worst_violation = violation;
      if (violation > tol_) f_.witness = describe();
    }
  }

  AxiomFinding finish() {
    f_.passed = f_.worst_violation <= tol_;
    if (f_.passed) f_.witness.clear();
    return f_;
  }

 private:
  double tol_;
  AxiomFinding f_;
};

using ScalarMeasure = std::function<double(const PiecewisePolynomial&)>;

namespace detail {
inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}
}  // namespace detail

/// Checks monotonicity, convexity, cash additivity, positive homogeneity and
/// sublinearity of `measure` on the supplied samples.
inline AuditReport axiom_audit(std::string subject, const ScalarMeasure& measure,
                               std::span<const PiecewisePolynomial> samples, std::span<const double> constants,
                               double tol = kAuditTolerance) {
  if (samples.size() < 2) throw ContractError("axiom_audit needs at least two sample payoffs");
  using detail::fmt;
  std::vector<double> rho;
  rho.reserve(samples.size());
  for (const auto& p : samples) rho.push_back(measure(p));
  const std::size_t n = samples.size();
  auto name = [](std::size_t i) { return "sample[" + std::to_string(i) + "]"; };

  AuditReport report{std::move(subject), tol, {}};

  FindingBuilder mono("monotonicity", tol);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      // samples[i] + (samples[j] - ess inf samples[j]) dominates samples[i] pointwise
      const auto bump = samples[j] + (-ess_inf(samples[j]));
      const auto upper = samples[i] + bump;
      const double r = measure(upper);
      mono.record(r - rho[i], [&] {
        return name(i) + " + nonneg(" + name(j) + "): rho(upper)=" + fmt(r) + " > rho(lower)=" + fmt(rho[i]);
      });
    }
    for (double c : constants) {
      const double r = measure(samples[i] + std::abs(c));
      mono.record(r - rho[i], [&] { return name(i) + " + " + fmt(std::abs(c)) + ": rho increased to " + fmt(r); });
    }
  }
  report.findings.push_back(mono.finish());

  FindingBuilder conv("convexity", tol);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (double t : {0.25, 0.5, 0.75}) {
        const std::array<double, 2> w{t, 1.0 - t};
        const std::array<const PiecewisePolynomial*, 2> terms{&samples[i], &samples[j]};
        const double lhs = measure(PiecewisePolynomial::axpy(w, terms));
        const double rhs = t * rho[i] + (1.0 - t) * rho[j];
        conv.record(lhs - rhs, [&] {
          return "t=" + fmt(t) + ", " + name(i) + ", " + name(j) + ": rho(mix)=" + fmt(lhs) + " > " + fmt(rhs);
        });
      }
    }
  }
  report.findings.push_back(conv.finish());

  FindingBuilder cash("cash-additivity", tol);
  for (std::size_t i = 0; i < n; ++i) {
    for (double c : constants) {
      const double lhs = measure(samples[i] + c);
      const double rhs = rho[i] - c;
      cash.record(std::abs(lhs - rhs), [&] {
        return name(i) + " + " + fmt(c) + ": rho=" + fmt(lhs) + ", expected " + fmt(rhs);
      });
    }
  }
  report.findings.push_back(cash.finish());

  FindingBuilder homog("positive-homogeneity", tol);
  std::vector<double> scales{0.5, 2.0};
  for (double c : constants)
    if (c != 0.0) scales.push_back(std::abs(c));
  for (std::size_t i = 0; i < n; ++i) {
    for (double a : scales) {
      const double lhs = measure(a * samples[i]);
      const double rhs = a * rho[i];
      homog.record(std::abs(lhs - rhs), [&] {
        return fmt(a) + " * " + name(i) + ": rho=" + fmt(lhs) + ", scaled rho=" + fmt(rhs);
      });
    }
  }
  report.findings.push_back(homog.finish());

  FindingBuilder sub("sublinearity", tol);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lhs = measure(samples[i] + samples[j]);
      const double rhs = rho[i] + rho[j];
      sub.record(lhs - rhs, [&] {
        return name(i) + " + " + name(j) + ": rho(sum)=" + fmt(lhs) + " > " + fmt(rhs);
      });
    }
  }
  report.findings.push_back(sub.finish());
  return report;
}

}  // namespace riskgp
