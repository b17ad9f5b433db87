#pragma once

// Verbatim evaluation of the printed closed forms for the three built-in
// baskets. These reproduce the printed expressions exactly, including their
// inconsistencies with the definitions; the derived evaluators in risk.hpp
// are the correct ones. See discrepancy.hpp for the comparison.

#include <cmath>
#include <string>

#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/scenario.hpp"

namespace riskgp::printed {

namespace detail {
inline void require_three(const Strategy& a, const char* what) {
  if (a.size() != 3) throw ContractError(std::string(what) + " is defined for three-asset strategies only");
}
}  // namespace detail

/// Printed E_Q[alpha . X] for the basket (1, 2w, 3w^2).
inline double linear_expectation(const Scenario& s, const Strategy& a) {
  detail::require_three(a, "printed linear expectation");
  const double i = s.index(), L = s.tilt();
  return a[0] + 2.0 * a[1] * (1.0 / L - 1.0 / (i - 1.0)) +
         3.0 * a[2] * (1.0 / L - 1.0 / (i - 1.0) - 2.0 / ((i - 1.0) * L));
}

/// Printed coefficient of alpha_3 in the linear expectation.
inline double linear_alpha3_coefficient(const Scenario& s) {
  const double i = s.index(), L = s.tilt();
  return 3.0 * (1.0 / L - 1.0 / (i - 1.0) - 2.0 / ((i - 1.0) * L));
}

inline double linear_expected_loss(const Scenario& s, const Strategy& a) { return -linear_expectation(s, a); }

/// The three additive parts of the printed entropic closed form.
struct EntropicTerms {
  double log_scale;    // (1/l) ln(i ln i) - (1/l) ln(i - 1)
  double cash_term;    // -l alpha_1
  double log_bracket;  // ln( ... ), printed without a 1/l factor
  double bracket;      // the argument of that logarithm
  double total() const { return log_scale + cash_term + log_bracket; }
};

/// Printed entropic closed form for the basket (1, 2w, (4w-1)1{w>=1/4}).
inline EntropicTerms entropic_terms(const Scenario& s, double lambda, const Strategy& a) {
  detail::require_three(a, "printed entropic closed form");
  if (!(lambda > 0.0)) throw ContractError("entropic risk aversion must be > 0");
  const double i = s.index(), L = s.tilt();
  const double A = 2.0 * a[1] * lambda + L;
  const double B = 2.0 * a[1] * lambda + 4.0 * a[2] * lambda + L;
  const double bracket = (1.0 - std::exp(-0.25 * A)) / A +
                         (std::exp(-0.25 * B) - std::exp(-B)) / (std::exp(a[2]) * B);
  EntropicTerms t{};
  t.log_scale = std::log(i * L) / lambda - std::log(i - 1.0) / lambda;
  t.cash_term = -lambda * a[0];
  t.bracket = bracket;
  t.log_bracket = std::log(bracket);
  return t;
}

inline double entropic(const Scenario& s, double lambda, const Strategy& a) {
  return entropic_terms(s, lambda, a).total();
}

/// Which row of the printed lambda = 0.05 case table applies (1..4).
inline int var_case(const Strategy& a) {
  detail::require_three(a, "printed V@R table");
  const double a2 = a[1], a3 = a[2];
  if (a2 <= 1.9 * a3) return 1;
  if (a2 <= 2.0 * a3) return 2;
  if (a2 < 2.1 * a3) return 3;
  return 4;
}

/// Printed lambda = 0.05 case table for V@R of (0, 2w-1, 2-4w^2) combinations.
/// The printed rows divide by alpha_3; alpha_3 = 0 is refused.
inline double var_piecewise(const Strategy& a) {
  detail::require_three(a, "printed V@R table");
  const double a2 = a[1], a3 = a[2];
  if (a3 == 0.0) throw DegenerateCaseError("printed V@R table is singular at alpha_3 = 0");
  switch (var_case(a)) {
    case 1:
      return 0.9 * a2 - 1.61 * a3;
    case 2: {
      const double u = a2 / (4.0 * a3) - 0.475;
      return -4.0 * a3 * u * u + a2 * a2 / (2.0 * a3) + 2.0 * a3 - 1.95 * a2;
    }
    case 3:
      return -0.9 * a2 + 2.99 * a3;
    default: {
      const double u = a2 / (4.0 * a3) + 0.475;
      return -4.0 * a3 * u * u + a2 * a2 / (2.0 * a3) + 2.0 * a3 - 0.05 * a2;
    }
  }
}

/// Printed sum_i alpha_i V@R(X_i) at lambda = 0.05.
inline double var_sum(const Strategy& a) {
  detail::require_three(a, "printed V@R sum");
  return a[1] * 0.9 + a[2] * 1.61;
}

/// Printed sum_i alpha_i rho_w(X_i).
inline double worst_case(const Strategy& a) {
  detail::require_three(a, "printed worst-case sum");
  return a[1] * 1.0 + a[2] * 2.0;
}

}  // namespace riskgp::printed
