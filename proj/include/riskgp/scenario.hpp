#pragma once

// Exponentially tilted probability scenarios on [0,1]:
//   f_i(w) = i^{-w} / N(i),   N(i) = (1 - 1/i) / ln i.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/quadrature.hpp"

namespace riskgp {

class Scenario {
 public:
  explicit Scenario(double index) : index_(index) {
    if (!(index > 1.0) || !std::isfinite(index))
      throw ContractError("scenario index must be a finite real > 1 (got " + std::to_string(index) + ")");
    tilt_ = std::log(index_);
    normalizer_ = -std::expm1(-tilt_) / tilt_;
  }

  double index() const noexcept { return index_; }
  /// a = ln i
  double tilt() const noexcept { return tilt_; }
  double normalizer() const noexcept { return normalizer_; }

  double density(double omega) const {
    if (!(omega >= 0.0 && omega <= 1.0))
      throw DomainError("density evaluated outside [0,1]: " + std::to_string(omega));
    return std::exp(-tilt_ * omega) / normalizer_;
  }

  /// Q([lo, hi]) for 0 <= lo <= hi <= 1; exactly 1 on the whole interval.
  double mass(double lo, double hi) const {
    return (std::expm1(-tilt_ * hi) - std::expm1(-tilt_ * lo)) / std::expm1(-tilt_);
  }

  friend bool operator==(const Scenario& a, const Scenario& b) { return a.index_ == b.index_; }

 private:
  double index_;
  double tilt_ = 0.0;
  double normalizer_ = 0.0;
};

inline double normalizer(const Scenario& s) { return s.normalizer(); }
inline double density(const Scenario& s, double omega) { return s.density(omega); }

inline std::vector<Scenario> make_scenarios(std::span<const double> indices) {
  std::vector<Scenario> out;
  out.reserve(indices.size());
  for (double i : indices) out.emplace_back(i);
  return out;
}

/// int_lo^hi w^k e^{-a w} dw for k <= kMaxDegree, 0 <= lo < hi <= 1, a > 0.
inline double tilted_moment(std::size_t k, double a, double lo, double hi) {
  if (a * hi <= 2.0) {
    // Taylor series of e^{-a w}; the recursion below cancels badly for small a.
    quad::CompensatedSum sum;
    double coef = 1.0;  // (-a)^j / j!
    for (std::size_t j = 0; j < 80; ++j) {
      const double p = static_cast<double>(k + j + 1);
      const double term = coef * (std::pow(hi, p) - std::pow(lo, p)) / p;
      sum.add(term);
      if (std::abs(term) < 1e-20 * std::max(1e-300, std::abs(sum.value())) && j > 2) break;
      coef *= -a / static_cast<double>(j + 1);
    }
    return sum.value();
  }
  // I_k = [-w^k e^{-a w}/a]_lo^hi + (k/a) I_{k-1}
  const double elo = std::exp(-a * lo), ehi = std::exp(-a * hi);
  double prev = (elo - ehi) / a;
  for (std::size_t j = 1; j <= k; ++j) {
    quad::CompensatedSum s;
    s.add(std::pow(lo, static_cast<double>(j)) * elo / a);
    s.add(-std::pow(hi, static_cast<double>(j)) * ehi / a);
    s.add(static_cast<double>(j) / a * prev);
    prev = s.value();
  }
  return prev;
}

/// Exact E_Q[p] for a piecewise polynomial payoff.
inline double expect_poly(const Scenario& s, const PiecewisePolynomial& p) {
  const auto& bps = p.breakpoints();
  quad::CompensatedSum constant, rest;
  for (std::size_t piece = 0; piece < p.piece_count(); ++piece) {
    const auto& c = p.pieces()[piece];
    // Constant terms go through the exact probability of the piece, so E_Q[c] = c.
    if (c[0] != 0.0) constant.add(c[0] * s.mass(bps[piece], bps[piece + 1]));
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (c[k] == 0.0) continue;
      rest.add(c[k] * tilted_moment(k, s.tilt(), bps[piece], bps[piece + 1]));
    }
  }
  return constant.value() + rest.value() / s.normalizer();
}

/// E_Q[g] by adaptive quadrature of g(w) f_i(w), splitting at `breakpoints`.
template <class G>
double expect_quadrature(const Scenario& s, const G& g, std::span<const double> breakpoints = {},
                         double abs_tol = quad::kDefaultTolerance) {
  const double a = s.tilt();
  const double norm = s.normalizer();
  auto integrand = [&](double w) { return g(w) * std::exp(-a * w) / norm; };
  return quad::integrate(integrand, 0.0, 1.0, breakpoints, abs_tol).value;
}

}  // namespace riskgp
