#pragma once

// Payoffs on the unit-interval sample space as piecewise polynomials, and
// portfolio strategies on the probability simplex.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "riskgp/errors.hpp"
#include "riskgp/poly_roots.hpp"

namespace riskgp {

inline constexpr std::size_t kMaxDegree = 4;
inline constexpr double kBreakpointMergeTol = 1e-14;
inline constexpr double kSimplexSumTol = 1e-12;

/// Ascending-degree coefficients, zero-padded to degree kMaxDegree.
using Coefficients = std::array<double, kMaxDegree + 1>;

/// One piece as written in config files: runs from the previous end to `end`.
struct PieceSpec {
  double end = 1.0;
  std::vector<double> coeffs;
};

class PiecewisePolynomial {
 public:
  PiecewisePolynomial() : PiecewisePolynomial({0.0, 1.0}, {Coefficients{}}) {}

  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Coefficients> pieces)
      : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    validate();
  }

  static PiecewisePolynomial from_pieces(std::span<const PieceSpec> specs) {
    std::vector<double> bps{0.0};
    std::vector<Coefficients> pieces;
    for (const auto& s : specs) {
      if (s.coeffs.size() > kMaxDegree + 1)
        throw ContractError("payoff piece degree exceeds " + std::to_string(kMaxDegree));
      Coefficients c{};
      std::copy(s.coeffs.begin(), s.coeffs.end(), c.begin());
      bps.push_back(s.end);
      pieces.push_back(c);
    }
    return PiecewisePolynomial(std::move(bps), std::move(pieces));
  }

  /// Single polynomial piece on [0,1].
  static PiecewisePolynomial polynomial(std::initializer_list<double> coeffs) {
    const PieceSpec spec{1.0, std::vector<double>(coeffs)};
    return from_pieces(std::span<const PieceSpec>(&spec, 1));
  }

  static PiecewisePolynomial constant(double c) { return polynomial({c}); }

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Coefficients>& pieces() const noexcept { return pieces_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }

  /// Index of the piece governing omega (right piece at interior breakpoints).
  std::size_t piece_index(double omega) const {
    const auto first = breakpoints_.begin() + 1;
    const auto last = breakpoints_.end() - 1;
    return static_cast<std::size_t>(std::upper_bound(first, last, omega) - first);
  }

  double operator()(double omega) const {
    if (!(omega >= 0.0 && omega <= 1.0))
      throw DomainError("payoff evaluated outside [0,1]: " + std::to_string(omega));
    return roots::horner(pieces_[piece_index(omega)], omega);
  }

  std::vector<PieceSpec> to_specs() const {
    std::vector<PieceSpec> out;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& c = pieces_[k];
      std::size_t n = c.size();
      while (n > 1 && c[n - 1] == 0.0) --n;
      out.push_back({breakpoints_[k + 1], std::vector<double>(c.begin(), c.begin() + static_cast<long>(n))});
    }
    return out;
  }

  friend bool operator==(const PiecewisePolynomial&, const PiecewisePolynomial&) = default;

  friend PiecewisePolynomial operator*(double a, const PiecewisePolynomial& p) {
    auto pieces = p.pieces_;
    for (auto& c : pieces)
      for (double& v : c) v *= a;
    return PiecewisePolynomial(p.breakpoints_, std::move(pieces));
  }

  friend PiecewisePolynomial operator+(const PiecewisePolynomial& p, double c) {
    auto pieces = p.pieces_;
    for (auto& q : pieces) q[0] += c;
    return PiecewisePolynomial(p.breakpoints_, std::move(pieces));
  }

  friend PiecewisePolynomial operator+(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
    const std::array<double, 2> w{1.0, 1.0};
    const std::array<const PiecewisePolynomial*, 2> t{&p, &q};
    return axpy(w, t);
  }

  friend PiecewisePolynomial operator-(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
    const std::array<double, 2> w{1.0, -1.0};
    const std::array<const PiecewisePolynomial*, 2> t{&p, &q};
    return axpy(w, t);
  }

  /// sum_i a_i p_i on the merged breakpoint grid.
  static PiecewisePolynomial axpy(std::span<const double> weights,
                                  std::span<const PiecewisePolynomial* const> terms) {
    if (weights.size() != terms.size()) throw ContractError("axpy: weight/term count mismatch");
    if (terms.empty()) return PiecewisePolynomial();
    std::vector<double> merged;
    for (const auto* t : terms) merged.insert(merged.end(), t->breakpoints_.begin(), t->breakpoints_.end());
    std::sort(merged.begin(), merged.end());
    std::vector<double> grid;
    for (double b : merged) {
      if (!grid.empty() && b - grid.back() <= kBreakpointMergeTol) continue;
      grid.push_back(b);
    }
    grid.back() = 1.0;
    std::vector<Coefficients> pieces(grid.size() - 1, Coefficients{});
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double mid = 0.5 * (grid[k] + grid[k + 1]);
      for (std::size_t t = 0; t < terms.size(); ++t) {
        if (weights[t] == 0.0) continue;
        const auto& c = terms[t]->pieces_[terms[t]->piece_index(mid)];
        for (std::size_t j = 0; j < c.size(); ++j) pieces[k][j] += weights[t] * c[j];
      }
    }
    return PiecewisePolynomial(std::move(grid), std::move(pieces));
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<Coefficients> pieces_;

  void validate() const {
    if (breakpoints_.size() < 2 || pieces_.size() + 1 != breakpoints_.size())
      throw ContractError("payoff needs one piece per breakpoint interval");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw ContractError("payoff breakpoints must start at 0 and end at 1");
    for (std::size_t k = 1; k < breakpoints_.size(); ++k)
      if (!(breakpoints_[k] > breakpoints_[k - 1]))
        throw ContractError("payoff breakpoints must be strictly increasing");
    for (const auto& c : pieces_)
      for (double v : c)
        if (!std::isfinite(v)) throw ContractError("payoff coefficient is not finite");
  }
};

/// Portfolio proportions: a point of the simplex.
class Strategy {
 public:
  explicit Strategy(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ContractError("strategy must have at least one weight");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("strategy weights must be finite and >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTol)
      throw ContractError("strategy weights must sum to 1 (got " + std::to_string(sum) + ")");
  }

  Strategy(std::initializer_list<double> w) : Strategy(std::vector<double>(w)) {}

  /// Clip tiny negatives produced by floating steps and renormalize.
  static Strategy projected(std::vector<double> w) {
    for (double& v : w) v = std::max(v, 0.0);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(sum > 0.0)) throw ContractError("cannot project a zero vector onto the simplex");
    for (double& v : w) v /= sum;
    return Strategy(std::move(w));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const Strategy&, const Strategy&) = default;
  friend auto operator<=>(const Strategy& a, const Strategy& b) { return a.weights_ <=> b.weights_; }

 private:
  std::vector<double> weights_;
};

inline double eval(const PiecewisePolynomial& p, double omega) { return p(omega); }

/// Portfolio payoff sum_i alpha_i X_i.
inline PiecewisePolynomial combine(const Strategy& alpha, std::span<const PiecewisePolynomial> assets) {
  if (alpha.size() != assets.size())
    throw ContractError("combine: strategy has " + std::to_string(alpha.size()) + " weights for " +
                        std::to_string(assets.size()) + " assets");
  std::vector<const PiecewisePolynomial*> terms;
  for (const auto& a : assets) terms.push_back(&a);
  return PiecewisePolynomial::axpy(alpha.weights(), terms);
}

namespace detail {

template <class Better>
double piece_extreme(const PiecewisePolynomial& p, Better better) {
  const auto& bps = p.breakpoints();
  double best = roots::horner(p.pieces()[0], 0.0);
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    const auto& c = p.pieces()[k];
    const double lo = bps[k], hi = bps[k + 1];
    auto consider = [&](double x) {
      const double v = roots::horner(c, x);
      if (better(v, best)) best = v;
    };
    consider(lo);
    consider(hi);
    std::array<double, kMaxDegree> deriv{};
    for (std::size_t j = 1; j < c.size(); ++j) deriv[j - 1] = static_cast<double>(j) * c[j];
    for (double x : roots::real_roots_in(deriv, lo, hi)) consider(x);
  }
  return best;
}

}  // namespace detail

/// Essential infimum over [0,1]; pieces are closed at both ends, which only adds null sets.
inline double ess_inf(const PiecewisePolynomial& p) {
  return detail::piece_extreme(p, [](double v, double best) { return v < best; });
}

inline double ess_sup(const PiecewisePolynomial& p) {
  return detail::piece_extreme(p, [](double v, double best) { return v > best; });
}

/// Lebesgue measure of {omega in [0,1] : p(omega) <= m}.
inline double sublevel_measure(const PiecewisePolynomial& p, double m) {
  const auto& bps = p.breakpoints();
  double total = 0.0;
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    Coefficients c = p.pieces()[k];
    c[0] -= m;
    const double lo = bps[k], hi = bps[k + 1];
    if (roots::effective_degree(c) < 0) {
      total += hi - lo;  // piece identically equal to m
      continue;
    }
    std::vector<double> cuts{lo};
    for (double x : roots::real_roots_in(c, lo, hi)) cuts.push_back(x);
    cuts.push_back(hi);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
      if (roots::horner(c, mid) <= 0.0) total += cuts[j + 1] - cuts[j];
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace riskgp
