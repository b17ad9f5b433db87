#pragma once

// The three built-in asset baskets used by the fixtures.

#include <vector>

#include "riskgp/payoff.hpp"

namespace riskgp::baskets {

/// Riskless unit, 2w, 3w^2.
inline std::vector<PiecewisePolynomial> linear() {
  return {PiecewisePolynomial::constant(1.0), PiecewisePolynomial::polynomial({0.0, 2.0}),
          PiecewisePolynomial::polynomial({0.0, 0.0, 3.0})};
}

/// (4w - 1) on [1/4, 1], zero below.
inline PiecewisePolynomial kinked_call() {
  const std::vector<PieceSpec> pieces{{0.25, {0.0}}, {1.0, {-1.0, 4.0}}};
  return PiecewisePolynomial::from_pieces(pieces);
}

/// Riskless unit, 2w, (4w - 1) 1{w >= 1/4}.
inline std::vector<PiecewisePolynomial> entropic() {
  return {PiecewisePolynomial::constant(1.0), PiecewisePolynomial::polynomial({0.0, 2.0}), kinked_call()};
}

/// Zero, 2w - 1, 2 - 4w^2.
inline std::vector<PiecewisePolynomial> var_triangle() {
  return {PiecewisePolynomial::constant(0.0), PiecewisePolynomial::polynomial({-1.0, 2.0}),
          PiecewisePolynomial::polynomial({2.0, 0.0, -4.0})};
}

}  // namespace riskgp::baskets
