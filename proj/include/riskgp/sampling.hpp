#pragma once

// Seeded generators for payoffs, strategies and positions. The audits and the
// property tests draw from these so that every sample is reproducible.

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "riskgp/payoff.hpp"
#include "riskgp/region.hpp"

namespace riskgp::sampling {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Uniform point of the simplex (normalized exponentials).
inline Strategy strategy(Rng& rng, std::size_t d) {
  std::vector<double> w(d);
  std::exponential_distribution<double> e(1.0);
  for (double& v : w) v = e(rng);
  return Strategy::projected(std::move(w));
}

/// Random polynomial of degree <= max_degree with coefficients in [-scale, scale].
inline std::vector<double> coefficients(Rng& rng, int max_degree, double scale = 1.0) {
  const int deg = std::uniform_int_distribution<int>(0, std::clamp(max_degree, 0, static_cast<int>(kMaxDegree)))(rng);
  std::vector<double> c;
  for (int k = 0; k <= deg; ++k) c.push_back(uniform(rng, -scale, scale));
  return c;
}

/// Piecewise polynomial with 1..max_pieces pieces and interior breakpoints in (0.05, 0.95).
inline PiecewisePolynomial payoff(Rng& rng, int max_degree, int max_pieces = 1, double scale = 1.0) {
  const int pieces = std::uniform_int_distribution<int>(1, std::max(1, max_pieces))(rng);
  std::vector<double> cuts;
  for (int k = 1; k < pieces; ++k) cuts.push_back(uniform(rng, 0.05, 0.95));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(1.0);
  std::vector<PieceSpec> specs;
  for (double end : cuts) specs.push_back({end, coefficients(rng, max_degree, scale)});
  return PiecewisePolynomial::from_pieces(specs);
}

/// d-component position (Y_1..Y_d) of random piecewise payoffs.
inline Position position(Rng& rng, std::size_t d, int max_degree = 2, int max_pieces = 2) {
  Position y;
  for (std::size_t j = 0; j < d; ++j) y.push_back(payoff(rng, max_degree, max_pieces));
  return y;
}

inline std::vector<Position> positions(std::uint64_t seed, std::size_t count, std::size_t d) {
  Rng rng(seed);
  std::vector<Position> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(position(rng, d));
  return out;
}

/// Strategy-scaled baskets (alpha_1 X_1, ..., alpha_d X_d) at random alphas.
inline std::vector<Position> basket_positions(std::uint64_t seed, std::size_t count,
                                              std::span<const PiecewisePolynomial> assets) {
  Rng rng(seed);
  std::vector<Position> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(scaled_basket(strategy(rng, assets.size()), assets));
  return out;
}

}  // namespace riskgp::sampling
