#pragma once

// Closed-form real roots of polynomials of degree <= 4.
//
// Coefficients are in ascending degree order. Each root from the closed form
// gets one Newton step on the original polynomial, kept only if it lowers the
// residual.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace riskgp::roots {

inline double horner(std::span<const double> c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline double horner_derivative(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

/// Index of the highest coefficient that is not negligible against the largest one.
inline int effective_degree(std::span<const double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return -1;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    if (std::abs(c[static_cast<std::size_t>(k)]) > 1e-15 * scale) return k;
  }
  return -1;
}

namespace detail {

inline void quadratic(double a, double b, double c, std::vector<double>& out) {
  // a x^2 + b x + c, a != 0
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // tangent within rounding: keep the double root
    if (disc > -1e-14 * (b * b + std::abs(4.0 * a * c))) out.push_back(-b / (2.0 * a));
    return;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) {
    out.push_back(0.0);
    return;
  }
  out.push_back(q / a);
  out.push_back(c / q);
}

// Monic depressed cubic t^3 + p t + q.
inline void depressed_cubic(double p, double q, std::vector<double>& out) {
  if (p == 0.0) {
    out.push_back(std::cbrt(-q));
    return;
  }
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    out.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
  } else {
    // three real roots (p < 0)
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) out.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }
}

inline void cubic(double a3, double a2, double a1, double a0, std::vector<double>& out) {
  const double a = a2 / a3, b = a1 / a3, c = a0 / a3;
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  std::vector<double> t;
  depressed_cubic(p, q, t);
  for (double v : t) out.push_back(v - shift);
}

inline void quartic(std::span<const double> c, std::vector<double>& out) {
  const double a = c[3] / c[4], b = c[2] / c[4], cc = c[1] / c[4], d = c[0] / c[4];
  const double shift = a / 4.0;
  const double p = b - 3.0 * a * a / 8.0;
  const double q = a * a * a / 8.0 - a * b / 2.0 + cc;
  const double r = -3.0 * a * a * a * a / 256.0 + a * a * b / 16.0 - a * cc / 4.0 + d;
  const double qscale = std::abs(p) + std::abs(r) + 1.0;

  std::vector<double> y;
  if (std::abs(q) <= 1e-14 * qscale) {
    // biquadratic in y^2
    std::vector<double> z;
    quadratic(1.0, p, r, z);
    for (double v : z) {
      if (v > 0.0) {
        y.push_back(std::sqrt(v));
        y.push_back(-std::sqrt(v));
      } else if (v > -1e-14 * qscale) {
        y.push_back(0.0);
      }
    }
  } else {
    // Ferrari: 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0, take the largest real root (> 0)
    std::vector<double> ms;
    cubic(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q, ms);
    double m = *std::max_element(ms.begin(), ms.end());
    // one Newton step on the resolvent
    const std::array<double, 4> res{-q * q, 2.0 * p * p - 8.0 * r, 8.0 * p, 8.0};
    const double dm = horner_derivative(res, m);
    if (dm != 0.0) {
      const double m2 = m - horner(res, m) / dm;
      if (m2 > 0.0 && std::abs(horner(res, m2)) < std::abs(horner(res, m))) m = m2;
    }
    if (m <= 0.0) m = std::max(m, 1e-300);
    const double s = std::sqrt(2.0 * m);
    const double k = q / (2.0 * s);
    quadratic(1.0, -s, p / 2.0 + m + k, y);
    quadratic(1.0, s, p / 2.0 + m - k, y);
  }
  for (double v : y) out.push_back(v - shift);
}

}  // namespace detail

/// Distinct real roots, ascending. An identically zero polynomial yields no roots.
inline std::vector<double> real_roots(std::span<const double> coeffs) {
  const int deg = effective_degree(coeffs);
  std::vector<double> raw;
  switch (deg) {
    case -1:
    case 0:
      return {};
    case 1:
      raw.push_back(-coeffs[0] / coeffs[1]);
      break;
    case 2:
      detail::quadratic(coeffs[2], coeffs[1], coeffs[0], raw);
      break;
    case 3:
      detail::cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0], raw);
      break;
    case 4:
      detail::quartic(coeffs.first(5), raw);
      break;
    default:
      return {};
  }
  const auto poly = coeffs.first(static_cast<std::size_t>(deg) + 1);
  for (double& x : raw) {
    const double fx = horner(poly, x);
    const double dfx = horner_derivative(poly, x);
    if (dfx != 0.0 && std::isfinite(fx)) {
      const double x2 = x - fx / dfx;
      if (std::isfinite(x2) && std::abs(horner(poly, x2)) < std::abs(fx)) x = x2;
    }
  }
  std::sort(raw.begin(), raw.end());
  std::vector<double> out;
  for (double x : raw) {
    if (!std::isfinite(x)) continue;
    if (!out.empty() && std::abs(x - out.back()) <= 1e-12 * std::max(1.0, std::abs(x))) continue;
    out.push_back(x);
  }
  return out;
}

/// Real roots restricted to the open interval (lo, hi).
inline std::vector<double> real_roots_in(std::span<const double> coeffs, double lo, double hi) {
  auto all = real_roots(coeffs);
  std::vector<double> out;
  for (double x : all)
    if (x > lo && x < hi) out.push_back(x);
  return out;
}

}  // namespace riskgp::roots
