#pragma once

// Set-valued risk values: upper boxes, compact boxes and the V@R triangle,
// ordered by the Pareto cone R^n_+.
//
// Every representable region contains its componentwise minimum and lies in
// min + R^n_+, so A + R^n_+ is the upper box at min(A). All cone comparisons
// reduce to comparisons of min corners.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "riskgp/audit.hpp"
#include "riskgp/errors.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/risk.hpp"

namespace riskgp {

/// prod_i [lowers_i, +inf)
struct UpperBox {
  std::vector<double> lowers;
};

/// prod_i [lowers_i, uppers_i]
struct Box {
  std::vector<double> lowers;
  std::vector<double> uppers;
};

/// {(x,y): v_sum <= x <= w, v_joint <= y <= v_joint + slope (x - v_sum)},
/// slope = (w - v_joint)/(w - v_sum). When w == v_sum it is the segment {v_sum} x [v_joint, w].
struct Triangle {
  double v_sum = 0.0;
  double v_joint = 0.0;
  double w = 0.0;

  bool degenerate() const { return w == v_sum; }
  double slope() const { return (w - v_joint) / (w - v_sum); }
};

class RiskRegion {
 public:
  using Shape = std::variant<UpperBox, Box, Triangle>;

  static RiskRegion upper_box(std::vector<double> lowers) {
    if (lowers.empty()) throw ContractError("region must have dimension >= 1");
    for (double v : lowers)
      if (!std::isfinite(v)) throw ContractError("upper box bound is not finite");
    return RiskRegion(UpperBox{std::move(lowers)});
  }

  static RiskRegion box(std::vector<double> lowers, std::vector<double> uppers) {
    if (lowers.empty() || lowers.size() != uppers.size()) throw ContractError("box bounds must match in size");
    for (std::size_t i = 0; i < lowers.size(); ++i) {
      if (!std::isfinite(lowers[i]) || !std::isfinite(uppers[i])) throw ContractError("box bound is not finite");
      if (lowers[i] > uppers[i]) throw ContractError("box needs lower <= upper in every coordinate");
    }
    return RiskRegion(Box{std::move(lowers), std::move(uppers)});
  }

  /// Rounding-level excess of v_sum or v_joint over w (<= 1e-12 relative) is clamped.
  static RiskRegion triangle(double v_sum, double v_joint, double w) {
    if (!std::isfinite(v_sum) || !std::isfinite(v_joint) || !std::isfinite(w))
      throw ContractError("triangle parameters must be finite");
    const double slack = 1e-12 * std::max(1.0, std::abs(w));
    if (v_sum > w + slack || v_joint > w + slack)
      throw ContractError("triangle needs v_sum <= w and v_joint <= w (got v_sum=" + std::to_string(v_sum) +
                          ", v_joint=" + std::to_string(v_joint) + ", w=" + std::to_string(w) + ")");
    return RiskRegion(Triangle{std::min(v_sum, w), std::min(v_joint, w), w});
  }

  const Shape& shape() const noexcept { return shape_; }

  std::string_view variant_name() const {
    if (std::holds_alternative<UpperBox>(shape_)) return "upper_box";
    if (std::holds_alternative<Box>(shape_)) return "box";
    return "triangle";
  }

  std::size_t dimension() const {
    if (const auto* u = std::get_if<UpperBox>(&shape_)) return u->lowers.size();
    if (const auto* b = std::get_if<Box>(&shape_)) return b->lowers.size();
    return 2;
  }

  /// Componentwise minimum; always a member of the region.
  std::vector<double> min_corner() const {
    if (const auto* u = std::get_if<UpperBox>(&shape_)) return u->lowers;
    if (const auto* b = std::get_if<Box>(&shape_)) return b->lowers;
    const auto& t = std::get<Triangle>(shape_);
    return {t.v_sum, t.v_joint};
  }

  std::optional<std::vector<double>> max_corner() const {
    if (std::holds_alternative<UpperBox>(shape_)) return std::nullopt;
    if (const auto* b = std::get_if<Box>(&shape_)) return b->uppers;
    const auto& t = std::get<Triangle>(shape_);
    return std::vector<double>{t.w, t.w};
  }

  bool contains(std::span<const double> x, double tol = 0.0) const {
    if (x.size() != dimension()) throw ContractError("point dimension mismatch");
    if (const auto* u = std::get_if<UpperBox>(&shape_)) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < u->lowers[i] - tol) return false;
      return true;
    }
    if (const auto* b = std::get_if<Box>(&shape_)) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < b->lowers[i] - tol || x[i] > b->uppers[i] + tol) return false;
      return true;
    }
    const auto& t = std::get<Triangle>(shape_);
    if (x[0] < t.v_sum - tol || x[0] > t.w + tol || x[1] < t.v_joint - tol || x[1] > t.w + tol) return false;
    if (t.degenerate()) return true;
    return x[1] <= t.v_joint + t.slope() * (x[0] - t.v_sum) + tol;
  }

  /// region + shift * 1
  RiskRegion translated(double shift) const {
    return map_parameters([shift](double v) { return v + shift; });
  }

  /// factor * region, factor > 0
  RiskRegion scaled(double factor) const {
    if (!(factor > 0.0)) throw ContractError("region scale factor must be > 0");
    return map_parameters([factor](double v) { return v * factor; });
  }

  /// The defining numbers, in a fixed order per variant.
  std::vector<double> parameters() const {
    if (const auto* u = std::get_if<UpperBox>(&shape_)) return u->lowers;
    if (const auto* b = std::get_if<Box>(&shape_)) {
      auto out = b->lowers;
      out.insert(out.end(), b->uppers.begin(), b->uppers.end());
      return out;
    }
    const auto& t = std::get<Triangle>(shape_);
    return {t.v_sum, t.v_joint, t.w};
  }

 private:
  explicit RiskRegion(Shape s) : shape_(std::move(s)) {}

  template <class F>
  RiskRegion map_parameters(F f) const {
    if (const auto* u = std::get_if<UpperBox>(&shape_)) {
      auto l = u->lowers;
      for (double& v : l) v = f(v);
      return upper_box(std::move(l));
    }
    if (const auto* b = std::get_if<Box>(&shape_)) {
      auto l = b->lowers, h = b->uppers;
      for (double& v : l) v = f(v);
      for (double& v : h) v = f(v);
      return box(std::move(l), std::move(h));
    }
    const auto& t = std::get<Triangle>(shape_);
    return triangle(f(t.v_sum), f(t.v_joint), f(t.w));
  }

  Shape shape_;
};

/// A <= B in the set order: B is contained in A + R^n_+ (min corners compared, with slack `tol`).
inline bool region_leq(const RiskRegion& a, const RiskRegion& b, double tol = 0.0) {
  if (a.dimension() != b.dimension()) throw ContractError("region_leq: dimension mismatch");
  const auto ma = a.min_corner(), mb = b.min_corner();
  for (std::size_t i = 0; i < ma.size(); ++i)
    if (mb[i] < ma[i] - tol) return false;
  return true;
}

/// How far B sticks out below A + R^n_+ (0 when region_leq holds).
inline double region_leq_violation(const RiskRegion& a, const RiskRegion& b) {
  const auto ma = a.min_corner(), mb = b.min_corner();
  double worst = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) worst = std::max(worst, ma[i] - mb[i]);
  return worst;
}

namespace detail {

// Feasible t >= 0 along a ray, built from linear constraints coef * t >= rhs.
struct RayInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool empty = false;

  void at_least(double coef, double rhs) {
    if (coef > 0.0)
      lo = std::max(lo, rhs / coef);
    else if (coef < 0.0)
      hi = std::min(hi, rhs / coef);
    else if (rhs > 0.0)
      empty = true;
  }
  void at_most(double coef, double rhs) { at_least(-coef, -rhs); }
  bool feasible() const { return !empty && lo <= hi; }
};

}  // namespace detail

/// Componentwise infimum of A intersected with the ray {t u : t >= 0}; absent if they do not meet.
inline std::optional<std::vector<double>> line_infimum(const RiskRegion& a, std::span<const double> u) {
  if (u.size() != a.dimension()) throw ContractError("line_infimum: direction dimension mismatch");
  bool nonzero = false;
  for (double v : u) {
    if (v < 0.0 || !std::isfinite(v)) throw ContractError("line_infimum: direction must lie in the positive orthant");
    nonzero = nonzero || v > 0.0;
  }
  if (!nonzero) throw ContractError("line_infimum: direction must be nonzero");

  detail::RayInterval ray;
  const auto& shape = a.shape();
  if (const auto* ub = std::get_if<UpperBox>(&shape)) {
    for (std::size_t i = 0; i < u.size(); ++i) ray.at_least(u[i], ub->lowers[i]);
  } else if (const auto* b = std::get_if<Box>(&shape)) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      ray.at_least(u[i], b->lowers[i]);
      ray.at_most(u[i], b->uppers[i]);
    }
  } else {
    const auto& t = std::get<Triangle>(shape);
    ray.at_least(u[0], t.v_sum);
    ray.at_most(u[0], t.w);
    ray.at_least(u[1], t.v_joint);
    ray.at_most(u[1], t.w);
    if (!t.degenerate()) {
      const double s = t.slope();
      ray.at_most(u[1] - s * u[0], t.v_joint - s * t.v_sum);
    }
  }
  // A ray through a single vertex can come out with lo a few ulps above hi.
  if (!ray.empty && ray.lo > ray.hi && ray.lo - ray.hi <= 1e-12 * std::max(1.0, ray.hi)) ray.lo = ray.hi;
  if (!ray.feasible()) return std::nullopt;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = ray.lo * u[i];
  return out;
}

struct ParetoExtremes {
  std::optional<std::vector<double>> min;
  std::optional<std::vector<double>> max;
};

inline ParetoExtremes pareto_extremes(const RiskRegion& a) { return {a.min_corner(), a.max_corner()}; }

/// R(alpha): the upper box of criterion values, or the V@R triangle.
inline RiskRegion region_of(const RiskModel& model, const Strategy& alpha) {
  const auto values = model.evaluate(alpha);
  if (model.is_var_triangle()) return RiskRegion::triangle(values[0], values[1], model.weighted_worst(alpha));
  return RiskRegion::upper_box(values);
}

using Position = std::vector<PiecewisePolynomial>;

/// R(Y_1..Y_d) for an arbitrary position, through the derived evaluators.
inline RiskRegion region_of_position(const RiskModel& model, std::span<const PiecewisePolynomial> position) {
  const auto values = model.evaluate_position(position);
  if (model.is_var_triangle())
    return RiskRegion::triangle(values[0], values[1], RiskModel::position_worst(position));
  return RiskRegion::upper_box(values);
}

/// (alpha_1 X_1, ..., alpha_d X_d)
inline Position scaled_basket(const Strategy& alpha, std::span<const PiecewisePolynomial> assets) {
  if (alpha.size() != assets.size()) throw ContractError("scaled_basket: size mismatch");
  Position out;
  for (std::size_t i = 0; i < assets.size(); ++i) out.push_back(alpha[i] * assets[i]);
  return out;
}

namespace detail {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline Position mix(double t, const Position& y, double s, const Position& z) {
  Position out;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const std::array<double, 2> w{t, s};
    const std::array<const PiecewisePolynomial*, 2> terms{&y[j], &z[j]};
    out.push_back(PiecewisePolynomial::axpy(w, terms));
  }
  return out;
}

}  // namespace detail

/// Sampled check of the set-valued axioms on positions (at least two).
/// Consecutive positions are paired for the two-argument axioms.
inline AuditReport set_axiom_audit(const RiskModel& model, std::span<const Position> positions,
                                   double tol = kAuditTolerance) {
  using riskgp::detail::fmt;
  if (positions.size() < 2) throw ContractError("set_axiom_audit needs at least two positions");
  const std::size_t d = model.dimension();
  for (const auto& y : positions)
    if (y.size() != d) throw ContractError("set_axiom_audit: position dimension mismatch");

  std::vector<RiskRegion> base;
  for (const auto& y : positions) base.push_back(region_of_position(model, y));
  auto name = [](std::size_t k) { return "position[" + std::to_string(k) + "]"; };
  auto next = [&](std::size_t k) { return (k + 1) % positions.size(); };

  AuditReport report{"set-valued", tol, {}};

  {
    FindingBuilder f("closed-proper", tol);
    const Position zero(d, PiecewisePolynomial::constant(0.0));
    const auto r0 = region_of_position(model, zero);
    const std::vector<double> origin(r0.dimension(), 0.0);
    double gap = 0.0;
    for (double v : r0.min_corner()) gap = std::max(gap, v);
    if (!r0.contains(origin, tol)) gap = std::max(gap, tol * 2.0);
    f.record(gap, [&] { return "origin not in R(0): min corner " + fmt(r0.min_corner()[0]); });
    report.findings.push_back(f.finish());
  }

  {
    FindingBuilder f("monotonicity", tol);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const auto& y = positions[k];
      for (std::size_t j = 0; j < d; ++j) {
        const auto& donor = positions[next(k)][j];
        std::vector<PiecewisePolynomial> bumps{donor + (-ess_inf(donor)), PiecewisePolynomial::constant(0.25)};
        for (const auto& bump : bumps) {
          Position z = y;
          z[j] = z[j] + bump;
          const auto rz = region_of_position(model, z);
          const double v = region_leq_violation(rz, base[k]);
          f.record(v, [&] { return name(k) + " raised in component " + std::to_string(j) + ": R(Z) not <= R(Y)"; });
        }
      }
    }
    report.findings.push_back(f.finish());
  }

  {
    FindingBuilder f("convexity", tol);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const std::size_t l = next(k);
      const auto m1 = base[k].min_corner(), m2 = base[l].min_corner();
      for (double t : {0.25, 0.5, 0.75}) {
        const auto rm = region_of_position(model, detail::mix(t, positions[k], 1.0 - t, positions[l]));
        const auto mm = rm.min_corner();
        double v = 0.0;
        for (std::size_t i = 0; i < mm.size(); ++i) v = std::max(v, mm[i] - (t * m1[i] + (1.0 - t) * m2[i]));
        f.record(v, [&] {
          return "t=" + fmt(t) + ", " + name(k) + ", " + name(l) + ": mixed min corner exceeds combination by " +
                 fmt(v);
        });
      }
    }
    report.findings.push_back(f.finish());
  }

  {
    FindingBuilder f("cash-additivity", tol);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        for (double x : {-0.5, 0.3, 1.0}) {
          Position z = positions[k];
          z[j] = z[j] + x;
          const auto rz = region_of_position(model, z);
          const auto expected = base[k].translated(-x);
          const double v = detail::max_abs_diff(rz.parameters(), expected.parameters());
          f.record(v, [&] {
            return name(k) + " + " + fmt(x) + " in component " + std::to_string(j) + ": parameter gap " + fmt(v);
          });
        }
      }
    }
    report.findings.push_back(f.finish());
  }

  {
    FindingBuilder f("sublinearity", tol);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const std::size_t l = next(k);
      const auto rs = region_of_position(model, detail::mix(1.0, positions[k], 1.0, positions[l]));
      const auto ms = rs.min_corner(), m1 = base[k].min_corner(), m2 = base[l].min_corner();
      double v = 0.0;
      for (std::size_t i = 0; i < ms.size(); ++i) v = std::max(v, ms[i] - (m1[i] + m2[i]));
      f.record(v, [&] { return name(k) + " + " + name(l) + ": sum min corner exceeds by " + fmt(v); });
    }
    report.findings.push_back(f.finish());
  }

  {
    FindingBuilder f("positive-homogeneity", tol);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      for (double t : {0.5, 2.0, 3.0}) {
        Position z;
        for (const auto& y : positions[k]) z.push_back(t * y);
        const auto rz = region_of_position(model, z);
        const double v = detail::max_abs_diff(rz.parameters(), base[k].scaled(t).parameters());
        f.record(v, [&] { return fmt(t) + " * " + name(k) + ": parameter gap " + fmt(v); });
      }
    }
    report.findings.push_back(f.finish());
  }
  return report;
}

}  // namespace riskgp
