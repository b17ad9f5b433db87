#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration with an absolute
// tolerance and a subinterval budget.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "riskgp/errors.hpp"

namespace riskgp::quad {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxIntervals = 100000;

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kron += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {lo, hi, kron * half, std::abs((kron - gauss) * half)};
}

}  // namespace detail

/// Integrate f over [lo, hi], always splitting at the supplied breakpoints.
/// Throws NumericError (carrying the estimate) if the tolerance is not met
/// within the subinterval budget.
template <class F>
Result integrate(const F& f, double lo, double hi, std::span<const double> breakpoints = {},
                 double abs_tol = kDefaultTolerance, std::size_t max_intervals = kDefaultMaxIntervals) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Segment> heap;
  double total_error = 0.0;
  std::size_t evals = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto s = detail::kronrod15(f, cuts[k], cuts[k + 1]);
    evals += 15;
    total_error += s.error;
    heap.push(s);
  }
  while (total_error > abs_tol && heap.size() < max_intervals) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // cannot split further
    heap.pop();
    const auto left = detail::kronrod15(f, worst.lo, mid);
    const auto right = detail::kronrod15(f, mid, worst.hi);
    evals += 30;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // recompute from scratch: the running error total drifts
  CompensatedSum value, error;
  Result r;
  r.intervals = heap.size();
  r.evaluations = evals;
  while (!heap.empty()) {
    value.add(heap.top().value);
    error.add(heap.top().error);
    heap.pop();
  }
  r.value = value.value();
  r.error = error.value();
  if (!(r.error <= abs_tol))
    throw NumericError("quadrature tolerance " + std::to_string(abs_tol) + " not reached (error " +
                           std::to_string(r.error) + ")",
                       r.value, r.error);
  return r;
}

}  // namespace riskgp::quad
