#pragma once

// Optimization over the simplex: exhaustive grid seeding, projected pattern
// search refinement, Pareto-front enumeration and grid-scale optimality tests.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "riskgp/errors.hpp"
#include "riskgp/gp.hpp"
#include "riskgp/payoff.hpp"
#include "riskgp/region.hpp"
#include "riskgp/risk.hpp"

namespace riskgp {

inline constexpr double kTieTolerance = 1e-12;

struct Settings {
  int grid = 200;
  int refine_iters = 500;
  double tol = 1e-9;
  int threads = 0;  // 0 = auto
};

/// Worker count: RISKGP_THREADS wins over the settings value; 0 means hardware concurrency.
inline unsigned resolve_threads(int requested) {
  if (const char* env = std::getenv("RISKGP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// C(k + d - 1, d - 1)
inline std::size_t grid_size(std::size_t d, std::size_t k) {
  if (d == 0) throw ContractError("simplex dimension must be >= 1");
  std::size_t r = d - 1, n = k + d - 1, out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

/// All points (m_1/k, ..., m_d/k) with sum m = k, first coordinate largest first:
/// (1,0,0), (k-1,1,0)/k, ... , (0,0,1).
inline std::vector<Strategy> simplex_grid(std::size_t d, std::size_t k) {
  if (d == 0) throw ContractError("simplex dimension must be >= 1");
  if (k == 0) throw ContractError("grid resolution must be >= 1");
  std::vector<Strategy> out;
  out.reserve(grid_size(d, k));
  std::vector<std::size_t> m(d, 0);
  std::vector<double> w(d);
  const double kk = static_cast<double>(k);
  // Recursive composition enumeration written iteratively over the first d-1 coordinates.
  auto emit = [&] {
    for (std::size_t i = 0; i < d; ++i) w[i] = static_cast<double>(m[i]) / kk;
    out.emplace_back(w);
  };
  auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == d) {
      m[pos] = left;
      emit();
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      m[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  fill(fill, 0, k);
  return out;
}

namespace detail {

/// Runs f(i) for i in [0, n) over `threads` workers with static contiguous ranges.
/// The first exception thrown by any worker is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(1, n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::atomic<bool> stop{false};
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi && !stop.load(std::memory_order_relaxed); ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// (objective, alpha) comparison with the fixed tie-break: objectives within
/// kTieTolerance tie, and ties go to the lexicographically smaller alpha.
inline bool preferred(Sense sense, double obj, const Strategy& a, double best_obj, const Strategy& best) {
  const bool both_inf = std::isinf(obj) && std::isinf(best_obj) && (obj > 0) == (best_obj > 0);
  if (!both_inf && std::abs(obj - best_obj) > kTieTolerance) return better(sense, obj, best_obj);
  return a < best;
}

inline std::vector<Evaluation> evaluate_all(const GoalProgram& gp, const std::vector<Strategy>& grid,
                                            unsigned threads) {
  std::vector<Evaluation> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { out[i] = evaluate(gp, grid[i]); });
  return out;
}

inline std::size_t argbest(Sense sense, const std::vector<Strategy>& grid, const std::vector<Evaluation>& evals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (preferred(sense, evals[i].objective, grid[i], evals[best].objective, grid[best])) best = i;
  return best;
}

}  // namespace detail

struct SolveTrace {
  int grid = 0;
  int refine_iterations = 0;
  std::size_t evaluations = 0;
  std::string method;  // "grid" or "grid+pattern-search"
};

struct SolveReport {
  Strategy best_alpha{1.0};
  std::vector<double> achievements;
  std::vector<DeviationPair> deviations;
  double objective = 0.0;
  std::optional<RiskRegion> region;  // absent when the values do not form a valid region (printed V@R table)
  SolveTrace trace;
  bool feasible = false;
  double grid_objective = 0.0;  // objective of the best grid point before refinement
};

namespace detail {

inline SolveReport make_report(const GoalProgram& gp, const Strategy& alpha, Evaluation e) {
  SolveReport r;
  r.best_alpha = alpha;
  r.achievements = std::move(e.achievements);
  r.deviations = std::move(e.deviations);
  r.objective = e.objective;
  r.feasible = e.feasible;
  try {
    r.region = region_of(gp.model(), alpha);
  } catch (const ContractError&) {
    r.region.reset();
  }
  return r;
}

}  // namespace detail

/// Projected pattern search from `start` along e_i - e_j. A move is kept only if it
/// improves the objective by more than `tol`; otherwise the step halves.
inline SolveReport refine(const GoalProgram& gp, const Strategy& start, double h, int max_iters, double tol,
                          std::size_t* evaluations = nullptr) {
  const Sense sense = gp.sense();
  const std::size_t d = start.size();
  Strategy x = start;
  Evaluation fx = evaluate(gp, x);
  std::size_t evals = 1;
  int it = 0;
  const double h_min = 1e-12;
  while (it < max_iters && h >= h_min && d > 1) {
    ++it;
    bool moved = false;
    for (std::size_t i = 0; i < d && !moved; ++i) {
      for (std::size_t j = 0; j < d && !moved; ++j) {
        if (i == j || x[j] <= 0.0) continue;
        std::vector<double> y(x.weights().begin(), x.weights().end());
        const double step = std::min(h, x[j]);
        y[i] += step;
        y[j] -= step;
        const Strategy cand = Strategy::projected(std::move(y));
        Evaluation fc = evaluate(gp, cand);
        ++evals;
        const double gain = sense == Sense::maximize ? fc.objective - fx.objective : fx.objective - fc.objective;
        if (fc.feasible && gain > tol) {
          x = cand;
          fx = std::move(fc);
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  if (evaluations) *evaluations += evals;
  auto r = detail::make_report(gp, x, std::move(fx));
  r.trace.refine_iterations = it;
  return r;
}

/// Exhaustive evaluation over simplex_grid(d, k), no refinement.
/// When `grid_out` is given it receives every grid evaluation in simplex_grid order.
inline SolveReport brute_force(const GoalProgram& gp, int k, int threads = 0,
                               std::vector<Evaluation>* grid_out = nullptr) {
  if (k < 1) throw ContractError("grid resolution must be >= 1");
  const auto grid = simplex_grid(gp.model().dimension(), static_cast<std::size_t>(k));
  auto evals = detail::evaluate_all(gp, grid, resolve_threads(threads));
  const std::size_t b = detail::argbest(gp.sense(), grid, evals);
  auto r = detail::make_report(gp, grid[b], evals[b]);
  if (grid_out) *grid_out = std::move(evals);
  r.grid_objective = r.objective;
  r.trace = {k, 0, grid.size(), "grid"};
  return r;
}

/// Grid seeding followed by pattern-search refinement of the best grid point.
inline SolveReport solve(const GoalProgram& gp, const Settings& settings = {},
                         std::vector<Evaluation>* grid_out = nullptr) {
  if (settings.grid < 1) throw ContractError("solver grid must be >= 1");
  if (settings.refine_iters < 0) throw ContractError("solver refine_iters must be >= 0");
  if (!(settings.tol >= 0.0)) throw ContractError("solver tol must be >= 0");
  auto seed = brute_force(gp, settings.grid, settings.threads, grid_out);
  if (!seed.feasible) return seed;
  std::size_t evals = seed.trace.evaluations;
  const double grid_objective = seed.objective;
  auto r = refine(gp, seed.best_alpha, 1.0 / settings.grid, settings.refine_iters, settings.tol, &evals);
  // Refinement accepts strict improvements only, so the seed is kept on a tie.
  if (!better(gp.sense(), r.objective, grid_objective)) {
    const int iters = r.trace.refine_iterations;
    r = std::move(seed);
    r.trace.refine_iterations = iters;
  }
  r.grid_objective = grid_objective;
  r.trace.grid = settings.grid;
  r.trace.evaluations = evals;
  r.trace.method = "grid+pattern-search";
  return r;
}

struct ScalarMinimum {
  Strategy alpha{1.0};
  double value = 0.0;
  double grid_value = 0.0;
  Strategy grid_alpha{1.0};
};

/// Minimizes f over the simplex: grid of resolution k, then the same pattern
/// search as `refine`. Grid ties go to the lexicographically smallest alpha.
template <class F>
ScalarMinimum minimize_on_simplex(F&& f, std::size_t d, const Settings& settings = {}) {
  if (settings.grid < 1) throw ContractError("grid resolution must be >= 1");
  const auto grid = simplex_grid(d, static_cast<std::size_t>(settings.grid));
  std::vector<double> vals(grid.size());
  detail::parallel_for(grid.size(), resolve_threads(settings.threads),
                       [&](std::size_t i) { vals[i] = f(grid[i]); });
  std::size_t b = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (detail::preferred(Sense::minimize, vals[i], grid[i], vals[b], grid[b])) b = i;

  Strategy x = grid[b];
  double fx = vals[b];
  double h = 1.0 / settings.grid;
  for (int it = 0; it < settings.refine_iters && h >= 1e-12 && d > 1; ++it) {
    bool moved = false;
    for (std::size_t i = 0; i < d && !moved; ++i) {
      for (std::size_t j = 0; j < d && !moved; ++j) {
        if (i == j || x[j] <= 0.0) continue;
        std::vector<double> y(x.weights().begin(), x.weights().end());
        const double step = std::min(h, x[j]);
        y[i] += step;
        y[j] -= step;
        Strategy cand = Strategy::projected(std::move(y));
        const double fc = f(cand);
        if (fx - fc > settings.tol) {
          x = std::move(cand);
          fx = fc;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  return {x, fx, vals[b], grid[b]};
}

struct FrontPoint {
  Strategy alpha;
  std::vector<double> values;
};

/// a <= b componentwise with at least one strict inequality.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    strict = strict || a[i] < b[i];
  }
  return strict;
}

/// Achievement vectors of every grid point, in grid order.
inline std::vector<std::vector<double>> grid_values(const RiskModel& model, const std::vector<Strategy>& grid,
                                                    int threads = 0) {
  std::vector<std::vector<double>> out(grid.size());
  detail::parallel_for(grid.size(), resolve_threads(threads),
                       [&](std::size_t i) { out[i] = model.evaluate(grid[i]); });
  return out;
}

/// Nondominated subset of (grid[i], values[i]), sorted by alpha.
inline std::vector<FrontPoint> pareto_filter(const std::vector<Strategy>& grid,
                                             const std::vector<std::vector<double>>& values) {
  if (grid.size() != values.size()) throw ContractError("pareto_filter: size mismatch");
  // Sorting by values lexicographically means a dominator always precedes what it dominates.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool dominated = false;
    for (std::size_t f : kept)
      if (dominates(values[f], values[idx])) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(idx);
  }
  std::vector<FrontPoint> out;
  for (std::size_t idx : kept) out.push_back({grid[idx], values[idx]});
  std::sort(out.begin(), out.end(), [](const FrontPoint& a, const FrontPoint& b) { return a.alpha < b.alpha; });
  return out;
}

/// Nondominated grid points of the vector problem, sorted by alpha.
inline std::vector<FrontPoint> pareto_front(const RiskModel& model, int k, int threads = 0) {
  if (k < 1) throw ContractError("grid resolution must be >= 1");
  const auto grid = simplex_grid(model.dimension(), static_cast<std::size_t>(k));
  return pareto_filter(grid, grid_values(model, grid, threads));
}

struct NondominanceReport {
  bool nondominated = true;
  std::vector<double> values;                  // R(alpha)
  std::optional<FrontPoint> witness;           // a dominating grid point
  std::size_t checked = 0;
};

/// Does any grid point dominate R(alpha)? Exact comparisons; the witness is the
/// first dominating point in grid order.
inline NondominanceReport nondominance_test(const RiskModel& model, const Strategy& alpha, int k, int threads = 0) {
  if (k < 1) throw ContractError("grid resolution must be >= 1");
  NondominanceReport r;
  r.values = model.evaluate(alpha);
  const auto grid = simplex_grid(model.dimension(), static_cast<std::size_t>(k));
  const auto values = grid_values(model, grid, threads);
  r.checked = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (dominates(values[i], r.values)) {
      r.nondominated = false;
      r.witness = FrontPoint{grid[i], values[i]};
      break;
    }
  }
  return r;
}

struct TransferReport {
  bool holds = true;
  std::optional<FrontPoint> witness;  // grid beta whose region reaches into R(alpha) - (R^n_+ \ {0})
  std::size_t checked = 0;
};

/// Set-valued optimality at grid scale: no region_of(model, beta) meets
/// v(alpha) - (R^n_+ \ {0}), where v(alpha) are the criterion values at alpha.
/// Regions contain their min corner and sit inside min + R^n_+, so a region meets
/// that set exactly when its min corner is <= v(alpha) and differs from it.
inline TransferReport transfer_check(const RiskModel& model, const Strategy& alpha, int k, int threads = 0) {
  if (k < 1) throw ContractError("grid resolution must be >= 1");
  TransferReport r;
  const auto target = model.evaluate(alpha);
  const auto grid = simplex_grid(model.dimension(), static_cast<std::size_t>(k));
  std::vector<std::vector<double>> corners(grid.size());
  detail::parallel_for(grid.size(), resolve_threads(threads), [&](std::size_t i) {
    try {
      corners[i] = region_of(model, grid[i]).min_corner();
    } catch (const ContractError&) {
      corners[i] = model.evaluate(grid[i]);  // printed values that do not form a triangle
    }
  });
  r.checked = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (dominates(corners[i], target)) {
      r.holds = false;
      r.witness = FrontPoint{grid[i], corners[i]};
      break;
    }
  }
  return r;
}

}  // namespace riskgp
