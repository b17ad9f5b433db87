#pragma once

// JSON run configuration, report serialization and CSV output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "riskgp/errors.hpp"
#include "riskgp/fixtures.hpp"
#include "riskgp/gp.hpp"
#include "riskgp/region.hpp"
#include "riskgp/risk.hpp"
#include "riskgp/solve.hpp"

namespace riskgp {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

struct RunConfig {
  std::optional<std::string> fixture;
  std::vector<Criterion> criteria;
  std::vector<PiecewisePolynomial> assets;
  EvalMode mode = EvalMode::oracle;
  std::vector<double> goals;
  std::vector<double> weights_plus;
  std::vector<double> weights_minus;
  SatisfactionSpec satisfaction;
  ObjectiveKind objective = ObjectiveKind::satisfaction_gp;
  std::optional<Sense> sense;
  Settings solver;
  std::string output_dir = ".";

  RiskModel model() const { return RiskModel(criteria, assets, mode); }
  GoalProgram program() const {
    return GoalProgram(model(), goals, weights_plus, weights_minus, satisfaction, objective, sense);
  }
};

/// Configuration of a built-in fixture with its published parameters.
inline RunConfig fixture_config(const Fixture& f) {
  RunConfig c;
  c.fixture = f.id;
  const auto gp = f.program();
  c.criteria = f.criteria;
  c.assets = f.assets;
  c.mode = f.default_mode;
  c.goals = gp.goals();
  c.weights_plus = gp.weights_plus();
  c.weights_minus = gp.weights_minus();
  c.satisfaction = gp.satisfaction();
  c.objective = gp.kind();
  c.sense = gp.sense();
  return c;
}

namespace detail {

// A JSON value plus the dotted path that reached it, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_ + ": " + what); }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) Node(it.value(), child_path(it.key())).fail("unknown key");
  }

  bool has(const char* key) const { return j_.contains(key); }
  Node at(const char* key) const {
    if (!j_.contains(key)) Node(j_, child_path(key)).fail("missing required key");
    return Node(j_.at(key), child_path(key));
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
    return out;
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

}  // namespace detail

// ---- payoffs and criteria ---------------------------------------------------

inline json payoff_to_json(const PiecewisePolynomial& p) {
  json pieces = json::array();
  for (const auto& s : p.to_specs()) pieces.push_back({{"end", s.end}, {"coeffs", s.coeffs}});
  return pieces;
}

/// Either a coefficient array (one polynomial on [0,1]) or an array of
/// {"end": x, "coeffs": [...]} pieces.
inline PiecewisePolynomial payoff_from_json(const detail::Node& n) {
  auto coeffs = [](const detail::Node& c) {
    const auto v = c.numbers();
    if (v.empty() || v.size() > kMaxDegree + 1) c.fail("expected 1 to 5 coefficients");
    return v;
  };
  if (n.size() == 0) n.fail("payoff must not be empty");
  try {
    if (n.raw()[0].is_number()) {
      const std::vector<PieceSpec> one{{1.0, coeffs(n)}};
      return PiecewisePolynomial::from_pieces(one);
    }
    std::vector<PieceSpec> specs;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto piece = n.at(i);
      piece.require_object({"end", "coeffs"});
      specs.push_back({piece.at("end").number(), coeffs(piece.at("coeffs"))});
    }
    return PiecewisePolynomial::from_pieces(specs);
  } catch (const ContractError& e) {
    n.fail(e.what());
  }
}

inline json criterion_to_json(const Criterion& c) {
  json j{{"kind", std::string(to_string(c.kind))}};
  if (c.uses_scenario()) j["i"] = c.scenario;
  if (c.kind == CriterionKind::entropic) j["lambda"] = c.risk_aversion;
  if (c.uses_level()) j["level"] = c.level;
  if (c.mode) j["mode"] = std::string(to_string(*c.mode));
  return j;
}

/// One descriptor, or one per entry of `scenarios` when a scenario-indexed
/// criterion omits "i" (then "lambda" may be a matching array).
inline std::vector<Criterion> criteria_from_json(const detail::Node& n, const std::vector<double>& scenarios) {
  n.require_object({"kind", "i", "lambda", "level", "mode"});
  const auto kind_node = n.at("kind");
  const auto kind = parse_criterion_kind(kind_node.string());
  if (!kind) kind_node.fail("unknown criterion kind '" + kind_node.string() + "'");
  Criterion base;
  base.kind = *kind;
  if (base.uses_level()) base.level = n.at("level").number();
  if (n.has("mode")) {
    const auto m = n.at("mode");
    const auto mode = parse_eval_mode(m.string());
    if (!mode) m.fail("expected \"oracle\" or \"paper\"");
    base.mode = mode;
  }
  if (!base.uses_scenario()) return {base};

  std::vector<double> indices;
  if (n.has("i")) {
    indices.push_back(n.at("i").number());
  } else {
    if (scenarios.empty()) n.at("i").fail("missing required key (and model.scenarios is not given)");
    indices = scenarios;
  }
  std::vector<double> lambdas(indices.size(), 0.0);
  if (base.kind == CriterionKind::entropic) {
    const auto l = n.at("lambda");
    if (l.raw().is_array()) {
      lambdas = l.numbers();
      if (lambdas.size() != indices.size()) l.fail("expected one value per scenario");
    } else {
      std::fill(lambdas.begin(), lambdas.end(), l.number());
    }
  }
  std::vector<Criterion> out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    Criterion c = base;
    c.scenario = indices[k];
    c.risk_aversion = lambdas[k];
    out.push_back(c);
  }
  return out;
}

inline json satisfaction_to_json(const SatisfactionSpec& s) {
  json j{{"kind", std::string(to_string(s.kind))}, {"xi_i", s.xi_i}, {"xi_d", s.xi_d}, {"eps", s.eps}};
  j["xi_v"] = std::isfinite(s.xi_v) ? json(s.xi_v) : json(nullptr);
  return j;
}

inline SatisfactionSpec satisfaction_from_json(const detail::Node& n) {
  n.require_object({"kind", "xi_i", "xi_d", "xi_v", "eps"});
  SatisfactionSpec s;
  if (n.has("kind")) {
    const auto k = n.at("kind");
    const auto kind = parse_satisfaction_kind(k.string());
    if (!kind) k.fail("expected \"linear-ramp\" or \"paper\"");
    s.kind = *kind;
  }
  if (n.has("xi_i")) s.xi_i = n.at("xi_i").number();
  if (n.has("xi_d")) s.xi_d = n.at("xi_d").number();
  if (n.has("xi_v") && !n.at("xi_v").raw().is_null()) s.xi_v = n.at("xi_v").number();
  if (n.has("eps")) s.eps = n.at("eps").number();
  try {
    s.validate();
  } catch (const ContractError& e) {
    n.fail(e.what());
  }
  return s;
}

inline json settings_to_json(const Settings& s) {
  json j{{"grid", s.grid}, {"refine_iters", s.refine_iters}, {"tol", s.tol}};
  j["threads"] = s.threads > 0 ? json(s.threads) : json("auto");
  return j;
}

inline Settings settings_from_json(const detail::Node& n) {
  n.require_object({"grid", "refine_iters", "tol", "threads"});
  Settings s;
  if (n.has("grid")) {
    s.grid = n.at("grid").integer();
    if (s.grid < 1) n.at("grid").fail("must be >= 1");
  }
  if (n.has("refine_iters")) {
    s.refine_iters = n.at("refine_iters").integer();
    if (s.refine_iters < 0) n.at("refine_iters").fail("must be >= 0");
  }
  if (n.has("tol")) {
    s.tol = n.at("tol").number();
    if (s.tol < 0.0) n.at("tol").fail("must be >= 0");
  }
  if (n.has("threads")) {
    const auto t = n.at("threads");
    if (t.raw().is_string()) {
      if (t.string() != "auto") t.fail("expected \"auto\" or a positive integer");
      s.threads = 0;
    } else {
      s.threads = t.integer();
      if (s.threads < 1) t.fail("expected \"auto\" or a positive integer");
    }
  }
  return s;
}

// ---- run configuration ------------------------------------------------------

/// Parses a configuration document. Exactly one of "fixture" / "model" must be
/// present; with a fixture, the remaining keys override its defaults.
inline RunConfig config_from_json(const json& doc) {
  const detail::Node root(doc, "");
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object at top level");
  root.require_object({"fixture", "model", "goals", "weights_plus", "weights_minus", "satisfaction", "objective",
                       "sense", "solver", "output"});
  const bool has_fixture = root.has("fixture"), has_model = root.has("model");
  if (has_fixture == has_model) throw ConfigError("fixture/model: exactly one of the two keys must be present");

  RunConfig c;
  if (has_fixture) {
    const auto id = root.at("fixture");
    const auto f = find_fixture(id.string());
    if (!f) id.fail("unknown fixture '" + id.string() + "'");
    c = fixture_config(*f);
  } else {
    const auto m = root.at("model");
    m.require_object({"assets", "scenarios", "criteria", "mode"});
    const auto assets = m.at("assets");
    if (assets.raw().is_string()) {
      const std::string b = assets.string();
      if (b == "linear")
        c.assets = baskets::linear();
      else if (b == "entropic")
        c.assets = baskets::entropic();
      else if (b == "var-triangle")
        c.assets = baskets::var_triangle();
      else
        assets.fail("unknown basket '" + b + "'");
    } else {
      for (std::size_t i = 0; i < assets.size(); ++i) c.assets.push_back(payoff_from_json(assets.at(i)));
    }
    std::vector<double> scenarios;
    if (m.has("scenarios")) scenarios = m.at("scenarios").numbers();
    const auto crit = m.at("criteria");
    for (std::size_t i = 0; i < crit.size(); ++i)
      for (auto& k : criteria_from_json(crit.at(i), scenarios)) c.criteria.push_back(k);
    if (m.has("mode")) {
      const auto mode = parse_eval_mode(m.at("mode").string());
      if (!mode) m.at("mode").fail("expected \"oracle\" or \"paper\"");
      c.mode = *mode;
    }
    const std::size_t n = c.criteria.size();
    c.weights_plus.assign(n, 1.0);
    c.weights_minus.assign(n, 1.0);
    c.objective = ObjectiveKind::weighted_gp;
  }

  if (root.has("goals")) c.goals = root.at("goals").numbers();
  if (root.has("weights_plus")) c.weights_plus = root.at("weights_plus").numbers();
  if (root.has("weights_minus")) c.weights_minus = root.at("weights_minus").numbers();
  if (root.has("satisfaction")) c.satisfaction = satisfaction_from_json(root.at("satisfaction"));
  if (root.has("objective")) {
    const auto o = root.at("objective");
    const auto kind = parse_objective_kind(o.string());
    if (!kind) o.fail("expected plain-gp, weighted-gp or satisfaction-gp");
    c.objective = *kind;
    if (!root.has("sense")) c.sense.reset();
  }
  if (root.has("sense")) {
    const auto s = root.at("sense");
    const auto sense = parse_sense(s.string());
    if (!sense) s.fail("expected \"min\" or \"max\"");
    c.sense = sense;
  }
  if (root.has("solver")) c.solver = settings_from_json(root.at("solver"));
  if (root.has("output")) {
    const auto o = root.at("output");
    o.require_object({"directory"});
    if (o.has("directory")) c.output_dir = o.at("directory").string();
  }
  if (!has_fixture && !root.has("goals")) throw ConfigError("goals: missing required key");

  // Surface model/program contract violations as configuration errors.
  try {
    (void)c.program();
  } catch (const ContractError& e) {
    throw ConfigError(std::string(has_fixture ? "fixture" : "model") + ": " + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return config_from_json(doc);
}

/// Fully expanded configuration (inline model even for fixtures).
inline json config_to_json(const RunConfig& c) {
  json j;
  if (c.fixture) j["fixture_id"] = *c.fixture;
  json assets = json::array();
  for (const auto& a : c.assets) assets.push_back(payoff_to_json(a));
  json crit = json::array();
  for (const auto& k : c.criteria) crit.push_back(criterion_to_json(k));
  j["model"] = {{"assets", assets}, {"criteria", crit}, {"mode", std::string(to_string(c.mode))}};
  j["goals"] = c.goals;
  j["weights_plus"] = c.weights_plus;
  j["weights_minus"] = c.weights_minus;
  j["satisfaction"] = satisfaction_to_json(c.satisfaction);
  j["objective"] = std::string(to_string(c.objective));
  j["sense"] = std::string(to_string(c.program().sense()));
  j["solver"] = settings_to_json(c.solver);
  return j;
}

/// Inverse of config_to_json.
inline RunConfig expanded_config_from_json(const json& j) {
  json doc = j;
  std::optional<std::string> id;
  if (doc.contains("fixture_id")) {
    id = doc["fixture_id"].get<std::string>();
    doc.erase("fixture_id");
  }
  auto c = config_from_json(doc);
  c.fixture = id;
  return c;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---- regions and reports ----------------------------------------------------

inline json region_to_json(const RiskRegion& r) {
  json j{{"variant", std::string(r.variant_name())}};
  if (const auto* u = std::get_if<UpperBox>(&r.shape())) {
    j["lowers"] = u->lowers;
  } else if (const auto* b = std::get_if<Box>(&r.shape())) {
    j["lowers"] = b->lowers;
    j["uppers"] = b->uppers;
  } else {
    const auto& t = std::get<Triangle>(r.shape());
    j["v_sum"] = t.v_sum;
    j["v_joint"] = t.v_joint;
    j["w"] = t.w;
  }
  const auto ex = pareto_extremes(r);
  j["pareto_min"] = *ex.min;
  j["pareto_max"] = ex.max ? json(*ex.max) : json(nullptr);
  return j;
}

inline RiskRegion region_from_json(const json& j) {
  const auto v = j.at("variant").get<std::string>();
  if (v == "upper_box") return RiskRegion::upper_box(j.at("lowers").get<std::vector<double>>());
  if (v == "box")
    return RiskRegion::box(j.at("lowers").get<std::vector<double>>(), j.at("uppers").get<std::vector<double>>());
  if (v == "triangle")
    return RiskRegion::triangle(j.at("v_sum").get<double>(), j.at("v_joint").get<double>(), j.at("w").get<double>());
  throw ConfigError("region.variant: unknown variant '" + v + "'");
}

namespace detail {
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json solve_report_to_json(const SolveReport& r) {
  json dev = json::array();
  for (const auto& d : r.deviations) dev.push_back({{"plus", d.plus}, {"minus", d.minus}});
  return {
      {"best_alpha", std::vector<double>(r.best_alpha.weights().begin(), r.best_alpha.weights().end())},
      {"achievements", r.achievements},
      {"deviations", dev},
      {"objective", detail::finite_or_null(r.objective)},
      {"grid_objective", detail::finite_or_null(r.grid_objective)},
      {"feasible", r.feasible},
      {"region", r.region ? region_to_json(*r.region) : json(nullptr)},
      {"trace",
       {{"grid", r.trace.grid},
        {"refine_iterations", r.trace.refine_iterations},
        {"evaluations", r.trace.evaluations},
        {"method", r.trace.method}}},
  };
}

/// `sense` supplies the sentinel for objectives stored as null.
inline SolveReport solve_report_from_json(const json& j, Sense sense) {
  auto num = [&](const json& v) { return v.is_null() ? worst_value(sense) : v.get<double>(); };
  SolveReport r;
  r.best_alpha = Strategy(j.at("best_alpha").get<std::vector<double>>());
  r.achievements = j.at("achievements").get<std::vector<double>>();
  for (const auto& d : j.at("deviations")) r.deviations.push_back({d.at("plus").get<double>(), d.at("minus").get<double>()});
  r.objective = num(j.at("objective"));
  r.grid_objective = num(j.at("grid_objective"));
  r.feasible = j.at("feasible").get<bool>();
  if (!j.at("region").is_null()) r.region = region_from_json(j.at("region"));
  const auto& t = j.at("trace");
  r.trace = {t.at("grid").get<int>(), t.at("refine_iterations").get<int>(), t.at("evaluations").get<std::size_t>(),
             t.at("method").get<std::string>()};
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// report.json: solution, criterion labels, the expanded config and provenance.
inline json run_report(const RunConfig& cfg, const SolveReport& r, bool deterministic) {
  const json config = config_to_json(cfg);
  json labels = json::array();
  for (const auto& c : cfg.criteria) labels.push_back(c.label());
  json prov{{"config_hash", "fnv1a64:" + hex64(fnv1a64(config.dump()))},
            {"mode", std::string(to_string(cfg.mode))},
            {"version", kVersion},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  if (!deterministic) prov["timestamp"] = utc_timestamp();
  return {{"solution", solve_report_to_json(r)}, {"criteria", labels}, {"config", config}, {"provenance", prov}};
}

// ---- CSV --------------------------------------------------------------------

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

namespace detail {
inline void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

inline std::vector<std::string> header(std::size_t d, const std::vector<Criterion>& criteria) {
  std::vector<std::string> h;
  for (std::size_t i = 0; i < d; ++i) h.push_back("alpha_" + std::to_string(i + 1));
  for (const auto& c : criteria) h.push_back(c.label());
  return h;
}
}  // namespace detail

/// One row per grid point: alpha, achievements, objective, feasible.
inline void write_grid_csv(std::ostream& os, const std::vector<Criterion>& criteria, const std::vector<Strategy>& grid,
                           const std::vector<Evaluation>& evals) {
  if (grid.empty()) return;
  auto h = detail::header(grid.front().size(), criteria);
  h.push_back("objective");
  h.push_back("feasible");
  detail::csv_row(os, h);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<std::string> row;
    for (double w : grid[g].weights()) row.push_back(csv_number(w));
    for (double v : evals[g].achievements) row.push_back(csv_number(v));
    row.push_back(csv_number(evals[g].objective));
    row.push_back(evals[g].feasible ? "true" : "false");
    detail::csv_row(os, row);
  }
}

inline void write_front_csv(std::ostream& os, const std::vector<Criterion>& criteria,
                            const std::vector<FrontPoint>& front, std::size_t d) {
  detail::csv_row(os, detail::header(d, criteria));
  for (const auto& p : front) {
    std::vector<std::string> row;
    for (double w : p.alpha.weights()) row.push_back(csv_number(w));
    for (double v : p.values) row.push_back(csv_number(v));
    detail::csv_row(os, row);
  }
}

}  // namespace riskgp
