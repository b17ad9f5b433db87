// riskgp: solve, audit and enumerate the built-in diversification programs.
//
//   riskgp run|audit|pareto|list-fixtures [-c FILE] [--fixture ID] [--grid K]
//          [--mode paper|oracle] [--deterministic] [-o DIR]
//
// Exit status: 0 success, 1 configuration error, 2 infeasible program,
// 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI/CLI.hpp>
#include "riskgp/fixture_audit.hpp"
#include "riskgp/io.hpp"

namespace fs = std::filesystem;
using namespace riskgp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config_file;
  std::string fixture;
  int grid = 0;
  std::string mode;
  bool deterministic = false;
  std::string output;
  bool json = false;
};

RunConfig resolve_config(const Options& o) {
  if (!o.config_file.empty() && !o.fixture.empty()) throw ConfigError("-c/--fixture: give one, not both");
  RunConfig cfg;
  if (!o.config_file.empty()) {
    cfg = load_config(o.config_file);
  } else if (!o.fixture.empty()) {
    const auto f = find_fixture(o.fixture);
    if (!f) throw ConfigError("--fixture: unknown fixture '" + o.fixture + "'");
    cfg = fixture_config(*f);
  } else {
    throw ConfigError("one of -c FILE or --fixture ID is required");
  }
  if (o.grid > 0) cfg.solver.grid = o.grid;
  if (!o.mode.empty()) {
    const auto m = parse_eval_mode(o.mode);
    if (!m) throw ConfigError("--mode: expected paper or oracle");
    cfg.mode = *m;
    for (auto& c : cfg.criteria) c.mode.reset();
    try {
      (void)cfg.program();
    } catch (const ContractError& e) {
      throw ConfigError(std::string("--mode: ") + e.what());
    }
  }
  if (!o.output.empty()) cfg.output_dir = o.output;
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output.directory: cannot create '" + dir.string() + "'");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output.directory: cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto gp = cfg.program();
  const auto dir = prepare_output(cfg);

  std::vector<Evaluation> grid_evals;
  const auto report = solve(gp, cfg.solver, &grid_evals);
  const auto grid = simplex_grid(gp.model().dimension(), static_cast<std::size_t>(cfg.solver.grid));

  write_text(dir / "report.json", run_report(cfg, report, o.deterministic).dump(2) + "\n");
  {
    std::ostringstream os;
    write_grid_csv(os, cfg.criteria, grid, grid_evals);
    write_text(dir / "grid.csv", os.str());
  }
  {
    std::vector<std::vector<double>> values;
    values.reserve(grid_evals.size());
    for (auto& e : grid_evals) values.push_back(std::move(e.achievements));
    std::ostringstream os;
    write_front_csv(os, cfg.criteria, pareto_filter(grid, values), gp.model().dimension());
    write_text(dir / "front.csv", os.str());
  }

  std::cout << "objective " << csv_number(report.objective) << "\nalpha";
  for (double w : report.best_alpha.weights()) std::cout << ' ' << csv_number(w);
  std::cout << "\nwrote " << (dir / "report.json").string() << ", grid.csv, front.csv\n";
  if (!report.feasible) {
    std::cerr << "riskgp: every grid point violates a veto threshold\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_pareto(const Options& o) {
  const auto cfg = resolve_config(o);
  const auto model = cfg.model();
  const auto dir = prepare_output(cfg);
  const auto front = pareto_front(model, cfg.solver.grid, cfg.solver.threads);
  std::ostringstream os;
  write_front_csv(os, cfg.criteria, front, model.dimension());
  write_text(dir / "front.csv", os.str());
  std::cout << front.size() << " nondominated grid points; wrote " << (dir / "front.csv").string() << "\n";
  return kExitOk;
}

int cmd_audit(const Options& o) {
  const auto cfg = resolve_config(o);
  if (!cfg.fixture) throw ConfigError("fixture: audit needs a config naming a built-in fixture");
  const auto f = find_fixture(*cfg.fixture);
  const auto dir = prepare_output(cfg);
  AuditOptions opt;
  opt.threads = cfg.solver.threads;
  json doc = audit_fixture(*f, opt);
  doc["version"] = kVersion;
  if (!o.deterministic) doc["timestamp"] = utc_timestamp();
  write_text(dir / "audit.json", doc.dump(2) + "\n");
  std::cout << "wrote " << (dir / "audit.json").string() << "\n";
  return kExitOk;
}

int cmd_list(const Options& o) {
  const auto all = fixtures();
  if (o.json) {
    json arr = json::array();
    for (const auto& f : all) arr.push_back({{"id", f.id}, {"description", f.description}, {"source", f.source}});
    std::cout << arr.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& f : all) std::cout << f.id << "\t" << f.description << "\t(" << f.source << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-programming diversification over set-valued risk measures"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_file, "JSON run configuration");
    sub->add_option("--fixture", o.fixture, "built-in fixture id (see list-fixtures)");
    sub->add_option("--grid", o.grid, "simplex grid resolution k")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "criterion evaluation: oracle or paper")
        ->check(CLI::IsMember({"oracle", "paper"}));
    sub->add_flag("--deterministic", o.deterministic, "omit timestamps from written reports");
    sub->add_option("-o,--output", o.output, "output directory");
  };
  auto* run = app.add_subcommand("run", "solve the goal program; write report.json, grid.csv, front.csv");
  auto* audit = app.add_subcommand("audit", "compare printed and derived evaluators; write audit.json");
  auto* pareto = app.add_subcommand("pareto", "enumerate the grid Pareto front; write front.csv");
  auto* list = app.add_subcommand("list-fixtures", "list the built-in fixtures");
  for (auto* s : {run, audit, pareto}) add_common(s);
  list->add_flag("--json", o.json, "machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*audit) return cmd_audit(o);
    if (*pareto) return cmd_pareto(o);
    return cmd_list(o);
  } catch (const ConfigError& e) {
    std::cerr << "riskgp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractError& e) {
    std::cerr << "riskgp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "riskgp: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "riskgp: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
