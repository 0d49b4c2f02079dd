#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "figures.hpp"
#include "floc/config.hpp"
#include "floc/csv.hpp"
#include "floc/equilibrium.hpp"
#include "floc/error.hpp"
#include "floc/multispecies.hpp"
#include "floc/slowfast.hpp"

#ifndef FLOC_VERSION
#define FLOC_VERSION "dev"
#endif

namespace floc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Manifest {
  std::string command;
  json arguments = json::object();
  json config = json::object();
  json notes = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void write(const fs::path& path) {
    outputs.push_back(path.filename().string());
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json j{{"command", command},   {"arguments", arguments},     {"config", config},
           {"notes", notes},       {"tool_version", FLOC_VERSION}, {"outputs", outputs},
           {"timestamp", stamp},   {"wall_clock_seconds", elapsed}};
    write_json(path, j);
  }
};

fs::path manifest_path_for(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".manifest.json");
  return p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::vector<double> parse_vector(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field, "cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string model = "full";
  double t_end = 100.0;
  std::string y0;
  std::string out = "trajectory.csv";
  std::size_t points = 500;
};

int cmd_simulate(const SimulateArgs& a) {
  Manifest manifest;
  manifest.command = "simulate";
  manifest.arguments = {{"config", a.config}, {"model", a.model}, {"t_end", a.t_end},
                        {"y0", a.y0},         {"out", a.out},     {"points", a.points}};
  if (!(a.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  if (a.points < 2) throw ConfigError("points", "must be at least 2");

  const json doc = load_json(a.config);
  const fs::path out(a.out);
  ensure_parent(out);
  Trajectory traj;
  std::vector<double> y0 = a.y0.empty() ? std::vector<double>{} : parse_vector(a.y0, "y0");

  if (is_multispecies_config(doc)) {
    if (a.model != "reduced") throw ConfigError("model", "multi-species configs only support --model reduced");
    const auto model = parse_multispecies(doc);
    manifest.config = to_json(model);
    if (y0.empty()) {
      y0.assign(model.size() + 1, 0.1);
      y0[0] = model.params().S_in;
    }
    if (y0.size() != model.size() + 1) throw ConfigError("y0", "expected s,x1,...,xn");
    traj = simulate_multispecies(model, y0, a.t_end, a.points);
  } else {
    const Model model = parse_model(doc);
    manifest.config = to_json(model);
    const double s_in = model.params().S_in;
    if (a.model == "full") {
      if (y0.empty()) y0 = {s_in, 0.05, 0.05};
      if (y0.size() != 3) throw ConfigError("y0", "full model expects s,u,v");
      traj = simulate_full(model, FullState::from(y0), a.t_end, a.points);
    } else if (a.model == "xp") {
      if (y0.empty()) y0 = {s_in, 0.1, 0.5};
      if (y0.size() != 3) throw ConfigError("y0", "xp model expects s,x,p");
      traj = simulate_xp(model, XPState::from(y0), a.t_end, a.points);
    } else if (a.model == "reduced") {
      if (y0.empty()) y0 = {s_in, 0.1};
      if (y0.size() != 2) throw ConfigError("y0", "reduced model expects s,x");
      const ReducedModel rm(model);
      traj = simulate_reduced(rm, ReducedState::from(y0), a.t_end, a.points);
    } else {
      throw ConfigError("model", "expected full, xp or reduced");
    }
  }
  manifest.arguments["y0"] = y0;
  write_trajectory_csv(out, traj);
  manifest.outputs.push_back(out.filename().string());
  manifest.notes = {{"model_tag", traj.model_tag}, {"steps_accepted", traj.n_accepted}, {"steps_rejected", traj.n_rejected}};
  manifest.write(manifest_path_for(out));
  return kOk;
}

// -------------------------------------------------------------- equilibria

struct EquilibriaArgs {
  std::string config;
  std::string out = "equilibria.json";
  int n_scan = 2000;
  double x_max = 0.0;
};

int cmd_equilibria(const EquilibriaArgs& a) {
  Manifest manifest;
  manifest.command = "equilibria";
  manifest.arguments = {{"config", a.config}, {"out", a.out}, {"n_scan", a.n_scan}, {"x_max", a.x_max}};
  const json doc = load_json(a.config);
  if (is_multispecies_config(doc)) throw ConfigError("species", "equilibria supports single-species configs only");
  const Model model = parse_model(doc);
  manifest.config = to_json(model);

  json report;
  if (model.params().equal_removal()) {
    report = to_json(equilibria_equal_D(model));
    manifest.notes["route"] = "equal removal rates: closed-form coexistence solver, (u, v)-plane Jacobian";
  } else {
    ScanOptions opts;
    opts.n_scan = a.n_scan;
    if (a.x_max > 0.0) opts.x_max = a.x_max;
    const auto scan = find_equilibria_distinct_D(model, opts);
    for (const auto& w : scan.warnings) std::cerr << "warning: " << w << '\n';
    report = to_json(scan.equilibria);
    manifest.notes = {{"route", "distinct removal rates: Gamma scan on the reduced (s, x) model"},
                      {"x_max", scan.x_max},
                      {"n_scan", scan.n_scan},
                      {"warnings", scan.warnings}};
  }
  const fs::path out(a.out);
  ensure_parent(out);
  write_json(out, report);
  manifest.outputs.push_back(out.filename().string());
  manifest.write(manifest_path_for(out));
  return kOk;
}

// --------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::string figure;
  std::string out_dir = "out";
  unsigned jobs = 1;
  std::size_t points = 500;
};

json reduced_state_json(std::span<const double> y) { return {{"s", y[0]}, {"x", y[1]}}; }

int reproduce_fig4(const ReproduceArgs& a, Manifest& manifest) {
  const fs::path dir(a.out_dir);
  const Model model = figures::fig4();
  manifest.config = to_json(model);
  manifest.notes = {{"initial_condition", {{"s", figures::kFig4Initial.s}, {"u", figures::kFig4Initial.u}, {"v", figures::kFig4Initial.v}}},
                    {"initial_condition_source", "not given with the figure; harness default (S_in, 0.05, 0.05)"},
                    {"epsilons", figures::kFig4Epsilons},
                    {"t_end", figures::kFig4TEnd}};

  CompareOptions opts;
  opts.points = a.points;
  opts.jobs = a.jobs;
  const auto report = compare_slow_fast(model, figures::kFig4Epsilons, figures::kFig4Initial, figures::kFig4TEnd, opts);

  for (const auto& run : report.runs) {
    const std::string name = "full_eps" + format_short(run.epsilon) + ".csv";
    write_trajectory_csv(dir / name, run.full);
    manifest.outputs.push_back(name);
  }
  write_trajectory_csv(dir / "reduced.csv", report.reduced);
  manifest.outputs.push_back("reduced.csv");

  json j = to_json(report);
  json eqs = json::object();
  for (double eps : figures::kFig4Epsilons) {
    const auto eq = solve_coexistence_equal_D(figures::fig4(eps));
    eqs["full_eps" + format_short(eps)] = {{"s", eq->s()}, {"x", eq->x()}};
  }
  const auto scan = find_equilibria_distinct_D(model);
  for (const auto& e : scan.equilibria)
    if (e.kind == EquilibriumKind::Coexistence) eqs["reduced"] = {{"s", e.s()}, {"x", e.x()}};
  j["coexistence_equilibria"] = eqs;
  const auto& runs = report.runs;
  j["deviation_decreases_with_epsilon"] = runs.size() == 2 && runs[1].sup_dev_x < runs[0].sup_dev_x;
  write_json(dir / "comparison.json", j);
  manifest.outputs.push_back("comparison.json");
  return kOk;
}

int reproduce_fig6(const ReproduceArgs& a, Manifest& manifest) {
  const fs::path dir(a.out_dir);
  const Model model = figures::fig6();
  const ReducedModel rm(model);
  manifest.config = to_json(model);
  manifest.notes = {{"a_b_convention", "only a/b = 4 is given; a = 4, b = 1 chosen"},
                    {"fan", {{"points", figures::kFanPoints},
                             {"rectangle", {{"s", {0.0, model.params().S_in}}, {"x", {figures::kFanXMin, figures::kFanXMax}}}},
                             {"placement", "even arc-length spacing on the boundary, counter-clockwise from (0, x_min)"},
                             {"t_end", figures::kFanTEnd}}}};

  const auto scan = find_equilibria_distinct_D(model);
  write_json(dir / "equilibria.json", to_json(scan.equilibria));
  manifest.outputs.push_back("equilibria.json");

  const auto xs = uniform_grid(0.0, scan.x_max, 501);
  std::vector<double> gam, ph, G;
  for (double x : xs) {
    gam.push_back(gamma_of_x(x, rm));
    ph.push_back(x == 0.0 ? gamma_of_x(0.0, rm) - Gamma(0.0, rm) : phi_of_x(x, rm));
    G.push_back(Gamma(x, rm));
  }
  write_columns_csv(dir / "gamma.csv", {"x", "gamma", "phi", "Gamma"}, {xs, gam, ph, G});
  manifest.outputs.push_back("gamma.csv");

  const auto fan = figures::phase_fan(model.params().S_in);
  auto integrate_one = [&](const ReducedState& y0) { return simulate_reduced(rm, y0, figures::kFanTEnd, a.points); };
  std::vector<Trajectory> trajs;
  if (a.jobs > 1) {
    std::vector<std::future<Trajectory>> pending;
    for (const auto& y0 : fan) pending.push_back(std::async(std::launch::async, integrate_one, y0));
    for (auto& f : pending) trajs.push_back(f.get());
  } else {
    for (const auto& y0 : fan) trajs.push_back(integrate_one(y0));
  }

  json summary = json::array();
  for (std::size_t k = 0; k < fan.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "fan_%02zu.csv", k);
    write_trajectory_csv(dir / name, trajs[k]);
    manifest.outputs.push_back(name);
    const auto end = trajs[k].back();
    json attractor = nullptr;
    for (std::size_t e = 0; e < scan.equilibria.size(); ++e) {
      const auto& eq = scan.equilibria[e];
      if (!is_stable(eq.classification)) continue;
      if (std::max(std::abs(end[0] - eq.s()), std::abs(end[1] - eq.x())) < 1e-3)
        attractor = {{"index", e}, {"kind", to_string(eq.kind)}, {"state", {{"s", eq.s()}, {"x", eq.x()}}}};
    }
    summary.push_back({{"file", name}, {"initial", {{"s", fan[k].s}, {"x", fan[k].x}}},
                       {"terminal", reduced_state_json(end)}, {"attractor", attractor}});
  }
  write_json(dir / "fan.json", summary);
  manifest.outputs.push_back("fan.json");
  return kOk;
}

int cmd_reproduce(const ReproduceArgs& a) {
  Manifest manifest;
  manifest.command = "reproduce";
  manifest.arguments = {{"figure", a.figure}, {"out_dir", a.out_dir}, {"jobs", a.jobs}, {"points", a.points}};
  if (a.points < 2) throw ConfigError("points", "must be at least 2");
  fs::create_directories(a.out_dir);
  if (a.figure == "fig4") {
    reproduce_fig4(a, manifest);
  } else if (a.figure == "fig6") {
    reproduce_fig6(a, manifest);
  } else {
    throw ConfigError("figure", "expected fig4 or fig6");
  }
  manifest.write(fs::path(a.out_dir) / "manifest.json");
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Chemostat models with free and attached biomass"};
  app.set_version_flag("--version", FLOC_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate a model and write a trajectory CSV");
  simulate->add_option("config", sim.config, "Model configuration (JSON)")->required();
  simulate->add_option("--model", sim.model, "full | xp | reduced")->check(CLI::IsMember({"full", "xp", "reduced"}));
  simulate->add_option("--t-end", sim.t_end, "Final time");
  simulate->add_option("--y0", sim.y0, "Initial state, comma separated");
  simulate->add_option("--out", sim.out, "Output CSV path");
  simulate->add_option("--points", sim.points, "Output grid size");

  EquilibriaArgs eqa;
  auto* equilibria = app.add_subcommand("equilibria", "Locate and classify steady states");
  equilibria->add_option("config", eqa.config, "Model configuration (JSON)")->required();
  equilibria->add_option("--out", eqa.out, "Output JSON path");
  equilibria->add_option("--n-scan", eqa.n_scan, "Gamma scan resolution (distinct removal rates)");
  equilibria->add_option("--x-max", eqa.x_max, "Gamma scan upper bound (default D S_in / D_v)");

  ReproduceArgs rep;
  auto* reproduce = app.add_subcommand("reproduce", "Write the data bundle for a reference figure");
  reproduce->add_option("figure", rep.figure, "fig4 | fig6")->required()->check(CLI::IsMember({"fig4", "fig6"}));
  reproduce->add_option("--out-dir", rep.out_dir, "Output directory");
  reproduce->add_option("--jobs", rep.jobs, "Parallel integrations");
  reproduce->add_option("--points", rep.points, "Output grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*equilibria) return cmd_equilibria(eqa);
    if (*reproduce) return cmd_reproduce(rep);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}

}  // namespace floc::cli
