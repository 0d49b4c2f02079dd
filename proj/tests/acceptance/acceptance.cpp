// Acceptance suite: one PASS/FAIL line per criterion.
//
//   floc_acceptance          run every criterion
//   floc_acceptance 3 5      run the listed ones
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "figures.hpp"
#include "fixtures.hpp"
#include "floc/config.hpp"
#include "floc/csv.hpp"
#include "floc/equilibrium.hpp"
#include "floc/error.hpp"
#include "floc/multispecies.hpp"
#include "floc/slowfast.hpp"

namespace {

using namespace floc;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ---------------------------------------------------------------- shared generators

struct EqualRateCase {
  Model model;
  bool expect_coexistence;
};

// Monod laws with K_v >= K_u and mu_max_v < mu_max_u, so mu_u > mu_v for s > 0.
std::vector<EqualRateCase> equal_rate_cases() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<EqualRateCase> out;
  for (int k = 0; k < 200; ++k) {
    const double S_in = 0.5 + 4.5 * U(rng);
    const double mu_u = 0.3 + 2.7 * U(rng);
    const double K_u = 0.1 + 2.0 * U(rng);
    const Monod gu{mu_u, K_u};
    const Monod gv{mu_u * (0.05 + 0.9 * U(rng)), K_u * (1.0 + 2.0 * U(rng))};
    const double mu_u_sin = mu_u * S_in / (K_u + S_in);
    // half the draws below mu_u(S_in), half above
    const double D = (k % 2 == 0) ? mu_u_sin * (0.05 + 0.9 * U(rng)) : std::min(mu_u_sin * (1.0 + U(rng)), 0.999 * mu_u);
    Model m(ChemostatParams::equal(D, S_in), gu, gv,
            AttachmentLaws(LinearTotal{0.05 + 5.0 * U(rng)}, ConstantDetachment{0.05 + 3.0 * U(rng)}));
    out.push_back({std::move(m), D < mu_u_sin});
  }
  return out;
}

Model random_full_model(std::mt19937_64& rng, bool equal_rates) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double D = 0.05 + 1.5 * U(rng);
  ChemostatParams p{D, 0.2 + 5.0 * U(rng), D, D, std::nullopt};
  if (!equal_rates) {
    p.D_u = D * (0.3 + 0.7 * U(rng));
    p.D_v = p.D_u * (0.1 + 0.9 * U(rng));
  }
  if (U(rng) < 0.5) p.epsilon = std::pow(10.0, -1.5 + 2.0 * U(rng));
  const double K = 0.05 + 3.0 * U(rng);
  const double mu_u = 0.1 + 3.0 * U(rng);
  return Model(p, Monod{mu_u, K}, Monod{mu_u * (0.05 + 0.9 * U(rng)), K * (1.0 + U(rng))},
               AttachmentLaws(LinearTotal{0.05 + 5.0 * U(rng)}, ConstantDetachment{0.05 + 3.0 * U(rng)}));
}

// ---------------------------------------------------------------- criteria

Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Model model = figures::fig4();
  const auto report = compare_slow_fast(model, figures::kFig4Epsilons, figures::kFig4Initial, figures::kFig4TEnd);
  const double elapsed = seconds_since(t0);

  // common target: the slow-limit coexistence state
  const auto scan = find_equilibria_distinct_D(model);
  const double s_star = scan.equilibria.at(1).s(), x_star = scan.equilibria.at(1).x();
  o.detail << "(s*, x*) = (" << s_star << ", " << x_star << ")";
  const auto check = [&](const std::string& name, double s, double x) {
    const double dev = std::max(std::abs(s - s_star), std::abs(x - x_star));
    o.detail << "; " << name << " terminal dev " << dev;
    o.require(dev <= 1e-3, name + " within 1e-3 of (s*, x*)");
  };
  for (const auto& run : report.runs) {
    const auto end = run.full.back();
    check("full eps=" + format_short(run.epsilon), end[0], end[1] + end[2]);
  }
  check("reduced", report.reduced.back()[0], report.reduced.back()[1]);
  o.detail << "; sup dev x: eps=2 " << report.runs[0].sup_dev_x << ", eps=0.5 " << report.runs[1].sup_dev_x;
  o.require(report.runs[1].sup_dev_x < report.runs[0].sup_dev_x, "sup dev x shrinks with eps");
  o.detail << "; " << elapsed << " s";
  o.require(elapsed < 5.0, "runtime < 5 s");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int with = 0, bad = 0;
  double worst_residual = 0.0;
  for (const auto& c : equal_rate_cases()) {
    const auto& m = c.model;
    const auto eq = solve_coexistence_equal_D(m);
    if (eq.has_value() != c.expect_coexistence) {
      ++bad;
      continue;
    }
    if (!eq) continue;
    ++with;
    const auto& st = std::get<FullState>(eq->state);
    const double D = m.params().D;
    const double lu = break_even(m.growth_u(), D).value_or_inf();
    const double lv = break_even(m.growth_v(), D).value_or_inf();
    worst_residual = std::max(worst_residual, eq->residual);
    const bool ok = eq->residual < 1e-10 && st.s > lu && st.s < lv && st.u > 0.0 && st.v > 0.0 &&
                    eq->jacobian.trace() < 0.0 && eq->jacobian.det() > 0.0;
    bad += !ok;
  }
  const double elapsed = seconds_since(t0);
  o.detail << "200 configs, " << with << " with coexistence, " << bad << " violations, max residual " << worst_residual
           << "; " << elapsed << " s";
  o.require(bad == 0, "every config meets the contract");
  o.require(elapsed < 10.0, "runtime < 10 s");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Model model = figures::fig6();
  const ReducedModel rm(model);
  const auto scan = find_equilibria_distinct_D(model);
  std::vector<const Equilibrium*> positive;
  for (const auto& e : scan.equilibria)
    if (e.kind == EquilibriumKind::Coexistence) positive.push_back(&e);
  o.detail << positive.size() << " positive roots";
  o.require(positive.size() == 2, "exactly 2 positive roots");
  int saddles = 0, stable = 0;
  for (const auto* e : positive) {
    o.detail << "; s*=" << e->s() << " " << to_string(e->classification);
    o.require(e->s() > 0.4 && e->s() < 1.0, "s* in (lambda_v, lambda_u)");
    saddles += e->classification == Classification::Saddle;
    stable += is_stable(e->classification);
  }
  o.require(saddles == 1 && stable == 1, "one saddle and one stable");
  const auto& washout = scan.equilibria.front();
  o.detail << "; washout " << to_string(washout.classification) << " (mu_u(0.9) = " << model.growth_u()(0.9) << ")";
  o.require(is_stable(washout.classification) && model.growth_u()(0.9) < 1.0, "washout stable");

  ScanOptions doubled;
  doubled.n_scan = 2 * ScanOptions{}.n_scan;
  const auto fine = find_equilibria_distinct_D(model, doubled);
  o.require(fine.positive_count() == scan.positive_count(), "root count stable when n_scan doubles");

  std::set<std::size_t> reached;
  for (const auto& y0 : figures::phase_fan(model.params().S_in)) {
    const auto end = simulate_reduced(rm, y0, figures::kFanTEnd).back();
    for (std::size_t k = 0; k < scan.equilibria.size(); ++k) {
      const auto& e = scan.equilibria[k];
      if (is_stable(e.classification) && std::max(std::abs(end[0] - e.s()), std::abs(end[1] - e.x())) < 1e-3)
        reached.insert(k);
    }
  }
  o.detail << "; fan reaches " << reached.size() << " attractors";
  o.require(reached.size() >= 2, "fan reaches >= 2 attractors");
  const double elapsed = seconds_since(t0);
  o.detail << "; " << elapsed << " s";
  o.require(elapsed < 10.0, "runtime < 10 s");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  double worst_closed = 0.0, worst_deriv = 0.0;
  bool decreasing = true, mu_x_negative = true;
  for (const auto& model : {figures::fig4(), figures::fig6()}) {
    const auto& laws = model.laws();
    const double r = laws.ratio();
    const SlowManifold manifold(laws);
    double prev = 1.0;
    for (double x : log_grid(0.01, 100.0, 50)) {
      const double p = solve_pbar_bisection(x, laws);
      worst_closed = std::max(worst_closed, std::abs(p - 1.0 / (1.0 + r * x)));
      decreasing = decreasing && p < prev;
      prev = p;
      const double h = 1e-6 * x;
      const double fd = (solve_pbar_bisection(x + h, laws) - solve_pbar_bisection(x - h, laws)) / (2.0 * h);
      worst_deriv = std::max(worst_deriv, rel(manifold.implicit_derivative(x), fd));
    }
    const ReducedModel rm(model);
    for (double s : log_grid(0.01, 10.0, 20))
      for (double x : log_grid(0.01, 10.0, 20)) mu_x_negative = mu_x_negative && rm.mu_dx(s, x) < 0.0;
  }
  o.detail << "closed form vs bisection " << worst_closed << ", implicit derivative rel err " << worst_deriv;
  o.require(worst_closed <= 1e-12, "pbar bisection matches closed form to 1e-12");
  o.require(decreasing, "pbar strictly decreasing");
  o.require(worst_deriv <= 1e-6, "implicit derivative matches differences to 1e-6");
  o.require(mu_x_negative, "dmu/dx < 0 on the 20x20 grid");
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double min_component = INFINITY, worst_bound = -INFINITY, worst_envelope = -INFINITY;
  int failures = 0;
  for (int k = 0; k < 500; ++k) {
    const bool equal = k % 2 == 0;
    const Model m = random_full_model(rng, equal);
    const auto& P = m.params();
    const FullState y0{5.0 * U(rng), U(rng) < 0.1 ? 0.0 : 3.0 * U(rng), U(rng) < 0.1 ? 0.0 : 3.0 * U(rng)};
    Trajectory traj;
    try {
      traj = simulate_full(m, y0, 50.0, 0);
    } catch (const NumericalError& e) {
      ++failures;
      o.detail << "config " << k << ": " << e.what() << "; ";
      continue;
    }
    const double z0 = y0.s + y0.u + y0.v;
    const double bound = std::max(z0, P.D * P.S_in / P.D_v) + 1e-6;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto y = traj.state(i);
      min_component = std::min({min_component, y[0], y[1], y[2]});
      const double z = y[0] + y[1] + y[2];
      worst_bound = std::max(worst_bound, z - bound);
      if (equal)
        worst_envelope = std::max(worst_envelope, std::abs(z - P.S_in) -
                                                      (std::abs(z0 - P.S_in) * std::exp(-P.D * traj.times[i]) + 1e-6));
    }
  }
  const double elapsed = seconds_since(t0);
  o.detail << "500 runs, min component " << min_component << ", max excess over bound " << worst_bound
           << ", max excess over envelope " << worst_envelope << "; " << elapsed << " s";
  o.require(failures == 0, "all runs complete");
  o.require(min_component >= -1e-9, "no component below -1e-9");
  o.require(worst_bound <= 0.0, "z within max(z0, D S_in / D_v) + 1e-6");
  o.require(worst_envelope <= 0.0, "equal-rate conservation envelope");
  o.require(elapsed < 60.0, "runtime < 60 s");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  double worst_tr = 0.0, worst_det = 0.0;
  int equal_checked = 0;
  for (const auto& c : equal_rate_cases()) {
    const auto eq = solve_coexistence_equal_D(c.model);
    if (!eq) continue;
    const auto cf = closed_form_stability_equal_D(std::get<FullState>(eq->state), c.model);
    worst_tr = std::max(worst_tr, rel(cf.trace, eq->jacobian.trace()));
    worst_det = std::max(worst_det, rel(cf.det, eq->jacobian.det()));
    ++equal_checked;
  }
  o.detail << "equal-rate path: " << equal_checked << " equilibria, max rel err trace " << worst_tr << ", det "
           << worst_det;
  o.require(worst_tr <= 1e-4 && worst_det <= 1e-4, "closed-form trace/det within 1e-4");

  const Model model = figures::fig6();
  const ReducedModel rm(model);
  double worst_mu_x = 0.0, worst_mu_s = 0.0;
  for (const auto& e : find_equilibria_distinct_D(model).equilibria) {
    if (e.kind != EquilibriumKind::Coexistence) continue;
    const double D = model.params().D;
    const double with_mu_x = -D * e.x() * rm.mu_dx(e.s(), e.x()) * Gamma_prime(e.x(), rm);
    worst_mu_x = std::max(worst_mu_x, rel(with_mu_x, e.jacobian.det()));
    worst_mu_s = std::max(worst_mu_s, rel(det_formula_distinct_D(e.s(), e.x(), rm), e.jacobian.det()));
    o.detail << "; x*=" << e.x() << " det_fd=" << e.jacobian.det() << " -D x mu_x Gamma'=" << with_mu_x;
  }
  o.detail << "; distinct-rate path max rel err with mu_x " << worst_mu_x << " (with mu_s: " << worst_mu_s << ")";
  o.require(worst_mu_x <= 1e-4, "det J = -D x* mu_x Gamma'(x*) within 1e-4");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const MultiSpeciesModel sym(ChemostatParams::equal(0.5, 2.0), {Monod{1.0, 1.0}, Monod{1.0, 1.0}},
                              {Monod{0.7, 1.0}, Monod{0.7, 1.0}}, {{1.0, 0.5}, {0.5, 1.0}}, {0.5, 0.5});
  const std::vector<double> y0{2.0, 0.1, 0.1};
  const auto traj = simulate_multispecies(sym, y0, 500.0);
  double asym = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) asym = std::max(asym, std::abs(traj.state(i)[1] - traj.state(i)[2]));
  o.detail << "symmetric pair max |x1 - x2| " << asym;
  o.require(asym <= 1e-8, "symmetry preserved to 1e-8");

  const auto model = parse_multispecies(load_json(test::config_path("two_species_coexistence.json")));
  const auto with = simulate_multispecies(model, y0, 500.0).back();
  const auto without = simulate_multispecies(model.planktonic_only(), y0, 500.0).back();
  const double min_with = std::min(with[1], with[2]);
  const double min_without = std::min(without[1], without[2]);
  o.detail << "; catalog instance min x(500) " << min_with << ", planktonic-only min x(500) " << min_without;
  o.require(min_with > 0.01, "coexistence with attachment");
  o.require(min_without < 1e-6, "exclusion without attachment");
  const double elapsed = seconds_since(t0);
  o.detail << "; " << elapsed << " s";
  o.require(elapsed < 20.0, "runtime < 20 s");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion_8() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "floc_acceptance_determinism";
  fs::remove_all(root);
  const std::string cli = FLOC_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sim_full", "simulate " + test::config_path("fig4.json") + " --model full --t-end 60 --out @/traj.csv"},
      {"sim_xp", "simulate " + test::config_path("fig4.json") + " --model xp --t-end 60 --out @/traj.csv"},
      {"sim_reduced", "simulate " + test::config_path("fig6.json") + " --model reduced --t-end 100 --out @/traj.csv"},
      {"sim_multi", "simulate " + test::config_path("two_species_coexistence.json") + " --model reduced --t-end 500 --out @/traj.csv"},
      {"eq_fig4", "equilibria " + test::config_path("fig4.json") + " --out @/eq.json"},
      {"eq_fig6", "equilibria " + test::config_path("fig6.json") + " --out @/eq.json"},
      {"fig4", "reproduce fig4 --out-dir @ --jobs 2"},
      {"fig6", "reproduce fig6 --out-dir @ --jobs 4"},
  };
  int files = 0, mismatches = 0, errors = 0;
  for (const auto& [name, args] : commands) {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (name + "_" + std::to_string(run));
      fs::create_directories(dir);
      std::string a = args;
      for (auto pos = a.find('@'); pos != std::string::npos; pos = a.find('@')) a.replace(pos, 1, dir.string());
      if (std::system((cli + " " + a + " > /dev/null 2>&1").c_str()) != 0) ++errors;
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto file = entry.path().filename().string();
      if (file.find("manifest") != std::string::npos) continue;  // timestamps and durations
      ++files;
      if (slurp(entry.path()) != slurp(dirs[1] / file)) {
        ++mismatches;
        o.detail << name << "/" << file << " differs; ";
      }
    }
  }
  fs::remove_all(root);
  o.detail << commands.size() << " commands, " << files << " data files compared, " << mismatches << " mismatches";
  o.require(errors == 0, "all commands exit 0");
  o.require(files > 0 && mismatches == 0, "byte-identical outputs");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"fig4 slow-fast reproduction", criterion_1},
    {"equal-rate coexistence suite", criterion_2},
    {"fig6 bistability", criterion_3},
    {"slow-manifold suite", criterion_4},
    {"positivity and boundedness fuzz", criterion_5},
    {"stability formula cross-check", criterion_6},
    {"multi-species coexistence contrast", criterion_7},
    {"determinism", criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);

  int failed = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    const auto& [title, fn] = kCriteria[n - 1];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
