// Command line front end: scenario runs, certificates, trace re-checks
// and SVG plots.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lfcbf/control/certificate.hpp"
#include "lfcbf/scenario/csv.hpp"
#include "lfcbf/scenario/load.hpp"
#include "lfcbf/scenario/runner.hpp"
#include "lfcbf/scenario/svg.hpp"

namespace fs = std::filesystem;
using namespace lfcbf;

namespace {

struct CommonOpts {
  std::string scenario_path;
  std::optional<std::string> out_dir;
  std::optional<double> dt;
  unsigned seed = 1;
  bool force_svg = false;
};

scenario::Scenario load_with_overrides(const CommonOpts& opts) {
  auto sc = scenario::load_scenario(opts.scenario_path);
  if (opts.out_dir) sc.out_dir = *opts.out_dir;
  if (opts.dt) sc.dt = *opts.dt;
  if (opts.force_svg) sc.svg = true;
  return sc;
}

void write_plots(const scenario::CompiledScenario& cs,
                 const sim::Trajectory& traj, const fs::path& dir) {
  const int n = cs.spec.n_agents;
  const int leader = cs.spec.leader;
  const auto& times = traj.times;

  auto state_series = [&](int idx) {
    std::vector<double> ys(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) ys[k] = traj.states[k][idx];
    return ys;
  };

  std::vector<scenario::Series> pos, vel;
  for (int i = 1; i < n; ++i) {
    std::vector<double> dp(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      dp[k] = traj.states[k][leader - 1] - traj.states[k][i - 1];
    }
    pos.push_back({"p" + std::to_string(leader) + "-p" + std::to_string(i),
                   times, std::move(dp)});
    if (cs.spec.order == 2) {
      std::vector<double> dv(traj.size());
      for (std::size_t k = 0; k < traj.size(); ++k) {
        dv[k] = traj.states[k][n + leader - 1] - traj.states[k][n + i - 1];
      }
      vel.push_back({"v" + std::to_string(leader) + "-v" + std::to_string(i),
                     times, std::move(dv)});
    }
  }
  if (n == 1) {
    // Single agent: plot the raw state instead of errors.
    pos.push_back({"p1", times, state_series(0)});
    if (cs.spec.order == 2) vel.push_back({"v1", times, state_series(n)});
  }
  scenario::write_svg_plot((dir / "positions.svg").string(),
                           cs.spec.name + ": position errors", "t [s]",
                           "position error", pos);
  if (!vel.empty()) {
    scenario::write_svg_plot((dir / "velocities.svg").string(),
                             cs.spec.name + ": velocity errors", "t [s]",
                             "velocity error", vel);
  }

  // Per-subtask composite barriers along the trajectory.
  std::vector<scenario::Series> bars;
  const auto task_barriers = cs.subtask_barriers();
  for (std::size_t i = 0; i < task_barriers.size(); ++i) {
    const auto& tb = task_barriers[i];
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj.times[k] > tb.end() + 1e-9) break;
      xs.push_back(traj.times[k]);
      ys.push_back(tb.value(traj.states[k], traj.times[k]));
    }
    std::string name = i < cs.spec.subtask_names.size()
                           ? cs.spec.subtask_names[i]
                           : "h" + std::to_string(i + 1);
    bars.push_back({std::move(name), std::move(xs), std::move(ys)});
  }
  if (!bars.empty()) {
    scenario::write_svg_plot((dir / "barriers.svg").string(),
                             cs.spec.name + ": task barriers", "t [s]",
                             "barrier value", bars);
  }
}

int run_one(const scenario::Scenario& sc, unsigned seed) {
  auto cs = scenario::compile(sc);
  auto result = scenario::run_scenario(cs, seed);

  const fs::path dir(sc.out_dir);
  fs::create_directories(dir);
  scenario::write_trace_csv((dir / "trace.csv").string(), result.trajectory,
                            result.report.tasks);
  std::ofstream rep(dir / "report.txt");
  rep << result.report.to_text();
  if (sc.svg) write_plots(cs, result.trajectory, dir);

  std::cout << result.report.to_text();
  std::cout << "trace: " << (dir / "trace.csv").string() << "\n";
  return 0;
}

int cmd_run(const CommonOpts& opts, const std::string& all_dir) {
  if (!all_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(all_dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::future<int>> jobs;
    for (const auto& f : files) {
      jobs.push_back(std::async(std::launch::async, [f, &opts]() {
        auto sc = scenario::load_scenario(f.string());
        if (opts.dt) sc.dt = *opts.dt;
        if (opts.force_svg) sc.svg = true;
        return run_one(sc, opts.seed);
      }));
    }
    int rc = 0;
    for (auto& j : jobs) rc |= j.get();
    return rc;
  }
  return run_one(load_with_overrides(opts), opts.seed);
}

int cmd_certify(const CommonOpts& opts, std::optional<double> delta_override,
                std::optional<int> samples_override) {
  auto sc = load_with_overrides(opts);
  if (delta_override) sc.delta = *delta_override;
  if (samples_override) sc.delta_samples = *samples_override;
  auto cs = scenario::compile(sc);

  double delta = 0.0;
  bool estimated = false;
  if (sc.delta) {
    delta = *sc.delta;
  } else if (!cs.dynamics->graph().leader_sees_all() &&
             cs.params.mode == control::InfoMode::PartialInfo) {
    auto result = scenario::run_scenario(cs, opts.seed);
    delta = scenario::estimate_delta(cs, result.trajectory, sc.delta_samples,
                                     opts.seed);
    estimated = true;
  }

  std::printf("scenario: %s\n", sc.name.c_str());
  std::printf("delta    = %.4f%s\n", delta, estimated ? " (estimated)" : "");
  if (cs.params.mu) {
    const auto cert = control::fixed_time_bound(cs.params, delta);
    std::printf("branch   = %d\n", cert.branch);
    std::printf("T        = %.4f s\n", cert.T);
    std::printf("eps_max  = %.4f\n", cert.eps_max);
    if (cs.chain && cs.params.cbf_order == 2) {
      std::printf("h floor  = %.4f  (lambda1^-1(-eps_max))\n",
                  cs.chain->lambda1_inverse(-cert.eps_max));
    }
    if (cs.barrier) {
      const double gap = cs.barrier->schedule().min_gap();
      std::printf("min switching gap = %.4f s%s\n", gap,
                  cert.T > gap ? "  WARNING: certified T exceeds the gap"
                               : "");
    }
  }
  std::printf("lemma reach bound = %.4f s\n",
              control::lemma_time_bound(cs.params));
  return 0;
}

int cmd_check(const CommonOpts& opts, const std::string& csv_path) {
  auto sc = load_with_overrides(opts);
  auto cs = scenario::compile(sc);
  auto trace = scenario::read_trace_csv(csv_path);

  const auto tasks = scenario::evaluate_tasks(cs, trace.trajectory);
  bool horizon_ok = true;
  for (const auto& t : tasks) horizon_ok &= t.horizon_ok;
  if (!horizon_ok) {
    std::cerr << "error: trace is shorter than the task horizon\n";
    return 1;
  }
  int rc = 0;
  for (const auto& t : tasks) {
    std::printf("%s: %s\n", t.name.c_str(),
                t.verdict ? "satisfied" : "violated");
    for (const auto& [name, verdict] : trace.embedded_verdicts) {
      if (name == t.name && verdict != t.verdict) {
        std::cerr << "error: recomputed verdict for " << name
                  << " disagrees with the embedded one\n";
        rc = 1;
      }
    }
  }
  return rc;
}

int cmd_plot(const CommonOpts& opts, const std::string& csv_path) {
  auto sc = load_with_overrides(opts);
  auto cs = scenario::compile(sc);
  const std::string path =
      csv_path.empty() ? (fs::path(sc.out_dir) / "trace.csv").string()
                       : csv_path;
  auto trace = scenario::read_trace_csv(path);
  const fs::path dir(opts.out_dir.value_or(sc.out_dir));
  fs::create_directories(dir);
  write_plots(cs, trace.trajectory, dir);
  std::cout << "plots written to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL task barriers for leader-follower networks"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string all_dir, csv_path;
  std::optional<double> delta_override;
  std::optional<int> samples_override;

  auto add_common = [&](CLI::App* cmd, bool scenario_required) {
    auto* s = cmd->add_option("--scenario", opts.scenario_path,
                              "scenario file (JSON)");
    if (scenario_required) s->required();
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--dt", opts.dt, "integration step override [s]");
    cmd->add_option("--seed", opts.seed, "seed for delta-estimation sampling");
    cmd->add_flag("--svg", opts.force_svg, "emit SVG plots");
  };

  auto* run = app.add_subcommand("run", "simulate a scenario and emit trace + report");
  add_common(run, false);
  run->add_option("--all", all_dir, "run every *.json scenario in a directory");

  auto* certify = app.add_subcommand("certify", "print the fixed-time certificate table");
  add_common(certify, true);
  certify->add_option("--delta", delta_override, "residual bound override");
  certify->add_option("--samples", samples_override, "delta estimation samples");

  auto* check = app.add_subcommand("check", "re-evaluate STL verdicts on a saved trace");
  add_common(check, true);
  check->add_option("--csv", csv_path, "trace file")->required();

  auto* plot = app.add_subcommand("plot", "render SVG plots from a saved trace");
  add_common(plot, true);
  plot->add_option("--csv", csv_path, "trace file (default: <out>/trace.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (all_dir.empty() && opts.scenario_path.empty()) {
        std::cerr << "error: run needs --scenario or --all\n";
        return 1;
      }
      return cmd_run(opts, all_dir);
    }
    if (certify->parsed()) return cmd_certify(opts, delta_override, samples_override);
    if (check->parsed()) return cmd_check(opts, csv_path);
    if (plot->parsed()) return cmd_plot(opts, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
