// Command-line front end. Everything goes through the C interface.
#include <bpl/bpl.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu;
  std::optional<double> tstar;
  std::vector<std::string> snapshots;
};

int exit_for(bpl_status st) {
  if (st == BPL_ERR_BLOWUP || st == BPL_ERR_CFL) return BPL_EXIT_BLOWUP;
  return BPL_EXIT_USAGE;
}

int report_error(bpl_status st, const char* what) {
  std::fprintf(stderr, "error (%s): %s: %s\n", bpl_status_name(st), what, bpl_last_error());
  if (st == BPL_ERR_BLOWUP && bpl_last_error_time() >= 0.0)
    std::fprintf(stderr, "blowup detected at t = %.6g\n", bpl_last_error_time());
  return exit_for(st);
}

std::optional<int> env_threads() {
  const char* v = std::getenv("BPL_THREADS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    std::fprintf(stderr, "warning: ignoring BPL_THREADS='%s'\n", v);
    return std::nullopt;
  }
  return static_cast<int>(n);
}

// Loads the config and applies command-line overrides.
bpl_status make_config(const Options& o, const char* required, bpl_config** cfg) {
  bpl_status st = o.config.empty() ? bpl_config_create_default(cfg) : bpl_config_load(o.config.c_str(), required, cfg);
  if (st != BPL_OK) return st;
  const std::optional<int> threads = o.threads ? o.threads : env_threads();
  if (threads && (st = bpl_config_set_threads(*cfg, *threads)) != BPL_OK) return st;
  if (o.seed && (st = bpl_config_set_seed(*cfg, *o.seed)) != BPL_OK) return st;
  if (o.tstar && (st = bpl_config_set_t_star(*cfg, *o.tstar)) != BPL_OK) return st;
  if (!o.out.empty() && (st = bpl_config_set_out_dir(*cfg, o.out.c_str())) != BPL_OK) return st;
  return BPL_OK;
}

int cmd_run(const Options& o) {
  bpl_config* cfg = nullptr;
  bpl_status st = make_config(o, nullptr, &cfg);
  if (st == BPL_OK && o.mu) st = bpl_config_set_mu(cfg, *o.mu);
  if (st != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "configuration");
  }
  bpl_run* run = nullptr;
  if ((st = bpl_run_execute(cfg, &run)) != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "run");
  }
  bpl_run_summary s{};
  bpl_run_summarize(run, &s);
  std::printf("run: n=%d t=%.6g steps=%zu snapshots=%zu |omega|_inf=%.6g\n", s.n, s.t_end, s.steps, s.snapshots,
              s.omega_linf);
  std::printf("monitors: %zu channels, %zu violation(s); %zu probe records\n", s.monitor_channels, s.violations,
              s.probe_records);
  int code = BPL_EXIT_OK;
  st = bpl_run_write(run, cfg, bpl_config_out_dir(cfg), &code);
  if (st != BPL_OK) code = report_error(st, "writing report");
  else
    std::printf("report written to %s\n", bpl_config_out_dir(cfg));
  bpl_run_free(run);
  bpl_config_free(cfg);
  return code;
}

int cmd_pair(const Options& o) {
  bpl_config* cfg = nullptr;
  bpl_status st = make_config(o, nullptr, &cfg);
  if (st != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "configuration");
  }
  bpl_pair* pair = nullptr;
  if ((st = bpl_pair_execute(cfg, *o.mu, &pair)) != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "pair");
  }
  const size_t rows = bpl_pair_row_count(pair);
  for (size_t i = 0; i < rows; ++i) {
    bpl_pair_row r{};
    bpl_pair_row_at(pair, i, &r);
    if (r.t == bpl_config_t_star(cfg))
      std::printf("t*=%.6g mu=%.3g p=%g: Pi=%.6e omega=%.6e flow=%.6e\n", r.t, r.mu, r.p, r.pi, r.omega, r.flow);
  }
  int code = BPL_EXIT_OK;
  st = bpl_pair_write(pair, cfg, bpl_config_out_dir(cfg), &code);
  if (st != BPL_OK) code = report_error(st, "writing report");
  bpl_pair_free(pair);
  bpl_config_free(cfg);
  return code;
}

int cmd_sweep(const Options& o) {
  bpl_config* cfg = nullptr;
  bpl_status st = make_config(o, "sweep", &cfg);
  if (st != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "configuration");
  }
  bpl_sweep* sweep = nullptr;
  if ((st = bpl_sweep_execute(cfg, &sweep)) != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "sweep");
  }
  for (size_t i = 0; i < bpl_sweep_report_count(sweep); ++i) {
    bpl_rate_summary r{};
    bpl_sweep_report_at(sweep, i, &r);
    static const char* names[] = {"Pi", "omega_diff", "flow_diff"};
    std::printf("%-10s p=%-4g slope=%.4f theory=%.4f (threshold %.4f) used=%zu/%zu %s\n", names[r.metric], r.p, r.slope,
                r.theory, 0.95 * r.theory, r.points_used, r.points, r.pass ? "PASS" : "FAIL");
  }
  int code = BPL_EXIT_OK;
  const bpl_status write_st = bpl_sweep_write(sweep, cfg, bpl_config_out_dir(cfg), &code);
  char* msg = nullptr;
  double t_fail = -1.0;
  const bpl_status fail_st = bpl_sweep_failure(sweep, &msg, &t_fail);
  if (fail_st != BPL_OK) {
    std::fprintf(stderr, "sweep aborted (%s): %s\n", bpl_status_name(fail_st), msg != nullptr ? msg : "");
    if (t_fail >= 0.0) std::fprintf(stderr, "blowup detected at t = %.6g\n", t_fail);
    code = exit_for(fail_st) == BPL_EXIT_BLOWUP ? BPL_EXIT_BLOWUP : BPL_EXIT_SCIENTIFIC;
  }
  bpl_string_free(msg);
  if (write_st != BPL_OK) code = report_error(write_st, "writing report");
  else
    std::printf("report written to %s\n", bpl_config_out_dir(cfg));
  bpl_sweep_free(sweep);
  bpl_config_free(cfg);
  return code;
}

int cmd_analyze(const Options& o) {
  bpl_config* cfg = nullptr;
  bpl_status st = make_config(o, nullptr, &cfg);
  if (st != BPL_OK) {
    bpl_config_free(cfg);
    return report_error(st, "configuration");
  }
  std::vector<const char*> paths;
  for (const std::string& s : o.snapshots) paths.push_back(s.c_str());
  int code = BPL_EXIT_OK;
  st = bpl_analyze(paths.data(), paths.size(), cfg, bpl_config_out_dir(cfg), &code);
  if (st != BPL_OK) code = report_error(st, "analyze");
  else
    std::printf("analyzed %zu snapshot(s); report written to %s\n", paths.size(), bpl_config_out_dir(cfg));
  bpl_config_free(cfg);
  return code;
}

int cmd_selftest(const Options& o) {
  const std::string dir = o.out.empty() ? "bpl_selftest" : o.out;
  size_t passed = 0, failed = 0;
  const bpl_status st = bpl_selftest(
      dir.c_str(),
      [](const char* name, int pass, const char* detail, void*) {
        std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", name, detail);
        std::fflush(stdout);
      },
      nullptr, &passed, &failed);
  if (st != BPL_OK) return report_error(st, "selftest");
  std::printf("selftest: %zu passed, %zu failed\n", passed, failed);
  return failed == 0 ? BPL_EXIT_OK : BPL_EXIT_SCIENTIFIC;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boussinesq patch lab: runs, viscous/inviscid pairs and inviscid-limit rate sweeps"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file (INI)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides [output] dir)");
    sub->add_option("--threads", o.threads, "worker threads (fallback: BPL_THREADS)")->check(CLI::Range(1, 1024));
    sub->add_option("--seed", o.seed, "seed for all randomness (default 42)");
    sub->add_option("--tstar", o.tstar, "evaluation time t* for pairs and sweeps");
  };

  CLI::App* run = app.add_subcommand("run", "single run with monitors, probes and geometry");
  common(run);
  run->add_option("--mu", o.mu, "viscosity override");
  CLI::App* pair = app.add_subcommand("pair", "one viscosity against the inviscid reference");
  common(pair);
  pair->add_option("--mu", o.mu, "viscosity of the viscous run")->required();
  CLI::App* sweep = app.add_subcommand("sweep", "inviscid-limit rate study over [sweep] mu_list");
  common(sweep);
  CLI::App* analyze = app.add_subcommand("analyze", "recompute norms, monitors and probes from snapshots");
  common(analyze);
  analyze->add_option("snapshots", o.snapshots, "snapshot files in time order")->required()->check(CLI::ExistingFile);
  CLI::App* selftest = app.add_subcommand("selftest", "quick built-in example suite");
  selftest->add_option("--out", o.out, "scratch directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? BPL_EXIT_OK : BPL_EXIT_USAGE;
  }
  if (run->parsed()) return cmd_run(o);
  if (pair->parsed()) return cmd_pair(o);
  if (sweep->parsed()) return cmd_sweep(o);
  if (analyze->parsed()) return cmd_analyze(o);
  return cmd_selftest(o);
}
