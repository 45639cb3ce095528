#include "bpl/bpl.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <iomanip>
#include <new>
#include <sstream>

#include "analysis/monitors.hpp"
#include "analysis/probes.hpp"
#include "common/error.hpp"
#include "harness/limit.hpp"
#include "harness/run.hpp"
#include "lab/config.hpp"
#include "lab/report.hpp"
#include "lab/selftest.hpp"
#include "lab/snapshot.hpp"

struct bpl_config {
  bpl::LabConfig c;
};
struct bpl_run {
  bpl::Trajectory tr;
};
struct bpl_pair {
  std::vector<bpl::DiffRecord> records;
  std::vector<bpl_pair_row> rows;
};
struct bpl_sweep {
  bpl::SweepResult r;
};
struct bpl_state {
  bpl::State s;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_error_time = -1.0;

bpl_status set_error(bpl_status st, const std::string& what, double t = -1.0) {
  g_last_error = what;
  g_last_error_time = t;
  return st;
}

// Runs `body`, translating exceptions into a status and the thread's error.
template <class F>
bpl_status guard(F&& body) {
  try {
    body();
    return BPL_OK;
  } catch (const bpl::BlowupError& e) {
    return set_error(static_cast<bpl_status>(e.code()), e.what(), e.time());
  } catch (const bpl::Error& e) {
    return set_error(static_cast<bpl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BPL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BPL_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) bpl::fail(bpl::ErrorCode::InvalidArgument, what);
}

std::vector<std::string> split_sections(const char* required) {
  std::vector<std::string> out;
  if (required == nullptr) return out;
  std::stringstream ss(required);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

// Pairs and sweeps share the run settings but stop at t*.
bpl::RunConfig pair_run_config(const bpl::LabConfig& c) {
  bpl::RunConfig r = c.run;
  r.t_end = c.sweep.t_star;
  r.p_list = c.sweep.p_list;
  r.mu = 0.0;
  return r;
}

void write_config_echo(const bpl_config* cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  bpl::write_text_file((std::filesystem::path(dir) / "config.ini").string(), bpl::config_to_text(cfg->c));
}

}  // namespace

extern "C" {

const char* bpl_version(void) { return "1.0.0"; }
const char* bpl_last_error(void) { return g_last_error.c_str(); }
double bpl_last_error_time(void) { return g_last_error_time; }
void bpl_string_free(char* s) { std::free(s); }

const char* bpl_status_name(bpl_status status) {
  switch (status) {
    case BPL_OK: return "ok";
    case BPL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BPL_ERR_CONFIG: return "config";
    case BPL_ERR_IO: return "io";
    case BPL_ERR_BAD_MAGIC: return "bad_magic";
    case BPL_ERR_VERSION_MISMATCH: return "version_mismatch";
    case BPL_ERR_TRUNCATED: return "truncated";
    case BPL_ERR_MEAN_NOT_ZERO: return "mean_not_zero";
    case BPL_ERR_OUT_OF_BAND: return "out_of_band";
    case BPL_ERR_GRID_MISMATCH: return "grid_mismatch";
    case BPL_ERR_BLOWUP: return "blowup";
    case BPL_ERR_GEOMETRY: return "geometry";
    case BPL_ERR_DEGENERATE: return "degenerate";
    case BPL_ERR_SAMPLER_TIME: return "sampler_time";
    case BPL_ERR_CFL: return "cfl";
    case BPL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

bpl_status bpl_config_create_default(bpl_config** out) {
  return guard([&] {
    require(out != nullptr, "out must not be null");
    *out = new bpl_config{bpl::parse_config("")};
  });
}

bpl_status bpl_config_parse(const char* text, const char* required, bpl_config** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "text and out must not be null");
    *out = new bpl_config{bpl::parse_config(text, split_sections(required))};
  });
}

bpl_status bpl_config_load(const char* path, const char* required, bpl_config** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path and out must not be null");
    *out = new bpl_config{bpl::load_config(path, split_sections(required))};
  });
}

void bpl_config_free(bpl_config* cfg) { delete cfg; }

bpl_status bpl_config_set_seed(bpl_config* cfg, uint64_t seed) {
  return guard([&] {
    require(cfg != nullptr, "config must not be null");
    cfg->c.run.seed = seed;
  });
}

bpl_status bpl_config_set_mu(bpl_config* cfg, double mu) {
  return guard([&] {
    require(cfg != nullptr, "config must not be null");
    if (!(mu >= 0.0)) bpl::fail(bpl::ErrorCode::Config, "viscosity must be >= 0");
    cfg->c.run.mu = mu;
  });
}

bpl_status bpl_config_set_t_star(bpl_config* cfg, double t_star) {
  return guard([&] {
    require(cfg != nullptr, "config must not be null");
    bpl::SweepConfig s = cfg->c.sweep;
    s.t_star = t_star;
    bpl::validate_sweep(s);
    cfg->c.sweep = s;
  });
}

bpl_status bpl_config_set_threads(bpl_config* cfg, int threads) {
  return guard([&] {
    require(cfg != nullptr, "config must not be null");
    if (threads < 1) bpl::fail(bpl::ErrorCode::Config, "threads must be >= 1");
    cfg->c.sweep.threads = threads;
  });
}

bpl_status bpl_config_set_out_dir(bpl_config* cfg, const char* dir) {
  return guard([&] {
    require(cfg != nullptr && dir != nullptr && *dir != '\0', "config and a non-empty dir are required");
    cfg->c.output.dir = dir;
  });
}

const char* bpl_config_out_dir(const bpl_config* cfg) { return cfg == nullptr ? "" : cfg->c.output.dir.c_str(); }

double bpl_config_t_star(const bpl_config* cfg) { return cfg == nullptr ? 0.0 : cfg->c.sweep.t_star; }

bpl_status bpl_config_to_text(const bpl_config* cfg, char** out_text) {
  return guard([&] {
    require(cfg != nullptr && out_text != nullptr, "config and out must not be null");
    *out_text = dup_string(bpl::config_to_text(cfg->c));
  });
}

bpl_status bpl_run_execute(const bpl_config* cfg, bpl_run** out) {
  return guard([&] {
    require(cfg != nullptr && out != nullptr, "config and out must not be null");
    *out = new bpl_run{bpl::run(cfg->c.run)};
  });
}

void bpl_run_free(bpl_run* run) { delete run; }

bpl_status bpl_run_summarize(const bpl_run* run, bpl_run_summary* out) {
  return guard([&] {
    require(run != nullptr && out != nullptr, "run and out must not be null");
    const bpl::Trajectory& tr = run->tr;
    out->n = tr.states.empty() ? 0 : tr.states.back().grid().n();
    out->snapshots = tr.times.size();
    out->steps = tr.dt_schedule.size();
    out->t_end = tr.times.empty() ? 0.0 : tr.times.back();
    out->omega_linf = tr.norms.empty() ? 0.0 : tr.norms.back().omega_linf;
    out->monitor_channels = tr.monitors.channels.size();
    out->violations = tr.monitors.violation_count();
    out->probe_records = tr.probes.size();
  });
}

bpl_status bpl_run_final_state(const bpl_run* run, bpl_state** out) {
  return guard([&] {
    require(run != nullptr && out != nullptr, "run and out must not be null");
    require(!run->tr.states.empty(), "run kept no states");
    *out = new bpl_state{run->tr.states.back()};
  });
}

bpl_status bpl_run_write(const bpl_run* run, const bpl_config* cfg, const char* out_dir, int* exit_code) {
  return guard([&] {
    require(run != nullptr && cfg != nullptr && out_dir != nullptr, "run, config and out_dir must not be null");
    namespace fs = std::filesystem;
    bpl::ReportInputs in;
    in.monitors = &run->tr.monitors;
    in.probes = &run->tr.probes;
    in.trajectory = &run->tr;
    in.plots = cfg->c.output.plots;
    const int code = bpl::emit_report(in, out_dir);
    write_config_echo(cfg, out_dir);
    if (cfg->c.output.snapshots) {
      const fs::path dir = fs::path(out_dir) / "snapshots";
      fs::create_directories(dir);
      for (std::size_t k = 0; k < run->tr.states.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(4) << std::setfill('0') << k << ".bin";
        bpl::save_snapshot(run->tr.states[k], (dir / name.str()).string());
      }
    }
    if (exit_code != nullptr) *exit_code = code;
  });
}

bpl_status bpl_pair_execute(const bpl_config* cfg, double mu, bpl_pair** out) {
  return guard([&] {
    require(cfg != nullptr && out != nullptr, "config and out must not be null");
    auto* p = new bpl_pair{bpl::run_pair(pair_run_config(cfg->c), mu), {}};
    for (const bpl::DiffRecord& d : p->records)
      for (std::size_t i = 0; i < d.p_list.size(); ++i)
        p->rows.push_back({d.t, d.mu, d.p_list[i], d.velocity[i], d.theta[i], d.pi[i], d.omega[i],
                           d.has_flow ? d.flow : std::nan("")});
    *out = p;
  });
}

void bpl_pair_free(bpl_pair* pair) { delete pair; }

size_t bpl_pair_row_count(const bpl_pair* pair) { return pair == nullptr ? 0 : pair->rows.size(); }

bpl_status bpl_pair_row_at(const bpl_pair* pair, size_t index, bpl_pair_row* out) {
  return guard([&] {
    require(pair != nullptr && out != nullptr, "pair and out must not be null");
    require(index < pair->rows.size(), "row index out of range");
    *out = pair->rows[index];
  });
}

bpl_status bpl_pair_write(const bpl_pair* pair, const bpl_config* cfg, const char* out_dir, int* exit_code) {
  return guard([&] {
    require(pair != nullptr && cfg != nullptr && out_dir != nullptr, "pair, config and out_dir must not be null");
    bpl::ReportInputs in;
    in.pair = &pair->records;
    in.plots = cfg->c.output.plots;
    const int code = bpl::emit_report(in, out_dir);
    write_config_echo(cfg, out_dir);
    if (exit_code != nullptr) *exit_code = code;
  });
}

bpl_status bpl_sweep_execute(const bpl_config* cfg, bpl_sweep** out) {
  return guard([&] {
    require(cfg != nullptr && out != nullptr, "config and out must not be null");
    *out = new bpl_sweep{bpl::sweep_rates(pair_run_config(cfg->c), cfg->c.sweep)};
  });
}

void bpl_sweep_free(bpl_sweep* sweep) { delete sweep; }

size_t bpl_sweep_report_count(const bpl_sweep* sweep) { return sweep == nullptr ? 0 : sweep->r.reports.size(); }

bpl_status bpl_sweep_report_at(const bpl_sweep* sweep, size_t index, bpl_rate_summary* out) {
  return guard([&] {
    require(sweep != nullptr && out != nullptr, "sweep and out must not be null");
    require(index < sweep->r.reports.size(), "report index out of range");
    const bpl::RateReport& r = sweep->r.reports[index];
    out->metric = static_cast<bpl_metric>(r.metric);
    out->p = r.p;
    out->t_star = r.t_star;
    out->slope = r.slope;
    out->theory = r.theory;
    out->residual = r.residual;
    out->floor = r.floor;
    out->points = r.points.size();
    out->points_used = 0;
    for (const bpl::RatePoint& p : r.points) out->points_used += p.used ? 1 : 0;
    out->monotone = r.monotone ? 1 : 0;
    out->pass = r.pass ? 1 : 0;
  });
}

bpl_status bpl_sweep_report_json(const bpl_sweep* sweep, size_t index, char** out_json) {
  return guard([&] {
    require(sweep != nullptr && out_json != nullptr, "sweep and out must not be null");
    require(index < sweep->r.reports.size(), "report index out of range");
    *out_json = dup_string(bpl::rate_report_json(sweep->r.reports[index]));
  });
}

bpl_status bpl_sweep_failure(const bpl_sweep* sweep, char** out_message, double* out_time) {
  if (sweep == nullptr) return set_error(BPL_ERR_INVALID_ARGUMENT, "sweep must not be null");
  if (!sweep->r.failed) return BPL_OK;
  if (out_message != nullptr) *out_message = dup_string(sweep->r.failure_message);
  if (out_time != nullptr) *out_time = sweep->r.failure_time;
  return static_cast<bpl_status>(sweep->r.failure_code);
}

bpl_status bpl_sweep_write(const bpl_sweep* sweep, const bpl_config* cfg, const char* out_dir, int* exit_code) {
  return guard([&] {
    require(sweep != nullptr && cfg != nullptr && out_dir != nullptr, "sweep, config and out_dir must not be null");
    bpl::ReportInputs in;
    in.sweep = &sweep->r;
    in.plots = cfg->c.output.plots;
    const int code = bpl::emit_report(in, out_dir);
    write_config_echo(cfg, out_dir);
    if (exit_code != nullptr) *exit_code = code;
  });
}

bpl_status bpl_snapshot_load(const char* path, bpl_kappa_kind kappa_hint, bpl_state** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path and out must not be null");
    require(kappa_hint >= BPL_KAPPA_CONSTANT && kappa_hint <= BPL_KAPPA_TANH, "unknown kappa kind");
    *out = new bpl_state{bpl::load_snapshot(path, static_cast<bpl::KappaKind>(kappa_hint))};
  });
}

bpl_status bpl_snapshot_save(const bpl_state* state, const char* path) {
  return guard([&] {
    require(state != nullptr && path != nullptr, "state and path must not be null");
    bpl::save_snapshot(state->s, path);
  });
}

void bpl_state_free(bpl_state* state) { delete state; }

bpl_status bpl_state_info(const bpl_state* state, int* n, double* t, double* mu, double* epsilon0) {
  return guard([&] {
    require(state != nullptr, "state must not be null");
    if (n != nullptr) *n = state->s.grid().n();
    if (t != nullptr) *t = state->s.t;
    if (mu != nullptr) *mu = state->s.mu;
    if (epsilon0 != nullptr) *epsilon0 = state->s.kappa.epsilon0;
  });
}

const double* bpl_state_omega(const bpl_state* state) {
  return state == nullptr ? nullptr : state->s.omega.values().data();
}

const double* bpl_state_theta(const bpl_state* state) {
  return state == nullptr ? nullptr : state->s.theta.values().data();
}

bpl_status bpl_analyze(const char* const* paths, size_t count, const bpl_config* cfg, const char* out_dir,
                       int* exit_code) {
  return guard([&] {
    require(paths != nullptr && cfg != nullptr && out_dir != nullptr, "paths, config and out_dir must not be null");
    require(count > 0, "analyze needs at least one snapshot");
    const std::vector<double>& p_list = cfg->c.run.p_list;
    std::vector<bpl::State> states;
    for (size_t i = 0; i < count; ++i) {
      require(paths[i] != nullptr, "snapshot path must not be null");
      states.push_back(bpl::load_snapshot(paths[i], cfg->c.run.kappa.kind));
      if (i > 0 && !(states[i].t > states[i - 1].t))
        bpl::fail(bpl::ErrorCode::InvalidArgument, "snapshots must be in increasing time order");
    }
    bpl::Trajectory tr;
    tr.p_list = p_list;
    for (const bpl::State& s : states) {
      tr.times.push_back(s.t);
      tr.norms.push_back(bpl::snapshot_norms(s, p_list));
      for (double p : p_list)
        if (std::isfinite(p))
          for (bpl::ProbeRecord& r : bpl::bernstein_probe(s.omega, p, s.t)) tr.probes.push_back(r);
      tr.probes.push_back(bpl::gagliardo_nirenberg_probe(s.theta, 4.0, s.t));
      tr.probes.push_back(bpl::interp_delta_v_probe(s.omega, 4.0, 0.25, s.t));
    }
    tr.monitors = bpl::monitor_apriori(tr.norms, p_list, states.front().mu, states.front().kappa.kappa0());
    bpl::ReportInputs in;
    in.monitors = &tr.monitors;
    in.probes = &tr.probes;
    in.trajectory = &tr;
    in.plots = cfg->c.output.plots;
    const int code = bpl::emit_report(in, out_dir);
    write_config_echo(cfg, out_dir);
    if (exit_code != nullptr) *exit_code = code;
  });
}

bpl_status bpl_selftest(const char* scratch_dir, bpl_selftest_callback callback, void* user, size_t* passed,
                        size_t* failed) {
  return guard([&] {
    require(scratch_dir != nullptr, "scratch_dir must not be null");
    const auto results = bpl::run_selftest(scratch_dir, [&](const bpl::SelfTestResult& r) {
      if (callback != nullptr) callback(r.name.c_str(), r.pass ? 1 : 0, r.detail.c_str(), user);
    });
    size_t ok = 0;
    for (const auto& r : results) ok += r.pass ? 1 : 0;
    if (passed != nullptr) *passed = ok;
    if (failed != nullptr) *failed = results.size() - ok;
  });
}

}  // extern "C"
