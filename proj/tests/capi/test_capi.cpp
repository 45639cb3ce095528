#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bpl/bpl.h>
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>

namespace fs = std::filesystem;

namespace {

const char* kSmall = R"([grid]
n = 32
delta = 0.4
[solver]
t_end = 0.1
lattice_n = 8
contour_samples = 512
tangency_bound = 0.1
[sweep]
mu_list = 1e-1, 1e-2, 1e-3, 1e-4
t_star = 0.1
[output]
snapshots = true
)";

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bpl_capi_" + name);
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("status codes and per-thread errors") {
  bpl_config* cfg = nullptr;
  CHECK(bpl_config_parse("[solver]\nmu = -1\n", nullptr, &cfg) == BPL_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(bpl_last_error()).find("viscosity") != std::string::npos);
  CHECK(std::string(bpl_status_name(BPL_ERR_BAD_MAGIC)) == "bad_magic");

  // Another thread sees its own message.
  std::string other;
  std::thread th([&] {
    bpl_config* c = nullptr;
    bpl_config_parse("[grid]\nbogus = 1\n", nullptr, &c);
    other = bpl_last_error();
  });
  th.join();
  CHECK(other.find("bogus") != std::string::npos);
  CHECK(std::string(bpl_last_error()).find("viscosity") != std::string::npos);

  CHECK(bpl_config_parse(nullptr, nullptr, &cfg) == BPL_ERR_INVALID_ARGUMENT);
  CHECK(bpl_config_parse("[grid]\nn = 64\n", "sweep", &cfg) == BPL_ERR_CONFIG);
  CHECK(std::string(bpl_last_error()).find("missing required section") != std::string::npos);
  bpl_config_free(nullptr);
  bpl_run_free(nullptr);
}

TEST_CASE("config overrides and echo") {
  bpl_config* cfg = nullptr;
  REQUIRE(bpl_config_create_default(&cfg) == BPL_OK);
  CHECK(bpl_config_set_mu(cfg, -1.0) == BPL_ERR_CONFIG);
  CHECK(bpl_config_set_threads(cfg, 0) == BPL_ERR_CONFIG);
  CHECK(bpl_config_set_t_star(cfg, 0.0) == BPL_ERR_CONFIG);
  CHECK(bpl_config_set_t_star(cfg, 0.5) == BPL_OK);
  CHECK(bpl_config_t_star(cfg) == 0.5);
  CHECK(bpl_config_set_seed(cfg, 9) == BPL_OK);
  CHECK(bpl_config_set_out_dir(cfg, "elsewhere") == BPL_OK);
  CHECK(std::string(bpl_config_out_dir(cfg)) == "elsewhere");
  char* text = nullptr;
  REQUIRE(bpl_config_to_text(cfg, &text) == BPL_OK);
  const std::string s(text);
  bpl_string_free(text);
  CHECK(s.find("seed = 9") != std::string::npos);
  CHECK(s.find("t_star = 0.5") != std::string::npos);
  bpl_config* again = nullptr;
  CHECK(bpl_config_parse(s.c_str(), "sweep", &again) == BPL_OK);
  bpl_config_free(again);
  bpl_config_free(cfg);
}

TEST_CASE("run, snapshot round trip and analyze") {
  bpl_config* cfg = nullptr;
  REQUIRE(bpl_config_parse(kSmall, nullptr, &cfg) == BPL_OK);
  bpl_run* run = nullptr;
  REQUIRE(bpl_run_execute(cfg, &run) == BPL_OK);
  bpl_run_summary s{};
  REQUIRE(bpl_run_summarize(run, &s) == BPL_OK);
  CHECK(s.n == 32);
  CHECK(s.snapshots == 3);
  CHECK(s.t_end == doctest::Approx(0.1));
  CHECK(s.violations == 0);
  CHECK(s.probe_records > 0);

  const std::string dir = scratch("run");
  int code = -1;
  REQUIRE(bpl_run_write(run, cfg, dir.c_str(), &code) == BPL_OK);
  CHECK(code == BPL_EXIT_OK);
  CHECK(fs::exists(fs::path(dir) / "config.ini"));
  CHECK(fs::exists(fs::path(dir) / "snapshots" / "snap_0002.bin"));

  bpl_state* final_state = nullptr;
  REQUIRE(bpl_run_final_state(run, &final_state) == BPL_OK);
  bpl_state* loaded = nullptr;
  const std::string snap = (fs::path(dir) / "snapshots" / "snap_0002.bin").string();
  REQUIRE(bpl_snapshot_load(snap.c_str(), BPL_KAPPA_SIN, &loaded) == BPL_OK);
  int n = 0;
  double t = 0, mu = 0, eps = 0;
  REQUIRE(bpl_state_info(loaded, &n, &t, &mu, &eps) == BPL_OK);
  CHECK(n == 32);
  CHECK(eps == 0.1);
  bool same = true;
  for (int i = 0; i < n * n; ++i)
    same = same && bpl_state_omega(loaded)[i] == bpl_state_omega(final_state)[i] &&
           bpl_state_theta(loaded)[i] == bpl_state_theta(final_state)[i];
  CHECK(same);

  const std::string paths_s[3] = {(fs::path(dir) / "snapshots" / "snap_0000.bin").string(),
                                  (fs::path(dir) / "snapshots" / "snap_0001.bin").string(), snap};
  const char* paths[3] = {paths_s[0].c_str(), paths_s[1].c_str(), paths_s[2].c_str()};
  const std::string adir = scratch("analyze");
  CHECK(bpl_analyze(paths, 3, cfg, adir.c_str(), &code) == BPL_OK);
  CHECK(code == BPL_EXIT_OK);
  CHECK(fs::exists(fs::path(adir) / "norms.csv"));
  const char* reversed[2] = {paths[1], paths[0]};
  CHECK(bpl_analyze(reversed, 2, cfg, adir.c_str(), &code) == BPL_ERR_INVALID_ARGUMENT);

  CHECK(bpl_snapshot_load((fs::path(dir) / "config.ini").c_str(), BPL_KAPPA_SIN, &loaded) == BPL_ERR_BAD_MAGIC);
  bpl_state_free(loaded);
  bpl_state_free(final_state);
  bpl_run_free(run);
  bpl_config_free(cfg);
}

TEST_CASE("pair and sweep") {
  bpl_config* cfg = nullptr;
  REQUIRE(bpl_config_parse(kSmall, "sweep", &cfg) == BPL_OK);
  bpl_pair* pair = nullptr;
  REQUIRE(bpl_pair_execute(cfg, 1e-2, &pair) == BPL_OK);
  REQUIRE(bpl_pair_row_count(pair) == 3 * 2);
  bpl_pair_row r{};
  REQUIRE(bpl_pair_row_at(pair, 5, &r) == BPL_OK);
  CHECK(r.t == doctest::Approx(0.1));
  CHECK(r.pi == r.velocity + r.theta);
  CHECK(r.omega > 0.0);
  CHECK(bpl_pair_row_at(pair, 6, &r) == BPL_ERR_INVALID_ARGUMENT);
  bpl_pair_free(pair);

  bpl_sweep* sweep = nullptr;
  REQUIRE(bpl_sweep_execute(cfg, &sweep) == BPL_OK);
  CHECK(bpl_sweep_failure(sweep, nullptr, nullptr) == BPL_OK);
  REQUIRE(bpl_sweep_report_count(sweep) == 5);
  bpl_rate_summary rs{};
  REQUIRE(bpl_sweep_report_at(sweep, 4, &rs) == BPL_OK);
  CHECK(rs.metric == BPL_METRIC_FLOW);
  CHECK(std::isinf(rs.p));
  CHECK(rs.points == 4);
  char* json = nullptr;
  REQUIRE(bpl_sweep_report_json(sweep, 0, &json) == BPL_OK);
  CHECK(std::string(json).find("\"metric\": \"Pi\"") != std::string::npos);
  bpl_string_free(json);
  const std::string dir = scratch("sweep");
  int code = -1;
  REQUIRE(bpl_sweep_write(sweep, cfg, dir.c_str(), &code) == BPL_OK);
  CHECK((code == BPL_EXIT_OK || code == BPL_EXIT_SCIENTIFIC));
  CHECK(fs::exists(fs::path(dir) / "rates.json"));
  CHECK(fs::exists(fs::path(dir) / "pairs.csv"));
  bpl_sweep_free(sweep);
  bpl_config_free(cfg);
}

TEST_CASE("a blowup inside a sweep is reported with partial results") {
  bpl_config* cfg = nullptr;
  REQUIRE(bpl_config_parse("[grid]\nn = 32\n[theta0]\namplitude = 50\n[solver]\ndt_policy = fixed\ndt = 0.5\n"
                           "track_geometry = false\nprobes = false\n[sweep]\nt_star = 1\nmeasure_floor = false\n",
                           nullptr, &cfg) == BPL_OK);
  bpl_sweep* sweep = nullptr;
  REQUIRE(bpl_sweep_execute(cfg, &sweep) == BPL_OK);
  char* msg = nullptr;
  double t = -1.0;
  CHECK(bpl_sweep_failure(sweep, &msg, &t) == BPL_ERR_BLOWUP);
  CHECK(t > 0.0);
  CHECK(std::string(msg).find("vorticity") != std::string::npos);
  bpl_string_free(msg);
  const std::string dir = scratch("blowup");
  int code = -1;
  REQUIRE(bpl_sweep_write(sweep, cfg, dir.c_str(), &code) == BPL_OK);
  CHECK(code == BPL_EXIT_SCIENTIFIC);
  CHECK(fs::exists(fs::path(dir) / "failure.json"));
  bpl_sweep_free(sweep);
  bpl_config_free(cfg);
}
