#include "lab/selftest.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "common/error.hpp"
#include "harness/limit.hpp"
#include "harness/run.hpp"
#include "lab/config.hpp"
#include "lab/report.hpp"
#include "lab/snapshot.hpp"
#include "spectral/littlewood_paley.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

ScalarField random_smooth(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = normal(rng);
  return remove_mean(dealias(f));
}

RunConfig quick_config() {
  RunConfig c;
  c.n = 64;
  c.t_end = 0.2;
  c.lattice_n = 8;
  c.contour_samples = 512;
  c.probes = false;
  c.bounds.tangency = 0.1;
  return c;
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

SelfTestResult check(const std::string& name, double value, double bound) {
  return {name, value <= bound, sci(value) + " <= " + sci(bound)};
}

template <class F>
SelfTestResult expect_error(const std::string& name, ErrorCode code, F body) {
  try {
    body();
  } catch (const Error& e) {
    return {name, e.code() == code, e.what()};
  }
  return {name, false, "no error raised"};
}

}  // namespace

std::vector<SelfTestResult> run_selftest(const std::string& scratch_dir,
                                         const std::function<void(const SelfTestResult&)>& on_result) {
  namespace fs = std::filesystem;
  fs::create_directories(scratch_dir);
  std::vector<SelfTestResult> out;
  auto add = [&](const std::string& name, const std::function<SelfTestResult()>& body) {
    SelfTestResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r = {name, false, std::string("unexpected error: ") + e.what()};
    }
    r.name = name;
    out.push_back(r);
    if (on_result) on_result(r);
  };

  const Grid2D g(64);
  const ScalarField f = random_smooth(g, 42), h = random_smooth(g, 43);

  add("lp_reconstruction", [&] { return check("", (lp_decompose(f).reconstruct() - f).max_abs(), 1e-12); });
  add("biot_savart_divergence", [&] { return check("", divergence(biot_savart(f)).max_abs(), 1e-12); });
  add("curl_inversion", [&] { return check("", (curl(biot_savart(f)) - f).max_abs(), 1e-10); });
  add("bony_reassembly", [&] {
    const BonyParts b = bony_decompose(f, h);
    ScalarField prod(g);
    for (std::size_t i = 0; i < g.size(); ++i) prod[i] = f[i] * h[i];
    return check("", (b.paraproduct_uv + b.paraproduct_vu + b.remainder - dealias(prod)).max_abs(), 1e-10);
  });
  add("heat_single_mode", [&] {
    // ω = sin x₁ is a steady shear for Euler, so only diffusion acts.
    const ScalarField w0 = ScalarField::from_function(g, [](double x, double) { return std::sin(x); });
    State s = make_initial_state(w0, ScalarField(g), 1.0, KappaProfile::make(KappaKind::Sin, 0.1));
    for (int k = 0; k < 20; ++k) s = step(s, 0.05);
    return check("", (s.omega - w0 * std::exp(-1.0)).max_abs(), 1e-6);
  });
  add("radial_patch_stationarity", [&] {
    RunConfig c = quick_config();
    c.theta0.kind = Theta0Kind::Zero;
    c.t_end = 0.5;
    c.track_geometry = false;
    const Trajectory tr = run(c);
    const double ref = tr.states.front().omega.max_abs();
    return check("", (tr.states.back().omega - tr.states.front().omega).max_abs() / ref, 1e-3);
  });
  add("monitors_quick_benchmark", [&] {
    const Trajectory tr = run(quick_config());
    return SelfTestResult{"", !tr.monitors.any_violation(),
                          std::to_string(tr.monitors.violation_count()) + " violations over " +
                              std::to_string(tr.monitors.channels.size()) + " channels"};
  });
  add("pair_identical_runs", [&] {
    const RunConfig c = quick_config();
    double worst = 0.0;
    for (const DiffRecord& d : run_pair(c, 0.0)) {
      worst = std::max(worst, d.flow);
      for (std::size_t i = 0; i < d.p_list.size(); ++i) worst = std::max({worst, d.pi[i], d.omega[i]});
    }
    return check("", worst, 0.0);
  });
  add("snapshot_round_trip", [&] {
    State s = initial_state(quick_config());
    s.t = 0.375;
    s.theta = random_smooth(g, 44);
    const std::string path = (fs::path(scratch_dir) / "selftest_snapshot.bin").string();
    save_snapshot(s, path);
    const State r = load_snapshot(path, s.kappa.kind);
    bool same = r.t == s.t && r.mu == s.mu && r.kappa.epsilon0 == s.kappa.epsilon0;
    for (std::size_t i = 0; i < g.size(); ++i)
      same = same && std::bit_cast<std::uint64_t>(r.omega[i]) == std::bit_cast<std::uint64_t>(s.omega[i]) &&
             std::bit_cast<std::uint64_t>(r.theta[i]) == std::bit_cast<std::uint64_t>(s.theta[i]);
    return SelfTestResult{"", same, same ? "bit-identical" : "mismatch"};
  });
  add("snapshot_bad_magic", [&] {
    std::vector<unsigned char> bytes = encode_snapshot(initial_state(quick_config()));
    bytes[0] = 'X';
    return expect_error("", ErrorCode::BadMagic, [&] { decode_snapshot(bytes); });
  });
  add("snapshot_truncated", [&] {
    std::vector<unsigned char> bytes = encode_snapshot(initial_state(quick_config()));
    bytes.resize(bytes.size() - 8);
    return expect_error("", ErrorCode::Truncated, [&] { decode_snapshot(bytes); });
  });
  add("config_defaults", [&] {
    const LabConfig c = parse_config("");
    const bool ok = c.run.n == 256 && c.run.patch.radius == 0.8 && c.run.kappa.epsilon0 == 0.1 && c.run.t_end == 1.0 &&
                    c.run.resolved_delta() == 4.0 * Grid2D(256).spacing();
    return SelfTestResult{"", ok, "n, radius, delta, epsilon0, t_end"};
  });
  add("config_negative_viscosity", [&] {
    return expect_error("", ErrorCode::Config, [] { parse_config("[solver]\nmu = -1\n"); });
  });
  add("config_sweep_plan", [&] {
    const LabConfig c = parse_config("[sweep]\nmu_list = 1e-2, 3e-3, 1e-3, 3e-4, 1e-4\n");
    return SelfTestResult{"", c.sweep.mu_list.size() == 5, std::to_string(c.sweep.mu_list.size()) + " paired runs"};
  });
  add("theory_exponents", [&] {
    const bool ok = theory_exponent(RateMetric::Pi, 2.0) == 0.75 && theory_exponent(RateMetric::Pi, 4.0) == 0.625 &&
                    theory_exponent(RateMetric::Omega, 2.0) == 0.25 && theory_exponent(RateMetric::Flow, 2.0) == 0.25;
    return SelfTestResult{"", ok, "3/4, 5/8, 1/4, 1/4"};
  });
  add("empty_report", [&] {
    const std::string dir = (fs::path(scratch_dir) / "empty_report").string();
    const int code = emit_report(ReportInputs{}, dir);
    const bool files = fs::exists(fs::path(dir) / "monitors.csv") && fs::exists(fs::path(dir) / "rates.json") &&
                       fs::exists(fs::path(dir) / "sweep_summary.csv") && fs::exists(fs::path(dir) / "probes.jsonl");
    return SelfTestResult{"", code == kExitOk && files, "exit " + std::to_string(code)};
  });
  return out;
}

}  // namespace bpl
