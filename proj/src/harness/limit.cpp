#include "harness/limit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "analysis/norms.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

// Values of a 2n-grid field at the nodes it shares with the n grid.
ScalarField restrict_to(const ScalarField& fine, const Grid2D& coarse) {
  ScalarField out(coarse);
  for (int i = 0; i < coarse.n(); ++i)
    for (int j = 0; j < coarse.n(); ++j) out[coarse.at(i, j)] = fine.at(2 * i, 2 * j);
  return out;
}

double json_p(double p) { return p; }

}  // namespace

std::vector<DiffRecord> diff_series(const Trajectory& viscous, const Trajectory& inviscid, double mu,
                                    const std::vector<double>& p_list) {
  if (viscous.states.size() != inviscid.states.size() || viscous.times != inviscid.times)
    fail(ErrorCode::Internal, "paired trajectories do not share snapshot times");
  std::vector<DiffRecord> out;
  for (std::size_t k = 0; k < viscous.states.size(); ++k) {
    const State& a = viscous.states[k];
    const State& b = inviscid.states[k];
    DiffRecord d;
    d.t = a.t;
    d.mu = mu;
    d.p_list = p_list;
    const ScalarField dw = a.omega - b.omega;
    const ScalarField dth = a.theta - b.theta;
    const VelocityField dv = biot_savart(dw);
    for (double p : p_list) {
      d.velocity.push_back(lebesgue_norm(dv, p));
      d.theta.push_back(lebesgue_norm(dth, p));
      d.pi.push_back(d.velocity.back() + d.theta.back());
      d.omega.push_back(lebesgue_norm(dw, p));
    }
    if (k < viscous.flowmaps.size() && k < inviscid.flowmaps.size()) {
      d.flow = flowmap_distance(viscous.flowmaps[k], inviscid.flowmaps[k]);
      d.has_flow = true;
    }
    out.push_back(std::move(d));
  }
  return out;
}

Trajectory inviscid_reference(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.mu = 0.0;
  RunOptions o;
  o.probes = false;
  o.track_family = false;
  return run(c, o);
}

std::vector<DiffRecord> run_pair(const RunConfig& cfg, double mu, const Trajectory& reference) {
  if (!(mu >= 0.0)) fail(ErrorCode::Config, "viscosity must be >= 0");
  RunConfig c = cfg;
  c.mu = mu;
  RunOptions o;
  o.schedule = &reference.dt_schedule;
  o.probes = false;
  o.track_family = false;
  o.track_geometry = !reference.flowmaps.empty();
  const Trajectory viscous = run(c, o);
  return diff_series(viscous, reference, mu, cfg.p_list);
}

std::vector<DiffRecord> run_pair(const RunConfig& cfg, double mu) {
  return run_pair(cfg, mu, inviscid_reference(cfg));
}

std::string to_string(RateMetric m) {
  switch (m) {
    case RateMetric::Pi: return "Pi";
    case RateMetric::Omega: return "omega_diff";
    case RateMetric::Flow: return "flow_diff";
  }
  return "unknown";
}

double theory_exponent(RateMetric m, double p) {
  switch (m) {
    case RateMetric::Pi: return 0.5 + 0.5 / p;
    case RateMetric::Omega: return 0.5 / p;
    case RateMetric::Flow: return 0.25;
  }
  return 0.0;
}

void fit_rate(RateReport& r) {
  r.theory = theory_exponent(r.metric, r.p);
  // Monotonicity is judged on all points, sorted by μ.
  std::vector<RatePoint> sorted = r.points;
  std::sort(sorted.begin(), sorted.end(), [](const RatePoint& a, const RatePoint& b) { return a.mu < b.mu; });
  r.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].error < sorted[i - 1].error) r.monotone = false;

  std::vector<double> x, y;
  for (const RatePoint& p : r.points)
    if (p.used && p.error > 0.0 && p.mu > 0.0) {
      x.push_back(std::log(p.mu));
      y.push_back(std::log(p.error));
    }
  r.slope = r.intercept = r.residual = 0.0;
  r.pass = false;
  if (x.size() < 2) {
    r.note = "fewer than two usable points";
    return;
  }
  const double nx = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nx;
  my /= nx;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / nx);

  const double decades = (*std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end())) / std::log(10.0);
  if (x.size() < 4 || decades < 2.0 - 1e-9) {
    std::ostringstream os;
    os << "only " << x.size() << " points above the error floor spanning " << decades << " decades";
    r.note = os.str();
    return;
  }
  r.pass = r.slope >= 0.95 * r.theory;
  if (!r.monotone) r.note = "error not monotone in mu (possible under-resolution)";
}

void validate_sweep(const SweepConfig& sc) {
  if (sc.mu_list.size() < 4) fail(ErrorCode::Config, "sweep needs at least 4 viscosities");
  for (std::size_t i = 0; i < sc.mu_list.size(); ++i) {
    if (!(sc.mu_list[i] > 0.0)) fail(ErrorCode::Config, "sweep viscosities must be > 0");
    if (i > 0 && !(sc.mu_list[i - 1] >= 2.0 * sc.mu_list[i] * (1.0 - 1e-12)))
      fail(ErrorCode::Config, "sweep viscosities must descend by a factor >= 2");
  }
  if (!(sc.t_star > 0.0)) fail(ErrorCode::Config, "t_star must be > 0");
  if (sc.p_list.empty()) fail(ErrorCode::Config, "sweep p list must not be empty");
  for (double p : sc.p_list)
    if (!(p >= 1.0) || std::isinf(p)) fail(ErrorCode::Config, "sweep exponents must lie in [1, inf)");
  if (sc.threads < 1) fail(ErrorCode::Config, "threads must be >= 1");
  if (!(sc.floor_factor >= 1.0)) fail(ErrorCode::Config, "floor_factor must be >= 1");
}

ErrorFloor measure_error_floor(const RunConfig& cfg, const Trajectory& reference, const std::vector<double>& p_list) {
  if (reference.states.empty()) fail(ErrorCode::Internal, "error floor needs the reference states");
  RunConfig fine = cfg;
  fine.mu = 0.0;
  fine.n = 2 * cfg.n;
  fine.delta = reference.delta;
  RunOptions o;
  o.probes = false;
  o.track_family = false;
  o.track_geometry = !reference.flowmaps.empty();
  const Trajectory tf = run(fine, o);
  // The coarse partner replays the fine dt sequence so that only the grid
  // changes; paired runs share their steps, so time error is not part of the
  // noise their difference sees.
  RunConfig coarse = fine;
  coarse.n = cfg.n;
  RunOptions oc = o;
  oc.schedule = &tf.dt_schedule;
  const Trajectory tc = run(coarse, oc);

  const State& a = tc.states.back();
  const State& b = tf.states.back();
  const Grid2D& g = a.grid();
  const ScalarField dw = a.omega - restrict_to(b.omega, g);
  const ScalarField dth = a.theta - restrict_to(b.theta, g);
  const VelocityField va = biot_savart(a.omega), vb = biot_savart(b.omega);
  const VelocityField dv{va.u1 - restrict_to(vb.u1, g), va.u2 - restrict_to(vb.u2, g)};

  ErrorFloor f;
  f.p_list = p_list;
  for (double p : p_list) {
    f.pi.push_back(lebesgue_norm(dv, p) + lebesgue_norm(dth, p));
    f.omega.push_back(lebesgue_norm(dw, p));
  }
  if (!reference.flowmaps.empty()) f.flow = flowmap_distance(tc.flowmaps.back(), tf.flowmaps.back());
  f.measured = true;
  return f;
}

bool SweepResult::all_pass() const {
  if (failed) return false;
  for (const RateReport& r : reports)
    if (!r.pass) return false;
  return true;
}

SweepResult sweep_rates(const RunConfig& cfg, const SweepConfig& sc) {
  validate_sweep(sc);
  RunConfig base = cfg;
  base.t_end = sc.t_star;
  base.mu = 0.0;
  base.p_list = sc.p_list;
  base.validate();

  SweepResult res;
  res.sweep = sc;
  res.pairs.resize(sc.mu_list.size());
  res.pair_done.assign(sc.mu_list.size(), false);

  auto record_failure = [&](const std::exception_ptr& e) {
    res.failed = true;
    try {
      std::rethrow_exception(e);
    } catch (const BlowupError& b) {
      res.failure_code = b.code();
      res.failure_message = b.what();
      res.failure_time = b.time();
    } catch (const Error& b) {
      res.failure_code = b.code();
      res.failure_message = b.what();
    } catch (const std::exception& b) {
      res.failure_code = ErrorCode::Internal;
      res.failure_message = b.what();
    }
  };

  Trajectory reference;
  try {
    reference = inviscid_reference(base);
  } catch (...) {
    record_failure(std::current_exception());
    return res;
  }

  // Task 0 is the floor pre-pass (when requested); the rest are the pairs.
  const std::size_t offset = sc.measure_floor ? 1 : 0;
  const std::size_t tasks = offset + sc.mu_list.size();
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks || stop.load()) return;
      try {
        if (k < offset) {
          res.floor = measure_error_floor(base, reference, sc.p_list);
        } else {
          res.pairs[k - offset] = run_pair(base, sc.mu_list[k - offset], reference);
          res.pair_done[k - offset] = true;
        }
      } catch (...) {
        errors[k] = std::current_exception();
        stop.store(true);
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(sc.threads, static_cast<int>(tasks)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) {
      record_failure(e);
      return res;
    }

  auto build = [&](RateMetric m, std::size_t pi) {
    RateReport r;
    r.metric = m;
    r.p = m == RateMetric::Flow ? std::numeric_limits<double>::infinity() : sc.p_list[pi];
    r.t_star = sc.t_star;
    if (res.floor.measured) {
      r.floor = m == RateMetric::Pi ? res.floor.pi[pi] : m == RateMetric::Omega ? res.floor.omega[pi] : res.floor.flow;
    }
    for (std::size_t i = 0; i < sc.mu_list.size(); ++i) {
      const DiffRecord& d = res.pairs[i].back();
      RatePoint pt;
      pt.mu = sc.mu_list[i];
      pt.error = m == RateMetric::Pi ? d.pi[pi] : m == RateMetric::Omega ? d.omega[pi] : d.flow;
      pt.used = pt.error >= sc.floor_factor * r.floor;
      r.points.push_back(pt);
    }
    fit_rate(r);
    return r;
  };
  for (std::size_t i = 0; i < sc.p_list.size(); ++i) res.reports.push_back(build(RateMetric::Pi, i));
  for (std::size_t i = 0; i < sc.p_list.size(); ++i) res.reports.push_back(build(RateMetric::Omega, i));
  res.reports.push_back(build(RateMetric::Flow, 0));
  return res;
}

std::string rate_report_json(const RateReport& r) {
  nlohmann::ordered_json j;
  j["metric"] = to_string(r.metric);
  if (std::isinf(r.p))
    j["p"] = "inf";
  else
    j["p"] = json_p(r.p);
  j["t_star"] = r.t_star;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  nlohmann::ordered_json used = nlohmann::ordered_json::array();
  for (const RatePoint& p : r.points) {
    pts.push_back({p.mu, p.error});
    used.push_back(p.used);
  }
  j["points"] = pts;
  j["used"] = used;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["residual"] = r.residual;
  j["theory"] = r.theory;
  j["threshold"] = 0.95 * r.theory;
  j["floor"] = r.floor;
  j["monotone"] = r.monotone;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2);
}

}  // namespace bpl
