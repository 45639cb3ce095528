#include "harness/run.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "analysis/norms.hpp"
#include "common/error.hpp"
#include "patch/levelset.hpp"
#include "patch/tangent.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

PatchSpec seeded_patch(const RunConfig& cfg) {
  PatchSpec p = cfg.patch;
  p.seed = cfg.seed;
  return p;
}

// The step landing on `target` absorbs any rounding so snapshot times are hit
// exactly; replays make the same decision from the same arithmetic.
bool lands(double t, double dt, double target) { return dt >= (target - t) * (1.0 - 1e-9); }

struct GeometryState {
  FlowMap fm;
  std::optional<TangentFamily> family;
};

}  // namespace

std::string to_string(Theta0Kind kind) {
  switch (kind) {
    case Theta0Kind::ProductSine: return "product_sine";
    case Theta0Kind::Zero: return "zero";
    case Theta0Kind::Random: return "random";
  }
  return "unknown";
}

Theta0Kind theta0_kind_from_string(const std::string& name) {
  for (Theta0Kind k : {Theta0Kind::ProductSine, Theta0Kind::Zero, Theta0Kind::Random})
    if (to_string(k) == name) return k;
  fail(ErrorCode::Config, "unknown theta0 kind '" + name + "' (expected product_sine, zero or random)");
}

ScalarField make_theta0(const Theta0Spec& spec, const Grid2D& g, std::uint64_t seed) {
  switch (spec.kind) {
    case Theta0Kind::Zero: return ScalarField(g);
    case Theta0Kind::ProductSine: {
      const double a = spec.amplitude;
      return ScalarField::from_function(g, [a](double x1, double x2) { return a * std::sin(x1) * std::sin(x2); });
    }
    case Theta0Kind::Random: {
      if (spec.kmax < 1 || spec.kmax > g.n() / 3) fail(ErrorCode::Config, "theta0 kmax must lie in [1, n/3]");
      struct Term {
        int k1, k2;
        double a, b;
      };
      std::vector<Term> terms;
      std::mt19937_64 rng(seed ^ 0x7e7au);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int k1 = 0; k1 <= spec.kmax; ++k1)
        for (int k2 = -spec.kmax; k2 <= spec.kmax; ++k2) {
          const int r2 = k1 * k1 + k2 * k2;
          if ((k1 == 0 && k2 <= 0) || r2 > spec.kmax * spec.kmax) continue;
          const double decay = 1.0 / (1.0 + r2);
          const double a = normal(rng) * decay;
          terms.push_back({k1, k2, a, normal(rng) * decay});
        }
      ScalarField f = ScalarField::from_function(g, [&](double x1, double x2) {
        double sum = 0.0;
        for (const Term& t : terms) sum += t.a * std::cos(t.k1 * x1 + t.k2 * x2) + t.b * std::sin(t.k1 * x1 + t.k2 * x2);
        return sum;
      });
      const double m = f.max_abs();
      if (m > 0.0) f *= spec.amplitude / m;
      return f;
    }
  }
  return ScalarField(g);
}

double RunConfig::resolved_delta() const { return delta > 0.0 ? delta : 4.0 * Grid2D(n).spacing(); }

void RunConfig::validate() const {
  if (n < 16 || !std::has_single_bit(static_cast<unsigned>(n))) config_error("grid n must be a power of two >= 16");
  if (!(mu >= 0.0)) config_error("viscosity must be >= 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) config_error("t_end must be finite and >= 0");
  if (dt_policy == DtPolicy::Fixed && !(dt > 0.0)) config_error("fixed dt must be > 0");
  if (!(cfl.safety > 0.0 && cfl.safety <= 1.0)) config_error("CFL safety must lie in (0, 1]");
  if (snapshots_per_unit < 1) config_error("snapshots_per_unit must be >= 1");
  if (p_list.empty()) config_error("p list must not be empty");
  for (double p : p_list)
    if (!(p >= 1.0)) config_error("every monitored p must lie in [1, inf]");
  if (lattice_n < 0 || contour_samples < 0) config_error("tracer counts must be >= 0");
  if (track_geometry && contour_samples < 512) config_error("contour_samples must be >= 512 when geometry is tracked");
  if (!(delta <= 0.0 || std::isfinite(delta))) config_error("delta must be finite");
  if (!(patch.epsilon > 0.0 && patch.epsilon < 1.0)) config_error("patch epsilon must lie in (0, 1)");
}

std::vector<double> snapshot_times(const RunConfig& cfg) {
  std::vector<double> out{0.0};
  const double stride = 1.0 / cfg.snapshots_per_unit;
  for (int k = 1;; ++k) {
    const double t = k * stride;
    if (t > cfg.t_end * (1.0 + 1e-12)) break;
    out.push_back(std::min(t, cfg.t_end));
  }
  if (cfg.t_end - out.back() > 1e-12 * std::max(1.0, cfg.t_end)) out.push_back(cfg.t_end);
  return out;
}

State initial_state(const RunConfig& cfg) {
  cfg.validate();
  const Grid2D g(cfg.n);
  const RasterizedPatch rp = rasterize_patch(build_contour(seeded_patch(cfg)), g, cfg.resolved_delta());
  return make_initial_state(rp.omega0, make_theta0(cfg.theta0, g, cfg.seed), cfg.mu, cfg.kappa);
}

Trajectory run(const RunConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const bool geometry = options.track_geometry.value_or(cfg.track_geometry);
  const bool probes = options.probes.value_or(cfg.probes);
  const Grid2D g(cfg.n);
  const PatchContour contour = build_contour(seeded_patch(cfg));
  const RasterizedPatch rp = rasterize_patch(contour, g, cfg.resolved_delta());
  State s = make_initial_state(rp.omega0, make_theta0(cfg.theta0, g, cfg.seed), cfg.mu, cfg.kappa);
  const double eps = cfg.patch.epsilon;

  Trajectory tr;
  tr.delta = rp.delta;
  tr.times = snapshot_times(cfg);
  tr.p_list = cfg.p_list;

  std::optional<GeometryState> geo;
  if (geometry) {
    geo = GeometryState{make_flowmap(contour, cfg.lattice_n, cfg.contour_samples), std::nullopt};
    if (options.track_family) {
      geo->family = initial_tangent_fields(rp.levelset);
      tr.initial_nondegeneracy = nondegeneracy(*geo->family);
    }
    tr.initial_contour = geo->fm.contour;
    tr.contour_zeta = geo->fm.contour_zeta;
    tr.initial_area = polygon_area(geo->fm.contour);
  }

  auto record = [&](const State& st) {
    tr.norms.push_back(snapshot_norms(st, cfg.p_list));
    if (options.keep_states) tr.states.push_back(st);
    if (geo) {
      tr.flowmaps.push_back(geo->fm);
      tr.geometry.push_back(boundary_diagnostics(geo->fm, geo->family ? &*geo->family : nullptr, eps, tr.initial_area));
    }
    if (probes) {
      // The reverse Bernstein constant in L∞ falls below 1/2 on the lattice
      // annulus, so only finite exponents are probed.
      for (double p : cfg.p_list)
        if (std::isfinite(p))
          for (ProbeRecord& r : bernstein_probe(st.omega, p, st.t)) tr.probes.push_back(r);
      tr.probes.push_back(gagliardo_nirenberg_probe(st.theta, 4.0, st.t));
      if (geo && geo->family) tr.probes.push_back(log_estimate_probe(st.omega, *geo->family, eps, st.t));
      tr.probes.push_back(interp_delta_v_probe(st.omega, 4.0, 0.25, st.t));
    }
  };

  StepOptions step_opt;
  step_opt.blowup_reference = s.omega.max_abs();
  record(s);

  VelocityField v_now = biot_savart(s.omega);
  std::size_t replay_index = 0;
  for (std::size_t k = 1; k < tr.times.size(); ++k) {
    const double target = tr.times[k];
    bool landed = false;
    while (!landed) {
      double dt;
      if (options.schedule != nullptr) {
        if (replay_index >= options.schedule->size())
          fail(ErrorCode::Internal, "replayed dt schedule ended before t_end");
        dt = (*options.schedule)[replay_index++];
      } else {
        dt = cfg.dt_policy == DtPolicy::Fixed ? cfg.dt : cfl_dt(g, v_now.max_speed(), s.kappa.epsilon0, cfg.cfl);
        const double remaining = target - s.t;
        if (!lands(s.t, dt, target)) {
          // Spread the remainder evenly so no sliver step is left at the end.
          const double steps = std::ceil(remaining / dt - 1e-9);
          dt = remaining / steps;
        }
      }
      if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::Internal, "non-positive time step");
      landed = lands(s.t, dt, target);
      if (landed) dt = target - s.t;
      tr.dt_schedule.push_back(dt);

      const double t0 = s.t;
      State next = step(s, dt, step_opt);
      next.t = landed ? target : t0 + dt;
      VelocityField v_next = biot_savart(next.omega);
      if (geo) {
        const VelocitySampler sampler(t0, v_now, next.t, v_next);
        geo->fm = advance_flowmap(geo->fm, sampler, dt);
        geo->fm.t = next.t;
        if (geo->family) {
          geo->family = advance_vectorfield(*geo->family, v_now, v_next, dt);
          geo->family->t = next.t;
        }
      }
      s = std::move(next);
      v_now = std::move(v_next);
    }
    record(s);
  }

  tr.monitors = monitor_apriori(tr.norms, cfg.p_list, cfg.mu, cfg.kappa.kappa0());
  for (const BoundaryRecord& b : tr.geometry) {
    tr.monitors.channel("geometry_jacobian").record(b.jacobian_max_deviation, cfg.bounds.jacobian, 0.0);
    tr.monitors.channel("geometry_area_drift").record(b.area_drift, cfg.bounds.area_drift, 0.0);
    if (options.track_family)
      tr.monitors.channel("geometry_tangency").record(b.tangency_residual, cfg.bounds.tangency, 0.0);
  }
  return tr;
}

}  // namespace bpl
