#include "solver/stepper.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "common/error.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

struct Tendency {
  Spectrum omega;
  Spectrum theta;
};

// Explicit part of (VD_μ): −v·∇ω + ∂₁θ and −∇·(vθ) + ∇·((κ(θ) − 1)∇θ).
Tendency explicit_terms(const Spectrum& w_hat, const Spectrum& th_hat, const KappaProfile& kappa,
                        bool freeze_velocity) {
  const Grid2D& g = w_hat.grid();
  const std::size_t size = g.size();

  const ScalarField theta = fft::inverse(th_hat);
  const Spectrum th_x_hat = d1(th_hat);
  const ScalarField th_x = fft::inverse(th_x_hat);
  const ScalarField th_y = fft::inverse(d2(th_hat));

  ScalarField flux1(g), flux2(g);
  for (std::size_t i = 0; i < size; ++i) {
    const double excess = kappa.excess(theta[i]);
    flux1[i] = -excess * th_x[i];
    flux2[i] = -excess * th_y[i];
  }

  Spectrum w_tend = th_x_hat;
  if (!freeze_velocity) {
    Spectrum v1_hat(g), v2_hat(g);
    biot_savart(w_hat, v1_hat, v2_hat);
    const ScalarField v1 = fft::inverse(v1_hat);
    const ScalarField v2 = fft::inverse(v2_hat);
    const ScalarField w_x = fft::inverse(d1(w_hat));
    const ScalarField w_y = fft::inverse(d2(w_hat));
    ScalarField adv(g);
    for (std::size_t i = 0; i < size; ++i) {
      adv[i] = v1[i] * w_x[i] + v2[i] * w_y[i];
      flux1[i] += v1[i] * theta[i];
      flux2[i] += v2[i] * theta[i];
    }
    Spectrum adv_hat = fft::forward(adv);
    dealias_in_place(adv_hat);
    w_tend -= adv_hat;
  }

  Spectrum f1 = fft::forward(flux1);
  Spectrum f2 = fft::forward(flux2);
  dealias_in_place(f1);
  dealias_in_place(f2);
  Spectrum th_tend = d1(f1) + d2(f2);
  th_tend *= -1.0;
  remove_mean(w_tend);
  return {std::move(w_tend), std::move(th_tend)};
}

// Multiplies by exp(−ν τ |k|²); ν = 0 is the identity.
void integrating_factor(Spectrum& s, double tau, double nu) {
  if (nu == 0.0 || tau == 0.0) return;
  heat_propagate_in_place(s, tau, nu);
}

void check_finite(const ScalarField& f, double t, const char* name) {
  if (!f.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite " << name << " at t = " << t;
    throw BlowupError(t, msg.str());
  }
}

}  // namespace

State step(const State& s, double dt, const StepOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "step: dt must be positive and finite");
  const double mu = s.mu;
  const Spectrum w0 = fft::forward(s.omega);
  const Spectrum th0 = fft::forward(s.theta);

  // Stage 1: half step to the midpoint.
  const Tendency n0 = explicit_terms(w0, th0, s.kappa, options.freeze_velocity);
  Spectrum w_half = w0 + n0.omega * (0.5 * dt);
  Spectrum th_half = th0 + n0.theta * (0.5 * dt);
  integrating_factor(w_half, 0.5 * dt, mu);
  integrating_factor(th_half, 0.5 * dt, 1.0);

  // Stage 2: full step with the midpoint tendency.
  const Tendency n1 = explicit_terms(w_half, th_half, s.kappa, options.freeze_velocity);
  Spectrum w_new = w0;
  Spectrum th_new = th0;
  integrating_factor(w_new, dt, mu);
  integrating_factor(th_new, dt, 1.0);
  Spectrum w_inc = n1.omega * dt;
  Spectrum th_inc = n1.theta * dt;
  integrating_factor(w_inc, 0.5 * dt, mu);
  integrating_factor(th_inc, 0.5 * dt, 1.0);
  w_new += w_inc;
  th_new += th_inc;
  remove_mean(w_new);

  State out{s.t + dt, fft::inverse(w_new), fft::inverse(th_new), s.mu, s.kappa};
  check_finite(out.omega, out.t, "vorticity");
  check_finite(out.theta, out.t, "temperature");
  if (options.blowup_reference > 0.0) {
    const double wmax = out.omega.max_abs();
    if (wmax > options.blowup_factor * options.blowup_reference) {
      std::ostringstream msg;
      msg << "vorticity amplitude " << wmax << " exceeds " << options.blowup_factor << "x its initial value at t = "
          << out.t;
      throw BlowupError(out.t, msg.str());
    }
  }
  return out;
}

double cfl_dt(const Grid2D& g, double max_speed, double epsilon0, const CflParams& params) {
  const double h = g.spacing();
  double bound = std::numeric_limits<double>::infinity();
  if (max_speed > 0.0) bound = std::min(bound, h / max_speed);
  if (epsilon0 > 0.0) bound = std::min(bound, params.diffusive_const * h * h / epsilon0);
  if (!std::isfinite(bound)) return params.dt_max;
  return params.safety * bound;
}

double cfl_dt(const State& s, const CflParams& params) {
  const double speed = biot_savart(s.omega).max_speed();
  return cfl_dt(s.grid(), speed, s.kappa.epsilon0, params);
}

}  // namespace bpl
