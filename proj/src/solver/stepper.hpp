#pragma once

#include "solver/state.hpp"
#include "spectral/field.hpp"

namespace bpl {

struct StepOptions {
  // Test hook: drop every velocity-dependent term (pure heat / pure source).
  bool freeze_velocity = false;
  // Blowup guard: ‖ω‖∞ above blowup_factor·blowup_reference aborts the run.
  // A non-positive reference disables the amplitude check.
  double blowup_reference = 0.0;
  double blowup_factor = 1e3;
};

/// One two-stage (midpoint) IMEX step. Vorticity diffusion μΔ and the unit
/// part of the temperature diffusion are integrated exactly by integrating
/// factors; advection, buoyancy ∂₁θ and the (κ(θ) − 1) diffusion excess are
/// explicit and dealiased. Throws BlowupError on non-finite output.
State step(const State& s, double dt, const StepOptions& options = {});

struct CflParams {
  double safety = 0.5;
  // Multiplies spacing² / ε₀ in the explicit-diffusion bound.
  double diffusive_const = 16.0;
  // Used when neither bound is active (v ≡ 0 and ε₀ = 0).
  double dt_max = 0.05;
};

/// safety · min(h/‖v‖∞, c·h²/ε₀); either bound is skipped when its
/// denominator vanishes.
double cfl_dt(const State& s, const CflParams& params = {});
double cfl_dt(const Grid2D& g, double max_speed, double epsilon0, const CflParams& params);

}  // namespace bpl
