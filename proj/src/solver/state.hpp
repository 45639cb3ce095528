#pragma once

#include "solver/kappa.hpp"
#include "spectral/field.hpp"

namespace bpl {

/// Snapshot of one Boussinesq run. omega is stored mean-free.
struct State {
  double t = 0.0;
  ScalarField omega;
  ScalarField theta;
  double mu = 0.0;
  KappaProfile kappa;

  const Grid2D& grid() const noexcept { return omega.grid(); }
};

/// Builds the t = 0 state. Both fields are projected onto the two-thirds band
/// the integrator evolves, and the (tolerated) mean of ω is removed.
State make_initial_state(const ScalarField& patch_field, const ScalarField& theta0, double mu,
                         const KappaProfile& kappa);

}  // namespace bpl
