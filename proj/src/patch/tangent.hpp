#pragma once

#include <array>

#include "patch/levelset.hpp"
#include "spectral/field.hpp"

namespace bpl {

/// The two-member admissible family used for a single patch:
///   X₀ = ∇⊥f,   X₁ = (1 − χ)e₁,
/// where χ = 1 on |f| ≤ band/2 and χ = 0 on |f| ≥ band. The level function f
/// and the divergences of both members ride along as passive scalars so the
/// transported family can be evaluated without re-deriving them.
struct TangentFamily {
  std::array<VelocityField, 2> members;
  std::array<ScalarField, 2> divergence;
  LevelSet level;
  double t = 0.0;

  const Grid2D& grid() const noexcept { return level.f.grid(); }
};

// Smallest grid value of max_λ |X_λ|.
double nondegeneracy(const TangentFamily& X);

// max over the zero band |f| ≤ zero_band of max_λ |X_λ·∇f|.
double tangency_residual(const TangentFamily& X);

/// Builds the family at t = 0. Throws Degenerate if |∇f| < f_min somewhere on
/// the band or if the family has I(X) ≤ 0.
TangentFamily initial_tangent_fields(const LevelSet& ls, double f_min = 0.5);

/// One explicit midpoint step of ∂ₜX + v·∇X = X·∇v for both members, and of
/// pure transport for f and div X_λ. Products are dealiased. The first stage
/// uses v_start, the second the average of v_start and v_end. Throws
/// CflViolation when dt·‖v‖∞ exceeds the grid spacing.
TangentFamily advance_vectorfield(const TangentFamily& X, const VelocityField& v_start, const VelocityField& v_end,
                                  double dt);
TangentFamily advance_vectorfield(const TangentFamily& X, const VelocityField& v, double dt);

}  // namespace bpl
