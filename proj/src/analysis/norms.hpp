#pragma once

#include <limits>

#include "patch/tangent.hpp"
#include "spectral/field.hpp"

namespace bpl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (spacing²·Σ|f|ᵖ)^{1/p}, or max|f| for p = ∞. Throws for p < 1.
double lebesgue_norm(const ScalarField& f, double p);
// Pointwise Euclidean magnitude, then the scalar norm.
double lebesgue_norm(const VelocityField& v, double p);
// Same, with respect to the probability measure dx/|T²|.
double normalized_lebesgue_norm(const ScalarField& f, double p);

// Spectral gradient (∂₁f, ∂₂f).
VelocityField gradient(const ScalarField& f);
// ‖f‖_{Lᵖ} + ‖∇f‖_{Lᵖ}.
double sobolev_norm(const ScalarField& f, double p);

/// ℓʳ over q = −1 .. q_max of w_q(s)·‖Δ_q f‖_{Lᵖ}, with w_q = 2^{max(q,0)·s}.
/// The q = −1 weight of one keeps the embedding in s monotone for every sign
/// of s. Requires |s| ≤ 3.
double besov_norm(const ScalarField& f, double s, double p, double r);

/// Grid-scale lower estimate of the C^α seminorm: sup over axis-aligned
/// periodic offsets 2ʲ·spacing, j = 0 .. log₂(n) − 1.
double holder_seminorm(const ScalarField& f, double alpha);
double holder_seminorm(const VelocityField& v, double alpha);
double holder_norm(const ScalarField& f, double alpha);
double holder_norm(const VelocityField& v, double alpha);

/// ∂_X ω in weak form: div(Xω) − ω·div X, products not dealiased.
ScalarField weak_directional_derivative(const ScalarField& omega, const VelocityField& X, const ScalarField& divX);

/// (1/I(X))·(‖ω‖∞·sup_λ(‖X_λ‖_{C^ε} + ‖div X_λ‖_{C^ε}) + sup_λ ‖∂_{X_λ}ω‖_{B^{ε−1}_{∞,∞}}).
/// Throws Degenerate when I(X) vanishes.
double striated_seminorm(const ScalarField& omega, const TangentFamily& X, double epsilon);

}  // namespace bpl
