#pragma once

#include "spectral/field.hpp"

namespace bpl {

enum class Axis { X1 = 1, X2 = 2 };

// Tolerance on |mean ω| below which biot_savart silently projects the mean away.
inline constexpr double kMeanTolerance = 1e-10;

/// Fourier-multiplier derivative (i k_axis)^order, order in 1..4. Nyquist modes
/// of odd-order derivatives are zeroed.
ScalarField spectral_derivative(const ScalarField& f, Axis axis, int order);
Spectrum spectral_derivative(const Spectrum& s, Axis axis, int order);

// Convenience first derivatives on spectra.
Spectrum d1(const Spectrum& s);
Spectrum d2(const Spectrum& s);

/// v = ∇⊥Δ⁻¹ω with a zero-mean stream function. Throws MeanNotZero when
/// |mean ω| exceeds kMeanTolerance.
VelocityField biot_savart(const ScalarField& omega);
// Spectral-side variant used by the integrator; the mode k = 0 is ignored.
void biot_savart(const Spectrum& omega_hat, Spectrum& v1_hat, Spectrum& v2_hat);

ScalarField curl(const VelocityField& v);
ScalarField divergence(const VelocityField& v);

/// Two-thirds rule: zero every mode with max(|k₁|, |k₂|) > n/3.
ScalarField dealias(const ScalarField& f);
void dealias_in_place(Spectrum& s);
bool is_dealiased_mode(const Grid2D& g, int k1, int k2);

/// Multiplies each mode by exp(−ν τ |k|²). ν must be positive and τ non-negative.
ScalarField heat_propagate(const ScalarField& f, double tau, double nu);
void heat_propagate_in_place(Spectrum& s, double tau, double nu);

// ‖f‖₂ from the coefficients: sqrt(area · Σ|c_k|²).
double spectral_l2_norm(const Spectrum& s);

// Removes the k = 0 coefficient.
void remove_mean(Spectrum& s);
ScalarField remove_mean(const ScalarField& f);

}  // namespace bpl
