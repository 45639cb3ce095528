#pragma once

#include <string>

namespace bpl {

enum class KappaKind { Constant, Sin, Tanh };

/// Temperature-dependent diffusivity κ(s) = 1 + ε₀·g(s) with g ∈ {0, sin, tanh}.
/// For ε₀ < 1 both perturbed families satisfy κ₀⁻¹ ≤ κ ≤ κ₀ and |κ'| ≤ κ₀
/// with κ₀ = (1 − ε₀)⁻¹.
struct KappaProfile {
  KappaKind kind = KappaKind::Sin;
  double epsilon0 = 0.1;

  static KappaProfile constant() { return {KappaKind::Constant, 0.0}; }
  // Validates 0 ≤ ε₀ < 1; a constant profile forces ε₀ = 0.
  static KappaProfile make(KappaKind kind, double epsilon0);

  double operator()(double s) const;
  double derivative(double s) const;
  // κ(s) − 1, evaluated without cancellation.
  double excess(double s) const;
  double kappa0() const { return 1.0 / (1.0 - epsilon0); }

  // Checks the two-sided bounds and the smallness ‖κ − 1‖∞ ≤ ε₀ on [lo, hi]
  // by dense sampling.
  bool satisfies_bounds(double lo, double hi) const;
};

std::string to_string(KappaKind kind);
KappaKind kappa_kind_from_string(const std::string& name);

}  // namespace bpl
