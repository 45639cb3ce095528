#pragma once

#include <span>
#include <vector>

#include "common/vec2.hpp"
#include "patch/contour.hpp"
#include "spectral/field.hpp"

namespace bpl {

/// Velocity on [t0, t1], linear in time between two grid velocity fields.
/// Two spatial interpolants are offered: exact trigonometric interpolation of
/// the band-limited field (used for every tracer position) and periodic
/// bilinear interpolation (used for ∇v in the Jacobian update).
class VelocitySampler {
 public:
  VelocitySampler(double t0, const VelocityField& v0, double t1, const VelocityField& v1);
  // Time-independent field valid for every t.
  static VelocitySampler steady(const VelocityField& v);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  const Grid2D& grid() const noexcept { return grid_; }

  void spectral(double t, std::span<const Vec2> x, std::span<Vec2> out) const;
  void bilinear(double t, std::span<const Vec2> x, std::span<Vec2> out) const;
  void gradient_bilinear(double t, std::span<const Vec2> x, std::span<Mat2> out) const;

 private:
  struct Level {
    Spectrum v1_hat, v2_hat;
    std::vector<double> v1, v2, a11, a12, a21, a22;  // grid values of v and ∂ⱼvᵢ
  };
  static Level make_level(const VelocityField& v);
  double weight(double t) const;  // interpolation weight of the t1 level

  Grid2D grid_;
  double t0_, t1_;
  bool steady_ = false;
  Level l0_, l1_;
};

/// Tracer positions Ψ(t, x) for a uniform lattice (with the Jacobian ∇Ψ) and
/// for dense samples of the initial contour. Positions are stored unwrapped;
/// the samplers reduce them modulo 2π.
struct FlowMap {
  double t = 0.0;
  int lattice_n = 0;
  std::vector<Vec2> lattice;
  std::vector<Mat2> jacobian;
  std::vector<double> contour_zeta;
  std::vector<Vec2> contour;

  std::size_t tracer_count() const noexcept { return lattice.size() + contour.size(); }
};

// lattice_n² cell-centred lattice tracers and `samples` contour tracers.
FlowMap make_flowmap(const PatchContour& c, int lattice_n = 32, int samples = 1024);

/// One midpoint step of ∂ₜΨ = v(t, Ψ) and of the variational equation
/// ∂ₜ∇Ψ = ∇v(t, Ψ)∇Ψ. Throws SamplerTime unless the sampler covers
/// [fm.t, fm.t + dt].
FlowMap advance_flowmap(const FlowMap& fm, const VelocitySampler& v, double dt);

// Largest tracer displacement between two flow maps over all tracers.
double flowmap_distance(const FlowMap& a, const FlowMap& b);

}  // namespace bpl
