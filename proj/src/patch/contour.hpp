#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "common/vec2.hpp"

namespace bpl {

enum class PatchShape { Disk, Ellipse, FourierPerturbed };

std::string to_string(PatchShape shape);
PatchShape patch_shape_from_string(const std::string& name);

/// Input description of a patch boundary. The curve is centred at (π, π).
/// For FourierPerturbed the polar radius is
///   r(ζ) = radius + Σ amplitudes[i]·cos(modes[i]·ζ) + seeded random modes,
/// where the random part draws `random_modes` extra modes m = 2, 3, ... with
/// amplitude random_amplitude·N(0,1)·m^{−(3/2 + ε)} and a uniform phase.
struct PatchSpec {
  PatchShape shape = PatchShape::Disk;
  double radius = 0.8;
  double semi_a = 0.8;
  double semi_b = 0.8;
  std::vector<int> modes;
  std::vector<double> amplitudes;
  int random_modes = 0;
  double random_amplitude = 0.0;
  double epsilon = 0.5;
  std::uint64_t seed = 42;
};

/// Closed curve γ(ζ) = (x₁(ζ), x₂(ζ)), ζ ∈ [0, 2π), stored as truncated Fourier
/// series of each coordinate. Orientation is counter-clockwise.
class PatchContour {
 public:
  struct Series {
    std::vector<double> cos_coeff;  // index m = 0 .. M
    std::vector<double> sin_coeff;
  };

  PatchContour(Series x1, Series x2, double epsilon);

  Vec2 point(double zeta) const;
  Vec2 derivative(double zeta) const;         // γ'(ζ)
  Vec2 second_derivative(double zeta) const;  // γ''(ζ)
  double curvature(double zeta) const;

  // Exact enclosed area from the Fourier coefficients.
  double area() const;
  double length(int samples = 4096) const;
  double max_curvature(int samples = 4096) const;
  double min_speed(int samples = 4096) const;  // min |γ'|
  Vec2 min_corner(int samples = 4096) const;
  Vec2 max_corner(int samples = 4096) const;

  double epsilon() const noexcept { return epsilon_; }
  int max_mode() const noexcept { return static_cast<int>(x1_.cos_coeff.size()) - 1; }

  // Uniform parameter samples ζ_i = 2πi/N.
  std::vector<double> sample_parameters(int count) const;
  std::vector<Vec2> sample(int count) const;

  // Segment-intersection test on an N-gon through the samples.
  bool is_simple(int samples = 512) const;

 private:
  Series x1_, x2_;
  double epsilon_;
};

/// Builds and validates the contour; throws Geometry on self-intersection,
/// non-positive radius or a vanishing tangent.
PatchContour build_contour(const PatchSpec& spec);

/// Throws Geometry unless the contour lies in the central quarter
/// [π/2, 3π/2]² and encloses at most 1/16 of the torus.
void require_isolated_on_torus(const PatchContour& c);

/// N-gon polygon helpers on (possibly unwrapped) points.
double polygon_area(const std::vector<Vec2>& pts);
bool polygon_is_simple(const std::vector<Vec2>& pts);

// CSV rows "zeta,x1,x2" with a header line.
void write_contour_csv(std::ostream& os, const std::vector<double>& zeta, const std::vector<Vec2>& pts);

}  // namespace bpl
