#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "spectral/grid.hpp"

namespace bpl {

using Complex = std::complex<double>;

/// Real grid data. Immutable in spirit: operations return new fields.
class ScalarField {
 public:
  explicit ScalarField(const Grid2D& grid);
  ScalarField(const Grid2D& grid, std::vector<double> values);

  // Samples g(x₁, x₂) at the grid nodes.
  static ScalarField from_function(const Grid2D& grid, const std::function<double(double, double)>& g);
  static ScalarField constant(const Grid2D& grid, double c);

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double at(int i1, int i2) const noexcept { return values_[grid_.at(i1, i2)]; }

  double mean() const;
  double max() const;
  double min() const;
  double max_abs() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
// Pointwise product (no dealiasing).
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Fourier coefficients c_k with f(x) = Σ c_k e^{ik·x}, stored in the half layout.
class Spectrum {
 public:
  explicit Spectrum(const Grid2D& grid);

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }

  // Σ over the full lattice of |c_k|², accounting for the omitted conjugate half.
  double energy() const;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double s);

  // Visits every stored mode with its (k₁, k₂) wavenumber.
  template <class F>
  void for_each_mode(F&& f) {
    const int n = grid_.n();
    for (int i1 = 0; i1 < n; ++i1) {
      const int k1 = grid_.wavenumber(i1);
      for (int j2 = 0; j2 < grid_.half(); ++j2) f(k1, j2, coeffs_[grid_.spectral_at(i1, j2)]);
    }
  }

 private:
  Grid2D grid_;
  std::vector<Complex> coeffs_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(Spectrum a, double s);

struct VelocityField {
  ScalarField u1;
  ScalarField u2;

  const Grid2D& grid() const noexcept { return u1.grid(); }
  // max over the grid of the Euclidean speed.
  double max_speed() const;
};

namespace fft {

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

}  // namespace fft

}  // namespace bpl
