#pragma once

#include <cstddef>
#include <numbers>

namespace bpl {

/// Square periodic grid on [0, 2π)². Values are stored row-major with x₂ fastest;
/// spectra use the real-to-complex half layout n × (n/2 + 1).
class Grid2D {
 public:
  explicit Grid2D(int n);

  int n() const noexcept { return n_; }
  double length() const noexcept { return 2.0 * std::numbers::pi; }
  double spacing() const noexcept { return length() / n_; }
  double area() const noexcept { return length() * length(); }

  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  int half() const noexcept { return n_ / 2 + 1; }
  std::size_t spectral_size() const noexcept { return static_cast<std::size_t>(n_) * half(); }

  // Signed integer wavenumber of a first-axis index; range −n/2+1 .. n/2.
  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }
  double coordinate(int index) const noexcept { return index * spacing(); }

  std::size_t at(int i1, int i2) const noexcept { return static_cast<std::size_t>(i1) * n_ + i2; }
  std::size_t spectral_at(int i1, int j2) const noexcept { return static_cast<std::size_t>(i1) * half() + j2; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
};

// Throws GridMismatch when the two grids differ.
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* context);

}  // namespace bpl
