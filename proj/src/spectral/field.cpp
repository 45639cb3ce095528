#include "spectral/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "common/error.hpp"

namespace bpl {

Grid2D::Grid2D(int n) : n_(n) {
  if (n < 16 || !std::has_single_bit(static_cast<unsigned>(n)))
    fail(ErrorCode::InvalidArgument, "grid size must be a power of two >= 16, got " + std::to_string(n));
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* context) {
  if (!(a == b))
    fail(ErrorCode::GridMismatch, std::string(context) + ": grid mismatch (" + std::to_string(a.n()) + " vs " +
                                      std::to_string(b.n()) + ")");
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid2D& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) fail(ErrorCode::InvalidArgument, "field value count does not match grid");
}

ScalarField ScalarField::from_function(const Grid2D& grid, const std::function<double(double, double)>& g) {
  ScalarField f(grid);
  for (int i1 = 0; i1 < grid.n(); ++i1)
    for (int i2 = 0; i2 < grid.n(); ++i2) f.values_[grid.at(i1, i2)] = g(grid.coordinate(i1), grid.coordinate(i2));
  return f;
}

ScalarField ScalarField::constant(const Grid2D& grid, double c) {
  return ScalarField(grid, std::vector<double>(grid.size(), c));
}

double ScalarField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < out.grid().size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double VelocityField::max_speed() const {
  double m = 0.0;
  for (std::size_t i = 0; i < u1.grid().size(); ++i) m = std::max(m, std::hypot(u1[i], u2[i]));
  return m;
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(const Grid2D& grid) : grid_(grid), coeffs_(grid.spectral_size(), Complex(0.0, 0.0)) {}

double Spectrum::energy() const {
  const int n = grid_.n();
  double e = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int j2 = 0; j2 < grid_.half(); ++j2) {
      const double w = (j2 == 0 || j2 == n / 2) ? 1.0 : 2.0;
      e += w * std::norm(coeffs_[grid_.spectral_at(i1, j2)]);
    }
  }
  return e;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_, "Spectrum +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_, "Spectrum -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(Spectrum a, double s) { return a *= s; }

// ---------------------------------------------------------------------------
// FFTW plans. The planner is not thread-safe, so plan creation is serialized;
// execution goes through the new-array interface, which is.

namespace fft {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto plans = std::make_unique<PlanPair>();
  const std::size_t real_size = static_cast<std::size_t>(n) * n;
  const std::size_t cplx_size = static_cast<std::size_t>(n) * (n / 2 + 1);
  double* r = fftw_alloc_real(real_size);
  fftw_complex* c = fftw_alloc_complex(cplx_size);
  // ESTIMATE keeps plan selection deterministic run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans->r2c = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
  plans->c2r = fftw_plan_dft_c2r_2d(n, n, c, r, flags | FFTW_DESTROY_INPUT);
  fftw_free(r);
  fftw_free(c);
  if (!plans->r2c || !plans->c2r) fail(ErrorCode::Internal, "FFTW planning failed");
  return *cache.emplace(n, std::move(plans)).first->second;
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const PlanPair& p = plans_for(g.n());
  std::vector<double> in(f.values().begin(), f.values().end());
  Spectrum s(g);
  fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(s.coeffs().data()));
  s *= 1.0 / static_cast<double>(g.size());
  return s;
}

ScalarField inverse(const Spectrum& s) {
  const Grid2D& g = s.grid();
  const PlanPair& p = plans_for(g.n());
  std::vector<Complex> in(s.coeffs().begin(), s.coeffs().end());
  ScalarField f(g);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), f.values().data());
  return f;
}

}  // namespace fft
}  // namespace bpl
