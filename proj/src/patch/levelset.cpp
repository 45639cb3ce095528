#include "patch/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "spectral/littlewood_paley.hpp"

namespace bpl {
namespace {

constexpr int kTableSize = 4096;

// I(x) = ∫₀ˣ S(u) du for the C^∞ step S, tabulated by composite Simpson.
const std::array<double, kTableSize + 1>& step_integral_table() {
  static const auto table = [] {
    std::array<double, kTableSize + 1> t{};
    const double h = 1.0 / kTableSize;
    for (int i = 1; i <= kTableSize; ++i) {
      const double a = (i - 1) * h;
      t[i] = t[i - 1] + h / 6.0 * (smooth_step(a) + 4.0 * smooth_step(a + 0.5 * h) + smooth_step(a + h));
    }
    return t;
  }();
  return table;
}

// Cubic Hermite interpolation of I using I' = S exactly at the nodes.
double step_integral(double x) {
  if (x <= 0.0) return 0.0;
  const auto& t = step_integral_table();
  if (x >= 1.0) return t[kTableSize];
  const double h = 1.0 / kTableSize;
  const int i = std::min(static_cast<int>(x / h), kTableSize - 1);
  const double s = (x - i * h) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * t[i] + h10 * h * smooth_step(i * h) + h01 * t[i + 1] + h11 * h * smooth_step((i + 1) * h);
}

bool inside_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

double levelset_profile(double d, double band, double saturation) {
  const double a = std::abs(d);
  double g = a;
  if (a > band) {
    const double w = saturation - band;
    const double u = std::min((a - band) / w, 1.0);
    g = band + w * (u - step_integral(u));
  }
  return std::copysign(g, d);
}

double levelset_profile_slope(double d, double band, double saturation) {
  const double a = std::abs(d);
  if (a <= band) return 1.0;
  return 1.0 - smooth_step((a - band) / (saturation - band));
}

ScalarField signed_distance(const PatchContour& c, const Grid2D& g, double cutoff) {
  constexpr int kDense = 2048;
  constexpr int kStride = 8;
  const std::vector<double> zeta = c.sample_parameters(kDense);
  const std::vector<Vec2> dense = c.sample(kDense);
  std::vector<Vec2> coarse;
  double coarse_chord = 0.0;
  for (int i = 0; i < kDense; i += kStride) coarse.push_back(dense[i]);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    coarse_chord = std::max(coarse_chord, norm(coarse[(i + 1) % coarse.size()] - coarse[i]));

  Vec2 lo = dense[0], hi = dense[0];
  for (const Vec2& p : dense) {
    lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2)};
    hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2)};
  }
  const double dz = 2.0 * std::numbers::pi / kDense;

  ScalarField out(g);
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const Vec2 p{g.coordinate(i1), g.coordinate(i2)};
      double& value = out[g.at(i1, i2)];
      if (p.x1 < lo.x1 - cutoff || p.x1 > hi.x1 + cutoff || p.x2 < lo.x2 - cutoff || p.x2 > hi.x2 + cutoff) {
        value = cutoff;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      int best_i = 0;
      for (std::size_t k = 0; k < coarse.size(); ++k) {
        const double dd = norm(p - coarse[k]);
        if (dd < best) {
          best = dd;
          best_i = static_cast<int>(k);
        }
      }
      if (best - coarse_chord > cutoff) {
        value = inside_polygon(coarse, p) ? -cutoff : cutoff;
        continue;
      }
      // Refine on the dense polygon around the coarse winner, then by Newton.
      int fine_i = best_i * kStride;
      best = std::numeric_limits<double>::infinity();
      for (int k = -2 * kStride; k <= 2 * kStride; ++k) {
        const int idx = ((best_i * kStride + k) % kDense + kDense) % kDense;
        const double dd = norm(p - dense[idx]);
        if (dd < best) {
          best = dd;
          fine_i = idx;
        }
      }
      double z = zeta[fine_i];
      for (int it = 0; it < 30; ++it) {
        const Vec2 r = c.point(z) - p;
        const Vec2 d1 = c.derivative(z);
        const double g1 = dot(r, d1);
        double g2 = dot(d1, d1) + dot(r, c.second_derivative(z));
        if (g2 <= 0.0) g2 = dot(d1, d1);
        const double step = std::clamp(-g1 / g2, -dz, dz);
        z += step;
        if (std::abs(step) < 1e-15) break;
      }
      const Vec2 q = c.point(z);
      const Vec2 t = c.derivative(z);
      const Vec2 outward{t.x2, -t.x1};
      const double dist = norm(p - q);
      value = std::min(dist, cutoff);
      if (dot(p - q, outward) < 0.0) value = -value;
    }
  }
  return out;
}

RasterizedPatch rasterize_patch(const PatchContour& c, const Grid2D& g, double delta) {
  if (delta <= 0.0) delta = 4.0 * g.spacing();
  require_isolated_on_torus(c);
  const double reach = 1.0 / std::max(c.max_curvature(), 1e-12);
  double band = std::min(4.0 * delta, 0.5 * reach);
  const double saturation = std::min({2.0 * band, 0.9 * reach, 0.25 * std::numbers::pi});
  band = std::min(band, saturation / 1.5);
  const double cutoff = std::max(saturation, 8.0 * delta);

  const ScalarField d = signed_distance(c, g, cutoff);
  ScalarField ramp(g), f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    ramp[i] = 0.5 * std::erfc(d[i] / delta);
    f[i] = levelset_profile(d[i], band, saturation);
  }
  const double mean = ramp.mean();
  for (double& v : ramp.values()) v -= mean;

  // Tangency is judged only where the cut-off member vanishes (|f| below half
  // the band), which on coarse grids is narrower than δ.
  const double zero_band = std::min(delta, 0.5 * band);
  RasterizedPatch out{std::move(ramp), mean, LevelSet{std::move(f), band, saturation, zero_band}, delta};
  return out;
}

}  // namespace bpl
