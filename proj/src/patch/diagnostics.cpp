#include "patch/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "common/error.hpp"

namespace bpl {

double tangent_holder_seminorm(const std::vector<Vec2>& pts, double epsilon) {
  const std::size_t n = pts.size();
  if (n < 8) return 0.0;
  std::vector<Vec2> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = pts[(i + 1) % n] - pts[(i + n - 1) % n];
    tau[i] = d * (1.0 / norm(d));
  }
  // Cumulative chord length over two laps so separations never wrap.
  std::vector<double> s(2 * n + 1, 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i) s[i + 1] = s[i] + norm(pts[(i + 1) % n] - pts[i % n]);
  const double length = s[n];

  const int levels = std::bit_width(n) - 1 - 2;
  double sup = 0.0;
  for (int j = 1; j <= levels; ++j) {
    const double target = std::ldexp(length, -j);
    std::size_t k = 1;
    for (std::size_t i = 0; i < n; ++i) {
      k = std::max(k, i + 1);
      while (k + 1 < i + n && s[k + 1] - s[i] <= target) ++k;
      std::size_t best = k;
      if (k + 1 < i + n && std::abs(s[k + 1] - s[i] - target) < std::abs(s[k] - s[i] - target)) best = k + 1;
      const double sep = s[best] - s[i];
      sup = std::max(sup, norm(tau[i] - tau[best % n]) / std::pow(sep, epsilon));
    }
  }
  return sup;
}

BoundaryRecord boundary_diagnostics(const FlowMap& fm, const TangentFamily* family, double epsilon,
                                    double reference_area) {
  BoundaryRecord r;
  r.t = fm.t;
  if (!fm.contour.empty()) {
    r.tangent_holder = tangent_holder_seminorm(fm.contour, epsilon);
    r.area = polygon_area(fm.contour);
    r.area_drift = reference_area != 0.0 ? std::abs(r.area - reference_area) / std::abs(reference_area) : 0.0;
    r.simple = polygon_is_simple(fm.contour);
  }
  if (!fm.jacobian.empty()) {
    r.jacobian_min = r.jacobian_max = fm.jacobian.front().det();
    for (const Mat2& m : fm.jacobian) {
      const double d = m.det();
      r.jacobian_min = std::min(r.jacobian_min, d);
      r.jacobian_max = std::max(r.jacobian_max, d);
      r.jacobian_max_deviation = std::max(r.jacobian_max_deviation, std::abs(d - 1.0));
    }
  }
  if (family != nullptr) r.tangency_residual = tangency_residual(*family);
  return r;
}

}  // namespace bpl
