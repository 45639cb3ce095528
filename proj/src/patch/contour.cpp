#include "patch/contour.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "common/error.hpp"

namespace bpl {
namespace {

constexpr double kPi = std::numbers::pi;

double eval_series(const PatchContour::Series& s, double zeta, int order) {
  // order-th derivative of Σ c_m cos(mζ) + s_m sin(mζ)
  double acc = 0.0;
  const int count = static_cast<int>(s.cos_coeff.size());
  for (int m = 0; m < count; ++m) {
    if (s.cos_coeff[m] == 0.0 && s.sin_coeff[m] == 0.0) continue;
    const double c = std::cos(m * zeta), sn = std::sin(m * zeta);
    const double mp = std::pow(static_cast<double>(m), order);
    double dc = 0.0, ds = 0.0;  // derivatives of cos and sin parts
    switch (order % 4) {
      case 0: dc = c; ds = sn; break;
      case 1: dc = -sn; ds = c; break;
      case 2: dc = -c; ds = -sn; break;
      default: dc = sn; ds = -c; break;
    }
    acc += mp * (s.cos_coeff[m] * dc + s.sin_coeff[m] * ds);
  }
  return acc;
}

void add(PatchContour::Series& s, int m, double c, double sn) {
  if (m < 0) {  // cos(−mζ) = cos(mζ), sin(−mζ) = −sin(mζ)
    m = -m;
    sn = -sn;
  }
  if (static_cast<int>(s.cos_coeff.size()) <= m) {
    s.cos_coeff.resize(m + 1, 0.0);
    s.sin_coeff.resize(m + 1, 0.0);
  }
  s.cos_coeff[m] += c;
  if (m > 0) s.sin_coeff[m] += sn;
}

// Polar curve r(ζ)(cos ζ, sin ζ) + centre, with r = Σ a_m cos mζ + b_m sin mζ.
PatchContour polar_contour(const std::vector<double>& a, const std::vector<double>& b, double epsilon) {
  PatchContour::Series x1, x2;
  add(x1, 0, kPi, 0.0);
  add(x2, 0, kPi, 0.0);
  for (int m = 0; m < static_cast<int>(a.size()); ++m) {
    // a cos mζ cos ζ = a/2 [cos(m+1)ζ + cos(m−1)ζ];  b sin mζ cos ζ = b/2 [sin(m+1)ζ + sin(m−1)ζ]
    add(x1, m + 1, 0.5 * a[m], 0.5 * b[m]);
    add(x1, m - 1, 0.5 * a[m], 0.5 * b[m]);
    // a cos mζ sin ζ = a/2 [sin(m+1)ζ − sin(m−1)ζ];  b sin mζ sin ζ = b/2 [cos(m−1)ζ − cos(m+1)ζ]
    add(x2, m + 1, -0.5 * b[m], 0.5 * a[m]);
    add(x2, m - 1, 0.5 * b[m], -0.5 * a[m]);
  }
  const std::size_t size = std::max(x1.cos_coeff.size(), x2.cos_coeff.size());
  for (auto* s : {&x1, &x2}) {
    s->cos_coeff.resize(size, 0.0);
    s->sin_coeff.resize(size, 0.0);
  }
  return PatchContour(std::move(x1), std::move(x2), epsilon);
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  const double scale = 1e-14 * (norm(b - a) * norm(c - a) + 1e-300);
  if (v > scale) return 1;
  if (v < -scale) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) && std::min(a.x2, b.x2) <= p.x2 &&
         p.x2 <= std::max(a.x2, b.x2);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

std::string to_string(PatchShape shape) {
  switch (shape) {
    case PatchShape::Disk: return "disk";
    case PatchShape::Ellipse: return "ellipse";
    case PatchShape::FourierPerturbed: return "fourier_perturbed";
  }
  return "disk";
}

PatchShape patch_shape_from_string(const std::string& name) {
  if (name == "disk") return PatchShape::Disk;
  if (name == "ellipse") return PatchShape::Ellipse;
  if (name == "fourier_perturbed" || name == "perturbed") return PatchShape::FourierPerturbed;
  fail(ErrorCode::Config, "unknown patch shape '" + name + "' (expected disk, ellipse or fourier_perturbed)");
}

PatchContour::PatchContour(Series x1, Series x2, double epsilon)
    : x1_(std::move(x1)), x2_(std::move(x2)), epsilon_(epsilon) {
  if (x1_.cos_coeff.size() != x2_.cos_coeff.size() || x1_.sin_coeff.size() != x1_.cos_coeff.size() ||
      x2_.sin_coeff.size() != x2_.cos_coeff.size() || x1_.cos_coeff.empty())
    fail(ErrorCode::InvalidArgument, "contour series must share one non-empty mode range");
}

Vec2 PatchContour::point(double z) const { return {eval_series(x1_, z, 0), eval_series(x2_, z, 0)}; }
Vec2 PatchContour::derivative(double z) const { return {eval_series(x1_, z, 1), eval_series(x2_, z, 1)}; }
Vec2 PatchContour::second_derivative(double z) const { return {eval_series(x1_, z, 2), eval_series(x2_, z, 2)}; }

double PatchContour::curvature(double z) const {
  const Vec2 d = derivative(z), dd = second_derivative(z);
  const double speed = norm(d);
  return cross(d, dd) / (speed * speed * speed);
}

double PatchContour::area() const {
  // ½∮(x₁x₂' − x₂x₁')dζ = π Σ_m m (a_m d_m − b_m c_m) for x₁ = Σ a cos + b sin, x₂ = Σ c cos + d sin.
  double s = 0.0;
  for (std::size_t m = 1; m < x1_.cos_coeff.size(); ++m)
    s += static_cast<double>(m) * (x1_.cos_coeff[m] * x2_.sin_coeff[m] - x1_.sin_coeff[m] * x2_.cos_coeff[m]);
  return kPi * s;
}

double PatchContour::length(int samples) const {
  double s = 0.0;
  for (double z : sample_parameters(samples)) s += norm(derivative(z));
  return s * 2.0 * kPi / samples;
}

double PatchContour::max_curvature(int samples) const {
  double m = 0.0;
  for (double z : sample_parameters(samples)) m = std::max(m, std::abs(curvature(z)));
  return m;
}

double PatchContour::min_speed(int samples) const {
  double m = std::numeric_limits<double>::infinity();
  for (double z : sample_parameters(samples)) m = std::min(m, norm(derivative(z)));
  return m;
}

Vec2 PatchContour::min_corner(int samples) const {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const Vec2& p : sample(samples)) lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2)};
  return lo;
}

Vec2 PatchContour::max_corner(int samples) const {
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& p : sample(samples)) hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2)};
  return hi;
}

std::vector<double> PatchContour::sample_parameters(int count) const {
  std::vector<double> z(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) z[i] = 2.0 * kPi * i / count;
  return z;
}

std::vector<Vec2> PatchContour::sample(int count) const {
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (double z : sample_parameters(count)) pts.push_back(point(z));
  return pts;
}

bool PatchContour::is_simple(int samples) const { return polygon_is_simple(sample(samples)); }

double polygon_area(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex to limit cancellation.
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) s += cross(pts[i] - pts[0], pts[i + 1] - pts[0]);
  return 0.5 * s;
}

bool polygon_is_simple(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    const double minx = std::min(a.x1, b.x1), maxx = std::max(a.x1, b.x1);
    const double miny = std::min(a.x2, b.x2), maxy = std::max(a.x2, b.x2);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      const Vec2& c = pts[j];
      const Vec2& d = pts[(j + 1) % n];
      if (std::max(c.x1, d.x1) < minx || std::min(c.x1, d.x1) > maxx || std::max(c.x2, d.x2) < miny ||
          std::min(c.x2, d.x2) > maxy)
        continue;
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

PatchContour build_contour(const PatchSpec& spec) {
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
    fail(ErrorCode::InvalidArgument, "contour Hölder exponent must lie in (0, 1)");
  std::vector<double> a, b;
  switch (spec.shape) {
    case PatchShape::Disk: {
      if (!(spec.radius > 0.0)) fail(ErrorCode::Geometry, "disk radius must be positive");
      a = {spec.radius};
      b = {0.0};
      break;
    }
    case PatchShape::Ellipse: {
      if (!(spec.semi_a > 0.0 && spec.semi_b > 0.0)) fail(ErrorCode::Geometry, "ellipse semi-axes must be positive");
      PatchContour::Series x1{{kPi, spec.semi_a}, {0.0, 0.0}};
      PatchContour::Series x2{{kPi, 0.0}, {0.0, spec.semi_b}};
      PatchContour c(std::move(x1), std::move(x2), spec.epsilon);
      return c;
    }
    case PatchShape::FourierPerturbed: {
      if (!(spec.radius > 0.0)) fail(ErrorCode::Geometry, "base radius must be positive");
      if (spec.modes.size() != spec.amplitudes.size())
        fail(ErrorCode::InvalidArgument, "fourier_perturbed needs one amplitude per mode");
      int top = 0;
      for (int m : spec.modes) {
        if (m < 2) fail(ErrorCode::InvalidArgument, "perturbation modes must be >= 2");
        top = std::max(top, m);
      }
      if (spec.random_modes < 0) fail(ErrorCode::InvalidArgument, "random_modes must be >= 0");
      top = std::max(top, spec.random_modes + 1);
      a.assign(static_cast<std::size_t>(top) + 1, 0.0);
      b.assign(static_cast<std::size_t>(top) + 1, 0.0);
      a[0] = spec.radius;
      for (std::size_t i = 0; i < spec.modes.size(); ++i) a[spec.modes[i]] += spec.amplitudes[i];
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
      for (int m = 2; m < 2 + spec.random_modes; ++m) {
        const double amp = spec.random_amplitude * normal(rng) * std::pow(m, -(1.5 + spec.epsilon));
        const double ph = phase(rng);
        a[m] += amp * std::cos(ph);
        b[m] += amp * std::sin(ph);
      }
      break;
    }
  }
  PatchContour c = polar_contour(a, b, spec.epsilon);
  for (double z : c.sample_parameters(2048)) {
    double r = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) r += a[m] * std::cos(m * z) + b[m] * std::sin(m * z);
    if (!(r > 0.0)) fail(ErrorCode::Geometry, "perturbed radius becomes non-positive");
  }
  if (!(c.min_speed() > 1e-8)) fail(ErrorCode::Geometry, "contour tangent vanishes");
  if (!c.is_simple(512)) fail(ErrorCode::Geometry, "contour self-intersects");
  return c;
}

void require_isolated_on_torus(const PatchContour& c) {
  const Vec2 lo = c.min_corner(), hi = c.max_corner();
  const double a = 0.5 * kPi, b = 1.5 * kPi;
  if (lo.x1 < a || lo.x2 < a || hi.x1 > b || hi.x2 > b) {
    std::ostringstream msg;
    msg << "patch bounding box [" << lo.x1 << ", " << hi.x1 << "] x [" << lo.x2 << ", " << hi.x2
        << "] leaves the central quarter of the torus";
    fail(ErrorCode::Geometry, msg.str());
  }
  const double torus = 4.0 * kPi * kPi;
  if (c.area() > torus / 16.0) fail(ErrorCode::Geometry, "patch area exceeds 1/16 of the torus");
}

void write_contour_csv(std::ostream& os, const std::vector<double>& zeta, const std::vector<Vec2>& pts) {
  if (zeta.size() != pts.size()) fail(ErrorCode::InvalidArgument, "contour CSV: size mismatch");
  os << "zeta,x1,x2\n" << std::setprecision(17);
  for (std::size_t i = 0; i < pts.size(); ++i) os << zeta[i] << ',' << pts[i].x1 << ',' << pts[i].x2 << '\n';
}

}  // namespace bpl
