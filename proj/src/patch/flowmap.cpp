#include "patch/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "common/error.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

struct Stencil {
  std::size_t i00, i01, i10, i11;
  double w00, w01, w10, w11;
};

Stencil stencil(const Grid2D& g, const Vec2& x) {
  const double h = g.spacing();
  const int n = g.n();
  const double s1 = wrap(x.x1) / h, s2 = wrap(x.x2) / h;
  int a = static_cast<int>(std::floor(s1)), b = static_cast<int>(std::floor(s2));
  const double f1 = s1 - a, f2 = s2 - b;
  a %= n;
  b %= n;
  const int a1 = (a + 1) % n, b1 = (b + 1) % n;
  return {g.at(a, b), g.at(a, b1), g.at(a1, b), g.at(a1, b1),
          (1 - f1) * (1 - f2), (1 - f1) * f2, f1 * (1 - f2), f1 * f2};
}

double apply(const Stencil& s, const std::vector<double>& v) {
  return s.w00 * v[s.i00] + s.w01 * v[s.i01] + s.w10 * v[s.i10] + s.w11 * v[s.i11];
}

}  // namespace

VelocitySampler::Level VelocitySampler::make_level(const VelocityField& v) {
  Level l{fft::forward(v.u1), fft::forward(v.u2), {}, {}, {}, {}, {}, {}};
  auto copy = [](const ScalarField& f) { return std::vector<double>(f.values().begin(), f.values().end()); };
  l.v1 = copy(v.u1);
  l.v2 = copy(v.u2);
  l.a11 = copy(fft::inverse(d1(l.v1_hat)));
  l.a12 = copy(fft::inverse(d2(l.v1_hat)));
  l.a21 = copy(fft::inverse(d1(l.v2_hat)));
  l.a22 = copy(fft::inverse(d2(l.v2_hat)));
  return l;
}

VelocitySampler::VelocitySampler(double t0, const VelocityField& v0, double t1, const VelocityField& v1)
    : grid_(v0.grid()), t0_(t0), t1_(t1), l0_(make_level(v0)), l1_(make_level(v1)) {
  require_same_grid(v0.grid(), v1.grid(), "VelocitySampler");
  if (!(t1 >= t0)) fail(ErrorCode::InvalidArgument, "VelocitySampler: t1 must not precede t0");
}

VelocitySampler VelocitySampler::steady(const VelocityField& v) {
  VelocitySampler s(0.0, v, 0.0, v);
  s.steady_ = true;
  return s;
}

double VelocitySampler::weight(double t) const {
  if (steady_) return 0.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(t1_));
  if (t < t0_ - tol || t > t1_ + tol) {
    std::ostringstream msg;
    msg << "velocity requested at t = " << t << " outside the sampler window [" << t0_ << ", " << t1_ << "]";
    fail(ErrorCode::SamplerTime, msg.str());
  }
  if (t1_ == t0_) return 0.0;
  return std::clamp((t - t0_) / (t1_ - t0_), 0.0, 1.0);
}

void VelocitySampler::spectral(double t, std::span<const Vec2> x, std::span<Vec2> out) const {
  const double w = weight(t);
  const Grid2D& g = grid_;
  const int n = g.n(), half = g.half();

  // Active rows and columns, with the time blend and the conjugate-pair
  // weights folded into compact real/imaginary tables.
  struct Row {
    int k1;
    std::size_t base;
  };
  std::vector<Row> rows;
  int jmax = 0, kmax = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    bool any = false;
    for (int j2 = 0; j2 < half; ++j2) {
      const std::size_t idx = g.spectral_at(i1, j2);
      if (l0_.v1_hat[idx] != Complex{} || l0_.v2_hat[idx] != Complex{} || l1_.v1_hat[idx] != Complex{} ||
          l1_.v2_hat[idx] != Complex{}) {
        any = true;
        jmax = std::max(jmax, j2);
      }
    }
    if (any) {
      rows.push_back({g.wavenumber(i1), g.spectral_at(i1, 0)});
      kmax = std::max(kmax, std::abs(g.wavenumber(i1)));
    }
  }
  const std::size_t cols = static_cast<std::size_t>(jmax) + 1;
  std::vector<double> a1r(rows.size() * cols), a1i(a1r.size()), a2r(a1r.size()), a2i(a1r.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < cols; ++j) {
      // Interior columns stand for a conjugate pair; the edges (j₂ = 0, n/2) do not.
      const double wj = (j == 0 || static_cast<int>(j) == n / 2) ? 1.0 : 2.0;
      const std::size_t idx = rows[r].base + j;
      const Complex c1 = wj * ((1.0 - w) * l0_.v1_hat[idx] + w * l1_.v1_hat[idx]);
      const Complex c2 = wj * ((1.0 - w) * l0_.v2_hat[idx] + w * l1_.v2_hat[idx]);
      a1r[r * cols + j] = c1.real();
      a1i[r * cols + j] = c1.imag();
      a2r[r * cols + j] = c2.real();
      a2i[r * cols + j] = c2.imag();
    }

  // e^{ikθ} for k = 0..m by recurrence, re-anchored every 32 steps.
  auto powers = [](double theta, int m, std::vector<double>& c, std::vector<double>& s) {
    c.resize(static_cast<std::size_t>(m) + 1);
    s.resize(c.size());
    c[0] = 1.0;
    s[0] = 0.0;
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    for (int k = 1; k <= m; ++k) {
      if (k % 32 == 0) {
        c[k] = std::cos(k * theta);
        s[k] = std::sin(k * theta);
      } else {
        c[k] = c[k - 1] * c1 - s[k - 1] * s1;
        s[k] = s[k - 1] * c1 + c[k - 1] * s1;
      }
    }
  };
  std::vector<double> e2c, e2s, e1c, e1s;
  for (std::size_t p = 0; p < x.size(); ++p) {
    powers(x[p].x2, jmax, e2c, e2s);
    powers(x[p].x1, kmax, e1c, e1s);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double* p1r = &a1r[r * cols];
      const double* p1i = &a1i[r * cols];
      const double* p2r = &a2r[r * cols];
      const double* p2i = &a2i[r * cols];
      double r1r = 0.0, r1i = 0.0, r2r = 0.0, r2i = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        r1r += p1r[j] * e2c[j] - p1i[j] * e2s[j];
        r1i += p1r[j] * e2s[j] + p1i[j] * e2c[j];
        r2r += p2r[j] * e2c[j] - p2i[j] * e2s[j];
        r2i += p2r[j] * e2s[j] + p2i[j] * e2c[j];
      }
      const int k1 = rows[r].k1;
      const double ec = e1c[std::abs(k1)], es = k1 < 0 ? -e1s[-k1] : e1s[k1];
      s1 += ec * r1r - es * r1i;
      s2 += ec * r2r - es * r2i;
    }
    out[p] = {s1, s2};
  }
}

void VelocitySampler::bilinear(double t, std::span<const Vec2> x, std::span<Vec2> out) const {
  const double w = weight(t);
  for (std::size_t p = 0; p < x.size(); ++p) {
    const Stencil s = stencil(grid_, x[p]);
    out[p] = {(1 - w) * apply(s, l0_.v1) + w * apply(s, l1_.v1), (1 - w) * apply(s, l0_.v2) + w * apply(s, l1_.v2)};
  }
}

void VelocitySampler::gradient_bilinear(double t, std::span<const Vec2> x, std::span<Mat2> out) const {
  const double w = weight(t);
  for (std::size_t p = 0; p < x.size(); ++p) {
    const Stencil s = stencil(grid_, x[p]);
    auto mix = [&](const std::vector<double>& a, const std::vector<double>& b) {
      return (1 - w) * apply(s, a) + w * apply(s, b);
    };
    out[p] = {mix(l0_.a11, l1_.a11), mix(l0_.a12, l1_.a12), mix(l0_.a21, l1_.a21), mix(l0_.a22, l1_.a22)};
  }
}

FlowMap make_flowmap(const PatchContour& c, int lattice_n, int samples) {
  if (lattice_n < 0 || samples < 0) fail(ErrorCode::InvalidArgument, "tracer counts must be non-negative");
  FlowMap fm;
  fm.lattice_n = lattice_n;
  const double h = kTwoPi / std::max(lattice_n, 1);
  for (int i = 0; i < lattice_n; ++i)
    for (int j = 0; j < lattice_n; ++j) fm.lattice.push_back({(i + 0.5) * h, (j + 0.5) * h});
  fm.jacobian.assign(fm.lattice.size(), Mat2::identity());
  fm.contour_zeta = c.sample_parameters(samples);
  fm.contour = c.sample(samples);
  return fm;
}

FlowMap advance_flowmap(const FlowMap& fm, const VelocitySampler& v, double dt) {
  if (!(dt >= 0.0)) fail(ErrorCode::InvalidArgument, "advance_flowmap: dt must be non-negative");
  const double t0 = fm.t, tm = fm.t + 0.5 * dt, t1 = fm.t + dt;
  // Validate the whole window up front so a failed step leaves no partial state.
  std::vector<Vec2> probe(0);
  v.bilinear(t0, probe, {});
  v.bilinear(t1, probe, {});
  FlowMap out = fm;
  out.t = t1;
  if (dt == 0.0) return out;

  const std::size_t nl = fm.lattice.size();
  std::vector<Vec2> k(nl), mid(nl);
  std::vector<Mat2> a(nl), jm(nl);
  // Positions use the exact Fourier sampler; ∇v for the Jacobian is bilinear.
  v.spectral(t0, fm.lattice, k);
  v.gradient_bilinear(t0, fm.lattice, a);
  for (std::size_t i = 0; i < nl; ++i) {
    mid[i] = fm.lattice[i] + k[i] * (0.5 * dt);
    jm[i] = fm.jacobian[i] + (a[i] * fm.jacobian[i]) * (0.5 * dt);
  }
  v.spectral(tm, mid, k);
  v.gradient_bilinear(tm, mid, a);
  for (std::size_t i = 0; i < nl; ++i) {
    out.lattice[i] = fm.lattice[i] + k[i] * dt;
    out.jacobian[i] = fm.jacobian[i] + (a[i] * jm[i]) * dt;
  }

  const std::size_t nc = fm.contour.size();
  std::vector<Vec2> kc(nc), midc(nc);
  v.spectral(t0, fm.contour, kc);
  for (std::size_t i = 0; i < nc; ++i) midc[i] = fm.contour[i] + kc[i] * (0.5 * dt);
  v.spectral(tm, midc, kc);
  for (std::size_t i = 0; i < nc; ++i) out.contour[i] = fm.contour[i] + kc[i] * dt;
  return out;
}

double flowmap_distance(const FlowMap& a, const FlowMap& b) {
  if (a.lattice.size() != b.lattice.size() || a.contour.size() != b.contour.size())
    fail(ErrorCode::InvalidArgument, "flow maps carry different tracer sets");
  double m = 0.0;
  for (std::size_t i = 0; i < a.lattice.size(); ++i) m = std::max(m, norm(a.lattice[i] - b.lattice[i]));
  for (std::size_t i = 0; i < a.contour.size(); ++i) m = std::max(m, norm(a.contour[i] - b.contour[i]));
  return m;
}

}  // namespace bpl
