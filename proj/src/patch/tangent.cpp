#include "patch/tangent.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "common/error.hpp"
#include "spectral/littlewood_paley.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

struct Kinematics {
  ScalarField v1, v2;
  ScalarField v1_x, v1_y, v2_x, v2_y;  // ∂ⱼvᵢ
};

Kinematics kinematics(const VelocityField& v) {
  const Spectrum a = fft::forward(v.u1), b = fft::forward(v.u2);
  return {v.u1, v.u2, fft::inverse(d1(a)), fft::inverse(d2(a)), fft::inverse(d1(b)), fft::inverse(d2(b))};
}

ScalarField dealiased(const ScalarField& f) {
  Spectrum s = fft::forward(f);
  dealias_in_place(s);
  return fft::inverse(s);
}

// −v·∇s, dealiased.
ScalarField transport_rhs(const ScalarField& s, const Kinematics& k) {
  const Spectrum sh = fft::forward(s);
  const ScalarField sx = fft::inverse(d1(sh)), sy = fft::inverse(d2(sh));
  ScalarField out(s.grid());
  for (std::size_t i = 0; i < out.grid().size(); ++i) out[i] = -(k.v1[i] * sx[i] + k.v2[i] * sy[i]);
  return dealiased(out);
}

// −v·∇X + X·∇v, dealiased.
VelocityField stretch_rhs(const VelocityField& X, const Kinematics& k) {
  VelocityField out{transport_rhs(X.u1, k), transport_rhs(X.u2, k)};
  ScalarField s1(X.grid()), s2(X.grid());
  for (std::size_t i = 0; i < X.grid().size(); ++i) {
    s1[i] = X.u1[i] * k.v1_x[i] + X.u2[i] * k.v1_y[i];
    s2[i] = X.u1[i] * k.v2_x[i] + X.u2[i] * k.v2_y[i];
  }
  out.u1 += dealiased(s1);
  out.u2 += dealiased(s2);
  return out;
}

TangentFamily axpy(const TangentFamily& X, const TangentFamily& rate, double h) {
  TangentFamily out = X;
  for (int l = 0; l < 2; ++l) {
    out.members[l].u1 += rate.members[l].u1 * h;
    out.members[l].u2 += rate.members[l].u2 * h;
    out.divergence[l] += rate.divergence[l] * h;
  }
  out.level.f += rate.level.f * h;
  return out;
}

TangentFamily rates(const TangentFamily& X, const Kinematics& k) {
  TangentFamily r = X;
  for (int l = 0; l < 2; ++l) {
    r.members[l] = stretch_rhs(X.members[l], k);
    r.divergence[l] = transport_rhs(X.divergence[l], k);
  }
  r.level.f = transport_rhs(X.level.f, k);
  return r;
}

VelocityField average(const VelocityField& a, const VelocityField& b) {
  return {(a.u1 + b.u1) * 0.5, (a.u2 + b.u2) * 0.5};
}

}  // namespace

double nondegeneracy(const TangentFamily& X) {
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < X.grid().size(); ++i) {
    double m = 0.0;
    for (const VelocityField& x : X.members) m = std::max(m, std::hypot(x.u1[i], x.u2[i]));
    inf = std::min(inf, m);
  }
  return inf;
}

double tangency_residual(const TangentFamily& X) {
  const Spectrum fh = fft::forward(X.level.f);
  const ScalarField fx = fft::inverse(d1(fh)), fy = fft::inverse(d2(fh));
  double worst = 0.0;
  for (std::size_t i = 0; i < X.grid().size(); ++i) {
    if (std::abs(X.level.f[i]) > X.level.zero_band) continue;
    for (const VelocityField& x : X.members) worst = std::max(worst, std::abs(x.u1[i] * fx[i] + x.u2[i] * fy[i]));
  }
  return worst;
}

TangentFamily initial_tangent_fields(const LevelSet& ls, double f_min) {
  const Grid2D& g = ls.f.grid();
  Spectrum fh = fft::forward(ls.f);
  dealias_in_place(fh);
  LevelSet level = ls;
  level.f = fft::inverse(fh);
  const ScalarField fx = fft::inverse(d1(fh)), fy = fft::inverse(d2(fh));

  double min_grad = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(level.f[i]) <= ls.band) min_grad = std::min(min_grad, std::hypot(fx[i], fy[i]));
  if (min_grad < f_min) {
    std::ostringstream msg;
    msg << "level set gradient " << min_grad << " falls below " << f_min << " on the band";
    fail(ErrorCode::Degenerate, msg.str());
  }

  const double half = 0.5 * ls.band;
  ScalarField cut(g);
  for (std::size_t i = 0; i < g.size(); ++i) cut[i] = smooth_step((std::abs(level.f[i]) - half) / half);

  TangentFamily X{{VelocityField{fy * -1.0, fx}, VelocityField{cut, ScalarField(g)}},
                  {ScalarField(g), ScalarField(g)},
                  std::move(level),
                  0.0};
  // ∇⊥f is divergence-free by construction; ∂₁(1 − χ) for the second member.
  X.divergence[0] = divergence(X.members[0]);
  X.divergence[1] = divergence(X.members[1]);
  const double I = nondegeneracy(X);
  if (!(I > 1e-8)) fail(ErrorCode::Degenerate, "tangent family is degenerate (I(X) <= 0)");
  return X;
}

TangentFamily advance_vectorfield(const TangentFamily& X, const VelocityField& v_start, const VelocityField& v_end,
                                  double dt) {
  require_same_grid(X.grid(), v_start.grid(), "advance_vectorfield");
  require_same_grid(X.grid(), v_end.grid(), "advance_vectorfield");
  if (!(dt >= 0.0)) fail(ErrorCode::InvalidArgument, "advance_vectorfield: dt must be non-negative");
  const double h = X.grid().spacing();
  const double speed = std::max(v_start.max_speed(), v_end.max_speed());
  if (dt * speed > h) {
    std::ostringstream msg;
    msg << "advance_vectorfield: dt*|v| = " << dt * speed << " exceeds the spacing " << h;
    fail(ErrorCode::CflViolation, msg.str());
  }
  if (dt == 0.0) return X;
  const Kinematics k0 = kinematics(v_start);
  const TangentFamily mid = axpy(X, rates(X, k0), 0.5 * dt);
  const Kinematics km = kinematics(average(v_start, v_end));
  TangentFamily out = axpy(X, rates(mid, km), dt);
  out.t = X.t + dt;
  return out;
}

TangentFamily advance_vectorfield(const TangentFamily& X, const VelocityField& v, double dt) {
  return advance_vectorfield(X, v, v, dt);
}

}  // namespace bpl
