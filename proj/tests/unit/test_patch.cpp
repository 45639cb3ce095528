#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "common/error.hpp"
#include "patch/contour.hpp"
#include "patch/diagnostics.hpp"
#include "patch/flowmap.hpp"
#include "patch/levelset.hpp"
#include "patch/tangent.hpp"
#include "solver/state.hpp"
#include "solver/stepper.hpp"
#include "spectral/ops.hpp"
#include "test_support.hpp"

using namespace bpl;
using bpl::testing::local_rotation;

namespace {

constexpr double kPi = std::numbers::pi;

PatchSpec disk(double r) {
  PatchSpec s;
  s.radius = r;
  return s;
}

PatchSpec perturbed() {
  PatchSpec s;
  s.shape = PatchShape::FourierPerturbed;
  s.radius = 0.8;
  s.modes = {3, 5};
  s.amplitudes = {0.05, 0.02};
  return s;
}

// Star-shaped oracle: the polar angle about the centre increases strictly,
// which forces a simple curve when r > 0.
bool polar_angle_monotone(const PatchContour& c, int samples) {
  double prev = 0.0, total = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const Vec2 p = c.point(2 * kPi * i / samples);
    const double a = std::atan2(p.x2 - kPi, p.x1 - kPi);
    if (i > 0) {
      double d = a - prev;
      if (d < -kPi) d += 2 * kPi;
      if (d <= 0.0) return false;
      total += d;
    }
    prev = a;
  }
  return std::abs(total - 2 * kPi) < 1e-9;
}

double radius_about_centre(const Vec2& p) { return std::hypot(p.x1 - kPi, p.x2 - kPi); }

}  // namespace

TEST_SUITE("patch_lab") {

TEST_CASE("disk contour") {
  const PatchContour c = build_contour(disk(0.8));
  for (double z : {0.0, 0.7, 2.0, 4.5}) {
    CHECK(c.curvature(z) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(radius_about_centre(c.point(z)) == doctest::Approx(0.8).epsilon(1e-14));
  }
  CHECK(c.area() == doctest::Approx(kPi * 0.64).epsilon(1e-14));
  CHECK(c.length() == doctest::Approx(2 * kPi * 0.8).epsilon(1e-12));
  CHECK(c.is_simple());
}

TEST_CASE("ellipse with a = b is the disk") {
  PatchSpec e;
  e.shape = PatchShape::Ellipse;
  e.semi_a = e.semi_b = 0.8;
  const PatchContour ce = build_contour(e), cd = build_contour(disk(0.8));
  for (int i = 0; i < 64; ++i) {
    const double z = 2 * kPi * i / 64;
    CHECK(norm(ce.point(z) - cd.point(z)) < 1e-14);
  }
  CHECK(ce.area() == doctest::Approx(cd.area()).epsilon(1e-14));
}

TEST_CASE("perturbed disk is simple") {
  const PatchContour c = build_contour(perturbed());
  CHECK(c.is_simple(1024));
  CHECK(polar_angle_monotone(c, 4096));
  // Area of a polar curve: ½∫r² = π(r₀² + ½Σa_m²).
  CHECK(c.area() == doctest::Approx(kPi * (0.64 + 0.5 * (0.05 * 0.05 + 0.02 * 0.02))).epsilon(1e-13));
}

TEST_CASE("seeded random perturbation is reproducible") {
  PatchSpec s = perturbed();
  s.random_modes = 6;
  s.random_amplitude = 0.05;
  const PatchContour a = build_contour(s), b = build_contour(s);
  CHECK(norm(a.point(1.0) - b.point(1.0)) == 0.0);
  s.seed = 7;
  const PatchContour c = build_contour(s);
  CHECK(norm(a.point(1.0) - c.point(1.0)) > 0.0);
  CHECK(polar_angle_monotone(a, 4096));
}

TEST_CASE("geometry errors") {
  PatchSpec bad = perturbed();
  bad.amplitudes = {0.9, 0.0};  // radius crosses zero
  CHECK_THROWS_AS(build_contour(bad), Error);
  // Figure eight: x = sin 2ζ, y = sin ζ.
  PatchContour::Series x1{{kPi, 0.0, 0.0}, {0.0, 0.0, 0.5}}, x2{{kPi, 0.0, 0.0}, {0.0, 0.5, 0.0}};
  PatchContour eight(x1, x2, 0.5);
  CHECK_FALSE(eight.is_simple());
  try {
    require_isolated_on_torus(build_contour(disk(2.0)));
    FAIL("expected Geometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Geometry);
  }
}

TEST_CASE("contour CSV") {
  const PatchContour c = build_contour(disk(0.8));
  std::ostringstream os;
  write_contour_csv(os, c.sample_parameters(4), c.sample(4));
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  std::getline(is, line);
  CHECK(line == "zeta,x1,x2");
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("signed distance of the disk") {
  Grid2D g(64);
  const PatchContour c = build_contour(disk(0.8));
  const ScalarField d = signed_distance(c, g, 0.6);
  double worst = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double exact = std::hypot(g.coordinate(i1) - kPi, g.coordinate(i2) - kPi) - 0.8;
      const double expect = std::clamp(exact, -0.6, 0.6);
      worst = std::max(worst, std::abs(d.at(i1, i2) - expect));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("rasterized disk: amplitude and area") {
  Grid2D g(128);
  const PatchContour c = build_contour(disk(0.8));
  const RasterizedPatch p = rasterize_patch(c, g);
  CHECK(p.delta == doctest::Approx(4 * g.spacing()));
  const double raw_max = p.omega0.max() + p.removed_mean;
  CHECK(raw_max >= 1.0 - 1e-6);
  CHECK(raw_max <= 1.0);
  const double area = p.removed_mean * g.area();
  CHECK(std::abs(area - kPi * 0.64) < p.delta * c.length() * 0.1);
  CHECK(std::abs(p.omega0.mean()) < 1e-14);
  CHECK(p.levelset.band == doctest::Approx(std::min(4 * p.delta, 0.4)));
}

TEST_CASE("wide ramp stays mean-free") {
  Grid2D g(64);
  const RasterizedPatch p = rasterize_patch(build_contour(disk(0.8)), g, 0.5);
  CHECK(std::abs(p.omega0.mean()) < 1e-14);
  CHECK(p.omega0.max() + p.removed_mean < 1.0 - 1e-3);
}

TEST_CASE("two-grid agreement of the ramp") {
  const PatchContour c = build_contour(disk(0.8));
  Grid2D g(64), g2(128);
  const RasterizedPatch a = rasterize_patch(c, g, 0.2), b = rasterize_patch(c, g2, 0.2);
  double worst = 0.0;
  for (int i1 = 0; i1 < 64; ++i1)
    for (int i2 = 0; i2 < 64; ++i2)
      worst = std::max(worst, std::abs((a.omega0.at(i1, i2) + a.removed_mean) -
                                       (b.omega0.at(2 * i1, 2 * i2) + b.removed_mean)));
  CHECK(worst < g.spacing() * g.spacing());
}

TEST_CASE("level-set profile is the identity on the band and flat beyond") {
  CHECK(levelset_profile(0.1, 0.3, 0.6) == 0.1);
  CHECK(levelset_profile(-0.2, 0.3, 0.6) == -0.2);
  const double top = levelset_profile(0.6, 0.3, 0.6);
  CHECK(top == doctest::Approx(0.3 + 0.15).epsilon(1e-10));
  CHECK(levelset_profile(5.0, 0.3, 0.6) == top);
  // Slope is the derivative of the profile.
  for (double d : {0.35, 0.45, 0.55}) {
    const double fd = (levelset_profile(d + 1e-6, 0.3, 0.6) - levelset_profile(d - 1e-6, 0.3, 0.6)) / 2e-6;
    CHECK(fd == doctest::Approx(levelset_profile_slope(d, 0.3, 0.6)).epsilon(1e-6));
  }
}

TEST_CASE("disk tangent family is azimuthal and tangent") {
  Grid2D g(128);
  const RasterizedPatch p = rasterize_patch(build_contour(disk(0.8)), g);
  const TangentFamily X = initial_tangent_fields(p.levelset);
  CHECK(tangency_residual(X) <= 1e-8);
  // On the band X₀ = ∇⊥d = (−sin φ, cos φ).
  double worst = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double y1 = g.coordinate(i1) - kPi, y2 = g.coordinate(i2) - kPi, r = std::hypot(y1, y2);
      if (std::abs(r - 0.8) > 0.5 * p.levelset.band) continue;
      const std::size_t i = g.at(i1, i2);
      worst = std::max(worst, std::hypot(X.members[0].u1[i] + y2 / r, X.members[0].u2[i] - y1 / r));
    }
  CHECK(worst < 1e-2);
  CHECK(nondegeneracy(X) > 0.9);
  // Far from the boundary the second member is e₁.
  const std::size_t far = g.at(2, 2);
  CHECK(X.members[1].u1[far] == 1.0);
  CHECK(std::abs(X.members[1].u2[far]) < 1e-12);
  CHECK(std::abs(X.divergence[0].max_abs()) < 1e-10);
}

TEST_CASE("perturbed family is non-degenerate") {
  Grid2D g(128);
  const RasterizedPatch p = rasterize_patch(build_contour(perturbed()), g);
  const TangentFamily X = initial_tangent_fields(p.levelset);
  const double I = nondegeneracy(X);
  MESSAGE("I(X) for the perturbed disk: " << I);
  CHECK(I > 0.5);
}

TEST_CASE("degenerate level set is rejected") {
  Grid2D g(32);
  LevelSet ls{ScalarField(g), 0.5, 1.0, 0.1};
  CHECK_THROWS_AS(initial_tangent_fields(ls), Error);
}

TEST_CASE("flow map: zero and constant velocity") {
  Grid2D g(32);
  const PatchContour c = build_contour(disk(0.8));
  const FlowMap fm = make_flowmap(c, 8, 64);
  const FlowMap still = advance_flowmap(fm, VelocitySampler::steady({ScalarField(g), ScalarField(g)}), 0.1);
  CHECK(flowmap_distance(fm, still) == 0.0);
  const VelocityField one{ScalarField::constant(g, 1.0), ScalarField(g)};
  const FlowMap moved = advance_flowmap(fm, VelocitySampler::steady(one), 0.1);
  double worst = 0.0;
  for (std::size_t i = 0; i < fm.lattice.size(); ++i)
    worst = std::max(worst, norm(moved.lattice[i] - fm.lattice[i] - Vec2{0.1, 0.0}));
  for (std::size_t i = 0; i < fm.contour.size(); ++i)
    worst = std::max(worst, norm(moved.contour[i] - fm.contour[i] - Vec2{0.1, 0.0}));
  CHECK(worst < 1e-14);
  CHECK(moved.t == doctest::Approx(0.1));
}

TEST_CASE("flow map: sampler window is enforced") {
  Grid2D g(32);
  const VelocityField z{ScalarField(g), ScalarField(g)};
  VelocitySampler s(0.0, z, 0.1, z);
  const FlowMap fm = make_flowmap(build_contour(disk(0.8)), 4, 16);
  try {
    advance_flowmap(fm, s, 0.2);
    FAIL("expected SamplerTime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SamplerTime);
  }
}

TEST_CASE("spectral sampler interpolates a band-limited field exactly") {
  Grid2D g(32);
  auto f = [](double x1, double x2) { return std::sin(3 * x1 - 2 * x2) + 0.5 * std::cos(5 * x2) + 0.25; };
  const VelocityField v{ScalarField::from_function(g, f), ScalarField::from_function(g, [&](double a, double b) {
                          return f(b, a);
                        })};
  const VelocitySampler s = VelocitySampler::steady(v);
  std::vector<Vec2> x{{0.123, 4.56}, {-1.0, 9.0}, {3.0, 3.0}}, out(3);
  s.spectral(0.0, x, out);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(out[i].x1 == doctest::Approx(f(x[i].x1, x[i].x2)).epsilon(1e-13));
    CHECK(out[i].x2 == doctest::Approx(f(x[i].x2, x[i].x1)).epsilon(1e-13));
  }
}

TEST_CASE("flow map: rigid rotation keeps radius to second order") {
  Grid2D g(128);
  const VelocitySampler rot = VelocitySampler::steady(local_rotation(g));
  const PatchContour c = build_contour(disk(0.8));
  auto radius_error = [&](int steps) {
    FlowMap fm = make_flowmap(c, 0, 64);
    const double dt = 1.0 / steps;
    for (int k = 0; k < steps; ++k) fm = advance_flowmap(fm, rot, dt);
    double worst = 0.0;
    for (std::size_t i = 0; i < fm.contour.size(); ++i) {
      worst = std::max(worst, std::abs(radius_about_centre(fm.contour[i]) - 0.8));
    }
    return worst;
  };
  const double e1 = radius_error(10), e2 = radius_error(20);
  MESSAGE("rotation radius error: " << e1 << " -> " << e2);
  CHECK(e1 < 2e-4);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("flow map: Jacobian of a rotation stays unimodular to second order") {
  Grid2D g(64);
  const VelocitySampler rot = VelocitySampler::steady(local_rotation(g));
  auto deviation = [&](int steps) {
    FlowMap fm = make_flowmap(build_contour(disk(0.8)), 16, 0);
    for (int k = 0; k < steps; ++k) fm = advance_flowmap(fm, rot, 1.0 / steps);
    return boundary_diagnostics(fm, nullptr, 0.5, 1.0).jacobian_max_deviation;
  };
  const double e1 = deviation(20), e2 = deviation(40);
  MESSAGE("rotation det error: " << e1 << " -> " << e2);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("vector field: zero velocity leaves X unchanged") {
  Grid2D g(64);
  const TangentFamily X = initial_tangent_fields(rasterize_patch(build_contour(disk(0.8)), g).levelset);
  const TangentFamily Y = advance_vectorfield(X, {ScalarField(g), ScalarField(g)}, 0.1);
  CHECK(bpl::testing::max_abs_diff(X.members[0].u1, Y.members[0].u1) == 0.0);
  CHECK(bpl::testing::max_abs_diff(X.level.f, Y.level.f) == 0.0);
  CHECK(Y.t == doctest::Approx(0.1));
}

TEST_CASE("vector field: constant X under rigid rotation turns by angle t") {
  // Cellular flow v = (sin x₂, −sin x₁): (π, π) is a stagnation point whose
  // velocity gradient is the unit rotation, so there X(t) = (cos t, sin t).
  Grid2D g(64);
  const VelocityField v{ScalarField::from_function(g, [](double, double x2) { return std::sin(x2); }),
                        ScalarField::from_function(g, [](double x1, double) { return -std::sin(x1); })};
  auto run = [&](int steps) {
    TangentFamily X{{VelocityField{ScalarField::constant(g, 1.0), ScalarField(g)},
                     VelocityField{ScalarField(g), ScalarField(g)}},
                    {ScalarField(g), ScalarField(g)},
                    LevelSet{ScalarField(g), 0.1, 0.2, 0.05},
                    0.0};
    for (int k = 0; k < steps; ++k) X = advance_vectorfield(X, v, 1.0 / steps);
    const std::size_t c = g.at(32, 32);
    return std::hypot(X.members[0].u1[c] - std::cos(1.0), X.members[0].u2[c] - std::sin(1.0));
  };
  const double e1 = run(20), e2 = run(40);
  MESSAGE("vector rotation error: " << e1 << " -> " << e2);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("vector field: CFL violation") {
  Grid2D g(32);
  const TangentFamily X = initial_tangent_fields(rasterize_patch(build_contour(disk(0.8)), g, 0.4).levelset);
  const VelocityField fast{ScalarField::constant(g, 10.0), ScalarField(g)};
  try {
    advance_vectorfield(X, fast, 0.1);
    FAIL("expected CflViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CflViolation);
  }
}

TEST_CASE("push-forward: grid transport agrees with the flow-map formula") {
  // Disk patch with buoyancy so the flow is not radial; fixed physical ramp width.
  auto discrepancy = [](int n) {
    Grid2D g(n);
    const PatchContour c = build_contour(disk(0.8));
    const RasterizedPatch p = rasterize_patch(c, g, 0.2);
    auto th = ScalarField::from_function(g, [](double a, double b) { return 0.5 * std::sin(a) * std::sin(b); });
    State s = make_initial_state(p.omega0, th, 0.0, KappaProfile::make(KappaKind::Sin, 0.1));
    TangentFamily X = initial_tangent_fields(p.levelset);
    const TangentFamily X0 = X;
    FlowMap fm = make_flowmap(c, 16, 0);
    const FlowMap fm0 = fm;
    VelocityField v = biot_savart(s.omega);
    const double dt = 0.4 * 2 * kPi / 256;  // one law for both grids
    const int steps = static_cast<int>(std::lround(0.5 / dt));
    for (int k = 0; k < steps; ++k) {
      State next = step(s, dt);
      VelocityField vn = biot_savart(next.omega);
      fm = advance_flowmap(fm, VelocitySampler(s.t, v, next.t, vn), dt);
      X = advance_vectorfield(X, v, vn, dt);
      s = std::move(next);
      v = std::move(vn);
    }
    // Route 1: F·X₀ at the initial lattice points. Route 2: X_t sampled at Ψ.
    const VelocitySampler grid_x = VelocitySampler::steady(X.members[0]);
    const VelocitySampler grid_x0 = VelocitySampler::steady(X0.members[0]);
    std::vector<Vec2> at_psi(fm.lattice.size()), at_start(fm.lattice.size());
    grid_x.bilinear(0.0, fm.lattice, at_psi);
    grid_x0.bilinear(0.0, fm0.lattice, at_start);
    double worst = 0.0;
    for (std::size_t i = 0; i < fm.lattice.size(); ++i)
      worst = std::max(worst, norm(fm.jacobian[i] * at_start[i] - at_psi[i]));
    return worst;
  };
  const double e64 = discrepancy(64), e128 = discrepancy(128);
  MESSAGE("push-forward discrepancy: n=64 " << e64 << ", n=128 " << e128 << ", order "
                                            << std::log2(e64 / e128));
  CHECK(std::log2(e64 / e128) >= 1.0);
}

TEST_CASE("boundary diagnostics of the initial disk") {
  const double r = 0.8, eps = 0.5;
  const PatchContour c = build_contour(disk(r));
  const FlowMap fm = make_flowmap(c, 8, 1024);
  const BoundaryRecord rec = boundary_diagnostics(fm, nullptr, eps, c.area());
  // Circle oracle: |τ(s) − τ(s')| = 2 sin(Δ/2r) for arc separation Δ.
  const double L = 2 * kPi * r;
  double expect = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const double d = std::ldexp(L, -j);
    expect = std::max(expect, 2 * std::sin(d / (2 * r)) / std::pow(d, eps));
  }
  CHECK(std::abs(rec.tangent_holder - expect) <= 1e-3 * expect);
  CHECK(rec.area_drift < 1e-4);
  CHECK(rec.jacobian_max_deviation == 0.0);
  CHECK(rec.simple);
}

TEST_CASE("boundary diagnostics are invariant under identity and rotation flows") {
  Grid2D g(128);
  const PatchContour c = build_contour(perturbed());
  FlowMap fm = make_flowmap(c, 16, 1024);
  const BoundaryRecord r0 = boundary_diagnostics(fm, nullptr, 0.5, c.area());
  const FlowMap same = advance_flowmap(fm, VelocitySampler::steady({ScalarField(g), ScalarField(g)}), 0.3);
  const BoundaryRecord ri = boundary_diagnostics(same, nullptr, 0.5, c.area());
  CHECK(ri.tangent_holder == r0.tangent_holder);
  CHECK(ri.area == r0.area);

  const VelocitySampler rot = VelocitySampler::steady(local_rotation(g));
  auto rotated = [&](int steps) {
    FlowMap f = fm;
    for (int k = 0; k < steps; ++k) f = advance_flowmap(f, rot, 1.0 / steps);
    return boundary_diagnostics(f, nullptr, 0.5, c.area());
  };
  const BoundaryRecord a = rotated(20), b = rotated(40);
  MESSAGE("rotation: area drift " << a.area_drift << " -> " << b.area_drift << ", det " << a.jacobian_max_deviation
                                  << " -> " << b.jacobian_max_deviation);
  CHECK(std::abs(a.tangent_holder - r0.tangent_holder) < 1e-3 * r0.tangent_holder);
  CHECK(a.area_drift < 1e-4);
  CHECK(a.area_drift / b.area_drift > 3.5);
  CHECK(a.jacobian_max_deviation / b.jacobian_max_deviation > 3.5);
}

}  // TEST_SUITE
