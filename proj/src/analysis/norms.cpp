#include "analysis/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "spectral/littlewood_paley.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) {
    std::ostringstream msg;
    msg << what << ": exponent " << p << " must lie in [1, inf]";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "Hoelder exponent must lie in (0, 1)");
}

// Norm of pointwise magnitudes |a_i| with cell weight w.
template <class Mag>
double lp_of(std::size_t count, double cell, double p, Mag&& mag) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) m = std::max(m, mag(i));
    return m;
  }
  // Scale by the maximum so large p neither overflows nor underflows.
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) m = std::max(m, mag(i));
  if (m == 0.0) return 0.0;
  long double sum = 0.0L;
  if (p == 2.0) {
    for (std::size_t i = 0; i < count; ++i) {
      const double r = mag(i) / m;
      sum += r * r;
    }
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < count; ++i) {
      const double r = mag(i) / m;
      sum += (r * r) * (r * r);
    }
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < count; ++i) sum += mag(i) / m;
  } else {
    for (std::size_t i = 0; i < count; ++i) sum += std::pow(mag(i) / m, p);
  }
  return m * static_cast<double>(std::pow(static_cast<long double>(cell) * sum, 1.0L / p));
}

double aggregate(const std::vector<double>& terms, double r) {
  if (std::isinf(r)) return terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
  long double sum = 0.0L;
  for (double t : terms) sum += std::pow(static_cast<long double>(t), r);
  return static_cast<double>(std::pow(sum, 1.0L / r));
}

// Largest |g(x + m·e_a) − g(x)| / (m·h)^α over both axes and dyadic m.
template <class Diff>
double dyadic_holder(const Grid2D& g, double alpha, Diff&& diff) {
  const int n = g.n();
  const double h = g.spacing();
  double sup = 0.0;
  for (int m = 1; m <= n / 2; m *= 2) {
    const double scale = std::pow(m * h, alpha);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + m) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + m) % n;
        worst = std::max(worst, diff(g.at(i, j), g.at(ip, j)));
        worst = std::max(worst, diff(g.at(i, j), g.at(i, jp)));
      }
    }
    sup = std::max(sup, worst / scale);
  }
  return sup;
}

}  // namespace

double lebesgue_norm(const ScalarField& f, double p) {
  require_exponent(p, "lebesgue_norm");
  const double h = f.grid().spacing();
  return lp_of(f.grid().size(), h * h, p, [&](std::size_t i) { return std::abs(f[i]); });
}

double lebesgue_norm(const VelocityField& v, double p) {
  require_exponent(p, "lebesgue_norm");
  const double h = v.grid().spacing();
  return lp_of(v.grid().size(), h * h, p, [&](std::size_t i) { return std::hypot(v.u1[i], v.u2[i]); });
}

double normalized_lebesgue_norm(const ScalarField& f, double p) {
  require_exponent(p, "normalized_lebesgue_norm");
  return lp_of(f.grid().size(), 1.0 / static_cast<double>(f.grid().size()), p,
               [&](std::size_t i) { return std::abs(f[i]); });
}

VelocityField gradient(const ScalarField& f) {
  const Spectrum fh = fft::forward(f);
  return {fft::inverse(d1(fh)), fft::inverse(d2(fh))};
}

double sobolev_norm(const ScalarField& f, double p) { return lebesgue_norm(f, p) + lebesgue_norm(gradient(f), p); }

double besov_norm(const ScalarField& f, double s, double p, double r) {
  require_exponent(p, "besov_norm");
  require_exponent(r, "besov_norm");
  if (!(std::abs(s) <= 3.0)) fail(ErrorCode::InvalidArgument, "besov_norm: regularity index must satisfy |s| <= 3");
  const DyadicDecomposition d = lp_decompose(f);
  std::vector<double> terms;
  terms.reserve(d.blocks.size());
  for (const DyadicBlock& b : d.blocks) terms.push_back(std::exp2(std::max(b.q, 0) * s) * lebesgue_norm(b.field, p));
  return aggregate(terms, r);
}

double holder_seminorm(const ScalarField& f, double alpha) {
  require_alpha(alpha);
  return dyadic_holder(f.grid(), alpha, [&](std::size_t a, std::size_t b) { return std::abs(f[a] - f[b]); });
}

double holder_seminorm(const VelocityField& v, double alpha) {
  require_alpha(alpha);
  return dyadic_holder(v.grid(), alpha, [&](std::size_t a, std::size_t b) {
    return std::hypot(v.u1[a] - v.u1[b], v.u2[a] - v.u2[b]);
  });
}

double holder_norm(const ScalarField& f, double alpha) { return f.max_abs() + holder_seminorm(f, alpha); }

double holder_norm(const VelocityField& v, double alpha) { return v.max_speed() + holder_seminorm(v, alpha); }

ScalarField weak_directional_derivative(const ScalarField& omega, const VelocityField& X, const ScalarField& divX) {
  require_same_grid(omega.grid(), X.grid(), "weak_directional_derivative");
  require_same_grid(omega.grid(), divX.grid(), "weak_directional_derivative");
  const VelocityField flux{multiply(X.u1, omega), multiply(X.u2, omega)};
  return divergence(flux) - multiply(omega, divX);
}

double striated_seminorm(const ScalarField& omega, const TangentFamily& X, double epsilon) {
  require_alpha(epsilon);
  require_same_grid(omega.grid(), X.grid(), "striated_seminorm");
  const double I = nondegeneracy(X);
  if (!(I > 1e-12)) fail(ErrorCode::Degenerate, "striated_seminorm: family has I(X) <= 0");
  double coeff = 0.0, along = 0.0;
  for (std::size_t l = 0; l < X.members.size(); ++l) {
    coeff = std::max(coeff, holder_norm(X.members[l], epsilon) + holder_norm(X.divergence[l], epsilon));
    const ScalarField dx = weak_directional_derivative(omega, X.members[l], X.divergence[l]);
    along = std::max(along, besov_norm(dx, epsilon - 1.0, kInfinity, kInfinity));
  }
  return (omega.max_abs() * coeff + along) / I;
}

}  // namespace bpl
