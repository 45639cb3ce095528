#include "spectral/ops.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"

namespace bpl {
namespace {

Complex ipow(int order) {
  switch (order % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

Spectrum spectral_derivative(const Spectrum& s, Axis axis, int order) {
  if (order < 1 || order > 4)
    fail(ErrorCode::InvalidArgument, "derivative order must be in 1..4, got " + std::to_string(order));
  const Grid2D& g = s.grid();
  const int nyq = g.n() / 2;
  const bool odd = order % 2 == 1;
  const Complex unit = ipow(order);
  Spectrum out = s;
  out.for_each_mode([&](int k1, int k2, Complex& c) {
    const int k = axis == Axis::X1 ? k1 : k2;
    if (odd && k == nyq) {
      c = 0.0;
      return;
    }
    c *= unit * std::pow(static_cast<double>(k), order);
  });
  return out;
}

ScalarField spectral_derivative(const ScalarField& f, Axis axis, int order) {
  return fft::inverse(spectral_derivative(fft::forward(f), axis, order));
}

Spectrum d1(const Spectrum& s) { return spectral_derivative(s, Axis::X1, 1); }
Spectrum d2(const Spectrum& s) { return spectral_derivative(s, Axis::X2, 1); }

void biot_savart(const Spectrum& omega_hat, Spectrum& v1_hat, Spectrum& v2_hat) {
  const Grid2D& g = omega_hat.grid();
  const int nyq = g.n() / 2;
  v1_hat = Spectrum(g);
  v2_hat = Spectrum(g);
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int k2 = 0; k2 < g.half(); ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const std::size_t idx = g.spectral_at(i1, k2);
      const double k_sq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      const Complex w = omega_hat[idx] / k_sq;
      // v̂₁ = i k₂ ω̂/|k|², v̂₂ = −i k₁ ω̂/|k|²; odd multipliers drop their Nyquist line.
      v1_hat[idx] = k2 == nyq ? Complex(0.0) : Complex(0.0, k2) * w;
      v2_hat[idx] = k1 == nyq ? Complex(0.0) : Complex(0.0, -k1) * w;
    }
  }
}

VelocityField biot_savart(const ScalarField& omega) {
  Spectrum w = fft::forward(omega);
  const double mean = w[0].real();
  if (std::abs(mean) > kMeanTolerance) {
    std::ostringstream msg;
    msg << "vorticity mean " << mean << " exceeds tolerance " << kMeanTolerance;
    fail(ErrorCode::MeanNotZero, msg.str());
  }
  Spectrum v1(w.grid()), v2(w.grid());
  biot_savart(w, v1, v2);
  return {fft::inverse(v1), fft::inverse(v2)};
}

ScalarField curl(const VelocityField& v) {
  return fft::inverse(d1(fft::forward(v.u2)) - d2(fft::forward(v.u1)));
}

ScalarField divergence(const VelocityField& v) {
  return fft::inverse(d1(fft::forward(v.u1)) + d2(fft::forward(v.u2)));
}

bool is_dealiased_mode(const Grid2D& g, int k1, int k2) {
  const double cutoff = g.n() / 3.0;
  return std::abs(k1) > cutoff || std::abs(k2) > cutoff;
}

void dealias_in_place(Spectrum& s) {
  const Grid2D g = s.grid();
  s.for_each_mode([&](int k1, int k2, Complex& c) {
    if (is_dealiased_mode(g, k1, k2)) c = 0.0;
  });
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = fft::forward(f);
  dealias_in_place(s);
  return fft::inverse(s);
}

void heat_propagate_in_place(Spectrum& s, double tau, double nu) {
  if (!(nu > 0.0)) fail(ErrorCode::InvalidArgument, "heat_propagate: diffusivity must be positive");
  if (!(tau >= 0.0)) fail(ErrorCode::InvalidArgument, "heat_propagate: time must be non-negative");
  if (tau == 0.0) return;
  s.for_each_mode([&](int k1, int k2, Complex& c) {
    c *= std::exp(-nu * tau * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2));
  });
}

ScalarField heat_propagate(const ScalarField& f, double tau, double nu) {
  if (tau == 0.0 && nu > 0.0) return f;
  Spectrum s = fft::forward(f);
  heat_propagate_in_place(s, tau, nu);
  return fft::inverse(s);
}

double spectral_l2_norm(const Spectrum& s) { return std::sqrt(s.grid().area() * s.energy()); }

void remove_mean(Spectrum& s) { s[0] = 0.0; }

ScalarField remove_mean(const ScalarField& f) {
  ScalarField out = f;
  const double m = f.mean();
  for (double& v : out.values()) v -= m;
  return out;
}

}  // namespace bpl
