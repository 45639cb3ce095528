#include "solver/kappa.hpp"

#include <cmath>

#include "common/error.hpp"

namespace bpl {

KappaProfile KappaProfile::make(KappaKind kind, double epsilon0) {
  if (kind == KappaKind::Constant) return constant();
  if (!(epsilon0 >= 0.0 && epsilon0 < 1.0))
    fail(ErrorCode::InvalidArgument, "kappa epsilon0 must lie in [0, 1)");
  return {kind, epsilon0};
}

double KappaProfile::excess(double s) const {
  switch (kind) {
    case KappaKind::Constant: return 0.0;
    case KappaKind::Sin: return epsilon0 * std::sin(s);
    case KappaKind::Tanh: return epsilon0 * std::tanh(s);
  }
  return 0.0;
}

double KappaProfile::operator()(double s) const { return 1.0 + excess(s); }

double KappaProfile::derivative(double s) const {
  switch (kind) {
    case KappaKind::Constant: return 0.0;
    case KappaKind::Sin: return epsilon0 * std::cos(s);
    case KappaKind::Tanh: {
      const double c = std::cosh(s);
      return epsilon0 / (c * c);
    }
  }
  return 0.0;
}

bool KappaProfile::satisfies_bounds(double lo, double hi) const {
  const double k0 = kappa0();
  const int samples = 4097;
  for (int i = 0; i < samples; ++i) {
    const double s = lo + (hi - lo) * i / (samples - 1);
    const double k = (*this)(s);
    if (k < 1.0 / k0 - 1e-15 || k > k0 + 1e-15) return false;
    if (std::abs(derivative(s)) > k0) return false;
    if (std::abs(excess(s)) > epsilon0 + 1e-15) return false;
  }
  return true;
}

std::string to_string(KappaKind kind) {
  switch (kind) {
    case KappaKind::Constant: return "constant";
    case KappaKind::Sin: return "sin";
    case KappaKind::Tanh: return "tanh";
  }
  return "?";
}

KappaKind kappa_kind_from_string(const std::string& name) {
  if (name == "constant") return KappaKind::Constant;
  if (name == "sin" || name == "sin_perturbation") return KappaKind::Sin;
  if (name == "tanh" || name == "tanh_perturbation") return KappaKind::Tanh;
  fail(ErrorCode::Config, "unknown kappa kind '" + name + "'");
}

}  // namespace bpl
