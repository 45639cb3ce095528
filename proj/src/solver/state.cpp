#include "solver/state.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "spectral/ops.hpp"

namespace bpl {

State make_initial_state(const ScalarField& patch_field, const ScalarField& theta0, double mu,
                         const KappaProfile& kappa) {
  require_same_grid(patch_field.grid(), theta0.grid(), "make_initial_state");
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail(ErrorCode::InvalidArgument, "viscosity must be >= 0");
  Spectrum w = fft::forward(patch_field);
  if (std::abs(w[0].real()) > kMeanTolerance) {
    std::ostringstream msg;
    msg << "initial vorticity mean " << w[0].real() << " exceeds tolerance " << kMeanTolerance;
    fail(ErrorCode::MeanNotZero, msg.str());
  }
  remove_mean(w);
  dealias_in_place(w);
  Spectrum th = fft::forward(theta0);
  dealias_in_place(th);
  return State{0.0, fft::inverse(w), fft::inverse(th), mu, kappa};
}

}  // namespace bpl
