#pragma once

#include "patch/contour.hpp"
#include "spectral/field.hpp"

namespace bpl {

/// Defining function of the patch boundary. Near the curve f is the signed
/// distance (positive outside); beyond `band` it is bent smoothly flat so that
/// f stays C^∞ across the medial axis of the curve:
///   f = G(d),  G(d) = d for |d| ≤ band,  G' = 0 for |d| ≥ saturation.
struct LevelSet {
  ScalarField f;
  double band = 0.0;        // |d| ≤ band is the neighbourhood V of the boundary
  double saturation = 0.0;  // G is constant beyond this distance
  double zero_band = 0.0;   // |f| ≤ zero_band is where tangency is evaluated
};

// Saturating profile G and its derivative, for given band < saturation.
double levelset_profile(double d, double band, double saturation);
double levelset_profile_slope(double d, double band, double saturation);

struct RasterizedPatch {
  ScalarField omega0;      // smooth ramp ½erfc(d/δ) with its mean removed
  double removed_mean = 0.0;
  LevelSet levelset;
  double delta = 0.0;
};

/// Signed distance from each grid node to the curve (positive outside),
/// exact up to Newton tolerance wherever |d| ≤ cutoff; beyond that only the
/// sign is exact and the magnitude is clamped to `cutoff`.
ScalarField signed_distance(const PatchContour& c, const Grid2D& g, double cutoff);

/// Mollified indicator and level set. δ ≤ 0 selects δ = 4·spacing.
/// Throws Geometry if the patch is not isolated in the central quarter.
RasterizedPatch rasterize_patch(const PatchContour& c, const Grid2D& g, double delta = 0.0);

}  // namespace bpl
