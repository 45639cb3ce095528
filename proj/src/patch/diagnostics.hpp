#pragma once

#include <vector>

#include "patch/flowmap.hpp"
#include "patch/tangent.hpp"

namespace bpl {

struct BoundaryRecord {
  double t = 0.0;
  double tangent_holder = 0.0;      // discrete C^ε seminorm of the unit tangent
  double tangency_residual = 0.0;   // max |X_λ·∇f| on the zero band
  double jacobian_min = 1.0;        // lattice det ∇Ψ statistics
  double jacobian_max = 1.0;
  double jacobian_max_deviation = 0.0;
  double area = 0.0;
  double area_drift = 0.0;          // |area − reference| / reference
  bool simple = true;               // contour still free of self-intersections
};

/// Sup over sample pairs at arc separations L·2^{−j}, j = 1 .. log₂(N) − 2,
/// of |τ(s) − τ(s′)| / |s − s′|^ε for a closed polyline.
double tangent_holder_seminorm(const std::vector<Vec2>& pts, double epsilon);

/// Diagnostics of the transported boundary. `reference_area` is the area at
/// t = 0; `family` may be null when no tangent family is tracked.
BoundaryRecord boundary_diagnostics(const FlowMap& fm, const TangentFamily* family, double epsilon,
                                    double reference_area);

}  // namespace bpl
