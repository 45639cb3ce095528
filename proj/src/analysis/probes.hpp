#pragma once

#include <string>
#include <vector>

#include "patch/tangent.hpp"
#include "spectral/field.hpp"

namespace bpl {

enum class ProbeKind { Bernstein, GagliardoNirenberg, LogEstimate, InterpDeltaV };

std::string to_string(ProbeKind kind);
ProbeKind probe_kind_from_string(const std::string& name);

/// Left side, constant-free right side and their ratio for one inequality
/// whose constant the theory leaves unspecified. A vanishing or non-finite
/// right side yields ratio 0 and flagged = true.
struct ProbeRecord {
  ProbeKind kind = ProbeKind::Bernstein;
  double t = 0.0;
  double p = 2.0;
  int q = -1;  // dyadic block, Bernstein only
  double left = 0.0;
  double right = 0.0;
  double ratio = 0.0;
  bool flagged = false;
};

ProbeRecord make_probe(ProbeKind kind, double t, double p, double left, double right, int q = -1);

// ‖∇Δ_q f‖_p against 2^q‖Δ_q f‖_p for every q ≥ 0. Blocks that carry no
// signal (‖Δ_q f‖_p ≤ 1e-13·‖f‖_p) are skipped.
std::vector<ProbeRecord> bernstein_probe(const ScalarField& f, double p, double t = 0.0);

// ‖∇θ‖∞ against ‖∇θ‖₂^{(p−2)/(2p−2)}·‖∇²θ‖_p^{p/(2p−2)}, p > 2.
ProbeRecord gagliardo_nirenberg_probe(const ScalarField& theta, double p = 4.0, double t = 0.0);

// ‖∇v‖∞ against ‖ω‖₂ + ‖ω‖∞·log(e + ‖ω‖_{C^ε(X)}/‖ω‖∞).
ProbeRecord log_estimate_probe(const ScalarField& omega, const TangentFamily& X, double epsilon, double t = 0.0);

// ‖Δv‖_p against ‖ω‖_{B^β_{p,∞}}^{(1+β)/2}·‖ω‖_{B^{2+β}_{p,∞}}^{(1−β)/2}; β defaults to 1/p.
ProbeRecord interp_delta_v_probe(const ScalarField& omega, double p = 4.0, double beta = -1.0, double t = 0.0);

// One JSON object per line, no trailing newline.
std::string to_json_line(const ProbeRecord& r);
ProbeRecord probe_from_json_line(const std::string& line);

}  // namespace bpl
