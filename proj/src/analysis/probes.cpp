#include "analysis/probes.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "analysis/norms.hpp"
#include "common/error.hpp"
#include "spectral/littlewood_paley.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

// Pointwise Frobenius norm of the matrix (∂ⱼaᵢ) for a = (a₁, a₂).
ScalarField frobenius(const ScalarField& a1, const ScalarField& a2) {
  const Spectrum h1 = fft::forward(a1), h2 = fft::forward(a2);
  const ScalarField d11 = fft::inverse(d1(h1)), d12 = fft::inverse(d2(h1));
  const ScalarField d21 = fft::inverse(d1(h2)), d22 = fft::inverse(d2(h2));
  ScalarField out(a1.grid());
  for (std::size_t i = 0; i < out.grid().size(); ++i)
    out[i] = std::sqrt(d11[i] * d11[i] + d12[i] * d12[i] + d21[i] * d21[i] + d22[i] * d22[i]);
  return out;
}

}  // namespace

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::Bernstein: return "bernstein";
    case ProbeKind::GagliardoNirenberg: return "gagliardo_nirenberg";
    case ProbeKind::LogEstimate: return "log_estimate";
    case ProbeKind::InterpDeltaV: return "interp_delta_v";
  }
  return "unknown";
}

ProbeKind probe_kind_from_string(const std::string& name) {
  for (ProbeKind k : {ProbeKind::Bernstein, ProbeKind::GagliardoNirenberg, ProbeKind::LogEstimate,
                      ProbeKind::InterpDeltaV})
    if (to_string(k) == name) return k;
  fail(ErrorCode::InvalidArgument, "unknown probe kind '" + name + "'");
}

ProbeRecord make_probe(ProbeKind kind, double t, double p, double left, double right, int q) {
  ProbeRecord r{kind, t, p, q, left, right, 0.0, false};
  if (std::isfinite(left) && std::isfinite(right) && right > 0.0)
    r.ratio = left / right;
  else
    r.flagged = true;
  return r;
}

std::vector<ProbeRecord> bernstein_probe(const ScalarField& f, double p, double t) {
  const double total = lebesgue_norm(f, p);
  std::vector<ProbeRecord> out;
  for (const DyadicBlock& b : lp_decompose(f).blocks) {
    if (b.q < 0) continue;
    const double block = lebesgue_norm(b.field, p);
    if (!(block > 1e-13 * total)) continue;
    out.push_back(make_probe(ProbeKind::Bernstein, t, p, lebesgue_norm(gradient(b.field), p), std::exp2(b.q) * block,
                             b.q));
  }
  return out;
}

ProbeRecord gagliardo_nirenberg_probe(const ScalarField& theta, double p, double t) {
  if (!(p > 2.0) || std::isinf(p)) fail(ErrorCode::InvalidArgument, "gagliardo_nirenberg_probe: need 2 < p < inf");
  const VelocityField g = gradient(theta);
  const double left = lebesgue_norm(g, kInfinity);
  const double right = std::pow(lebesgue_norm(g, 2.0), (p - 2.0) / (2.0 * p - 2.0)) *
                       std::pow(lebesgue_norm(frobenius(g.u1, g.u2), p), p / (2.0 * p - 2.0));
  return make_probe(ProbeKind::GagliardoNirenberg, t, p, left, right);
}

ProbeRecord log_estimate_probe(const ScalarField& omega, const TangentFamily& X, double epsilon, double t) {
  const VelocityField v = biot_savart(omega);
  const double left = frobenius(v.u1, v.u2).max_abs();
  const double inf = omega.max_abs();
  double right = lebesgue_norm(omega, 2.0);
  if (inf > 0.0) right += inf * std::log(std::numbers::e + striated_seminorm(omega, X, epsilon) / inf);
  return make_probe(ProbeKind::LogEstimate, t, kInfinity, left, right);
}

ProbeRecord interp_delta_v_probe(const ScalarField& omega, double p, double beta, double t) {
  if (beta < 0.0) beta = std::isinf(p) ? 0.0 : 1.0 / p;
  if (!(beta > -1.0 && beta < 1.0)) fail(ErrorCode::InvalidArgument, "interp_delta_v_probe: beta must lie in (-1, 1)");
  // Δv = ∇⊥ω.
  const VelocityField g = gradient(omega);
  const double left = lebesgue_norm(g, p);
  const double right = std::pow(besov_norm(omega, beta, p, kInfinity), 0.5 * (1.0 + beta)) *
                       std::pow(besov_norm(omega, 2.0 + beta, p, kInfinity), 0.5 * (1.0 - beta));
  return make_probe(ProbeKind::InterpDeltaV, t, p, left, right);
}

std::string to_json_line(const ProbeRecord& r) {
  nlohmann::json j;
  j["kind"] = to_string(r.kind);
  j["t"] = r.t;
  if (std::isinf(r.p))
    j["p"] = "inf";
  else
    j["p"] = r.p;
  if (r.kind == ProbeKind::Bernstein) j["q"] = r.q;
  j["left"] = r.left;
  j["right"] = r.right;
  j["ratio"] = r.ratio;
  j["flagged"] = r.flagged;
  return j.dump();
}

ProbeRecord probe_from_json_line(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorCode::Io, "malformed probe record");
  ProbeRecord r;
  try {
    r.kind = probe_kind_from_string(j.at("kind").get<std::string>());
    r.t = j.at("t").get<double>();
    r.p = j.at("p").is_string() ? kInfinity : j.at("p").get<double>();
    r.q = j.value("q", -1);
    r.left = j.at("left").is_null() ? NAN : j.at("left").get<double>();
    r.right = j.at("right").is_null() ? NAN : j.at("right").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.flagged = j.at("flagged").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed probe record: ") + e.what());
  }
  return r;
}

}  // namespace bpl
