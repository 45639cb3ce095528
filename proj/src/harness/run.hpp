#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "analysis/monitors.hpp"
#include "analysis/probes.hpp"
#include "patch/contour.hpp"
#include "patch/diagnostics.hpp"
#include "patch/flowmap.hpp"
#include "solver/kappa.hpp"
#include "solver/state.hpp"
#include "solver/stepper.hpp"

namespace bpl {

enum class Theta0Kind { ProductSine, Zero, Random };

std::string to_string(Theta0Kind kind);
Theta0Kind theta0_kind_from_string(const std::string& name);

// θ⁰ = amplitude·sin x₁ sin x₂, zero, or a seeded smooth random field with
// modes |k| ≤ kmax scaled so that max|θ⁰| = amplitude.
struct Theta0Spec {
  Theta0Kind kind = Theta0Kind::ProductSine;
  double amplitude = 0.5;
  int kmax = 4;
};

ScalarField make_theta0(const Theta0Spec& spec, const Grid2D& g, std::uint64_t seed);

enum class DtPolicy { Cfl, Fixed };

// Regression bounds appended to the monitor series as geometry channels.
struct GeometryBounds {
  double jacobian = 1e-3;
  double area_drift = 5e-3;
  double tangency = 1e-2;
};

struct RunConfig {
  int n = 256;
  double delta = 0.0;  // ramp width; ≤ 0 selects 4·spacing
  PatchSpec patch;
  Theta0Spec theta0;
  KappaProfile kappa = KappaProfile::make(KappaKind::Sin, 0.1);
  double mu = 0.0;
  double t_end = 1.0;
  DtPolicy dt_policy = DtPolicy::Cfl;
  double dt = 0.0;  // fixed policy only
  CflParams cfl;
  int snapshots_per_unit = 20;
  std::vector<double> p_list{2.0, 4.0, std::numeric_limits<double>::infinity()};
  bool track_geometry = true;
  int lattice_n = 32;
  int contour_samples = 1024;
  bool probes = true;
  GeometryBounds bounds;
  std::uint64_t seed = 42;

  // Physical ramp width actually used.
  double resolved_delta() const;
  // Throws Config on any inconsistent value.
  void validate() const;
};

// Snapshot times: multiples of 1/snapshots_per_unit up to t_end, with t_end
// itself appended when it is not a multiple.
std::vector<double> snapshot_times(const RunConfig& cfg);

struct RunOptions {
  // Replays a recorded dt sequence instead of the configured policy.
  const std::vector<double>* schedule = nullptr;
  bool keep_states = true;
  // Overrides cfg.track_geometry / cfg.probes when set.
  std::optional<bool> track_geometry;
  std::optional<bool> probes;
  // With geometry on, also transport the tangent family (the flow map alone
  // suffices for flow differences).
  bool track_family = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> p_list;        // exponents of norms[k].theta_lp
  std::vector<State> states;         // one per snapshot time (if kept)
  std::vector<SnapshotNorms> norms;  // one per snapshot time
  std::vector<FlowMap> flowmaps;     // one per snapshot time (if tracked)
  std::vector<BoundaryRecord> geometry;
  std::vector<ProbeRecord> probes;
  MonitorSeries monitors;
  std::vector<double> dt_schedule;
  std::vector<Vec2> initial_contour;
  std::vector<double> contour_zeta;
  double initial_area = 0.0;
  double initial_nondegeneracy = 0.0;
  double delta = 0.0;
};

// Initial state of a configuration (patch rasterized, θ⁰ built, projected).
State initial_state(const RunConfig& cfg);

/// Integrates the configuration to t_end, landing exactly on every snapshot
/// time. Deterministic for a given configuration. Propagates BlowupError and
/// solver errors.
Trajectory run(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace bpl
