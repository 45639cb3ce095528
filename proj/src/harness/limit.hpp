#pragma once

#include <string>
#include <vector>

#include "common/error.hpp"
#include "harness/run.hpp"

namespace bpl {

/// Viscous-minus-inviscid differences at one snapshot. The per-p vectors
/// follow p_list; pi[i] = velocity[i] + theta[i].
struct DiffRecord {
  double t = 0.0;
  double mu = 0.0;
  std::vector<double> p_list;
  std::vector<double> velocity;
  std::vector<double> theta;
  std::vector<double> pi;
  std::vector<double> omega;
  double flow = 0.0;  // max tracer displacement difference
  bool has_flow = false;
};

// Differences between two trajectories sampled at the same snapshot times.
std::vector<DiffRecord> diff_series(const Trajectory& viscous, const Trajectory& inviscid, double mu,
                                    const std::vector<double>& p_list);

// Inviscid reference for pairing: μ = 0 under the configured dt law, with
// states and flow maps kept and no probes.
Trajectory inviscid_reference(const RunConfig& cfg);

/// Runs the inviscid problem, then the viscous one replaying its dt
/// schedule, and returns the difference at every snapshot.
std::vector<DiffRecord> run_pair(const RunConfig& cfg, double mu);
std::vector<DiffRecord> run_pair(const RunConfig& cfg, double mu, const Trajectory& reference);

enum class RateMetric { Pi, Omega, Flow };

std::string to_string(RateMetric m);

// Exponent of μ in the theoretical bound.
double theory_exponent(RateMetric m, double p);

struct RatePoint {
  double mu = 0.0;
  double error = 0.0;
  bool used = true;  // false when below the floor threshold
};

struct RateReport {
  RateMetric metric = RateMetric::Pi;
  double p = 2.0;  // unused for Flow
  double t_star = 1.0;
  std::vector<RatePoint> points;
  double floor = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log fit residuals
  double theory = 0.0;
  bool pass = false;
  bool monotone = true;  // error nondecreasing in μ
  std::string note;
};

// Least-squares fit of log(error) against log(μ) over the used points and
// the verdict slope ≥ 0.95·theory. Needs four points over two decades.
void fit_rate(RateReport& r);

struct SweepConfig {
  std::vector<double> mu_list{1e-2, 3.1622776601683795e-3, 1e-3, 3.1622776601683795e-4, 1e-4};
  double t_star = 1.0;
  std::vector<double> p_list{2.0, 4.0};
  bool measure_floor = true;
  double floor_factor = 10.0;
  int threads = 1;
};

// Checks μ ordering and spacing.
void validate_sweep(const SweepConfig& sc);

/// Grid self-convergence error of the inviscid solution at t*: an n run
/// against a 2n run with the same physical ramp width and the same dt
/// sequence (the 2n CFL schedule), compared at the common grid points and on
/// the shared tracers. The reference supplies δ and whether tracers exist.
struct ErrorFloor {
  std::vector<double> p_list;
  std::vector<double> pi;
  std::vector<double> omega;
  double flow = 0.0;
  bool measured = false;
};

ErrorFloor measure_error_floor(const RunConfig& cfg, const Trajectory& reference, const std::vector<double>& p_list);

struct SweepResult {
  SweepConfig sweep;
  std::vector<std::vector<DiffRecord>> pairs;  // one series per μ, same order as mu_list
  std::vector<bool> pair_done;
  ErrorFloor floor;
  std::vector<RateReport> reports;  // Pi per p, Omega per p, Flow
  bool failed = false;
  ErrorCode failure_code = ErrorCode::Internal;
  std::string failure_message;
  double failure_time = -1.0;  // blowup time when known

  bool all_pass() const;
};

/// The μ-sweep. Pairs run on `threads` workers; results are assembled in
/// μ order so the outcome does not depend on scheduling. A failing run stops
/// further work and is reported through `failed` with whatever finished.
SweepResult sweep_rates(const RunConfig& cfg, const SweepConfig& sc);

// RateReport as a JSON object.
std::string rate_report_json(const RateReport& r);

}  // namespace bpl
