#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "solver/state.hpp"

namespace bpl {

// Relative slack granted to every monitored inequality.
inline constexpr double kMonitorTolerance = 1e-6;

/// Per-snapshot quantities the a priori inequalities are built from. The
/// theta_lp entries follow the p list the norms were computed for.
struct SnapshotNorms {
  double t = 0.0;
  std::vector<double> theta_lp;
  double theta_l2 = 0.0;
  double velocity_l2 = 0.0;
  double grad_velocity_l2_sq = 0.0;
  double grad_theta_l2_sq = 0.0;
  double grad_theta_linf = 0.0;
  double omega_l2 = 0.0;
  double omega_linf = 0.0;
};

SnapshotNorms snapshot_norms(const State& s, const std::vector<double>& p_list);

/// One inequality left ≤ right sampled along a trajectory.
struct MonitorChannel {
  std::string name;
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> margin;  // right − left
  std::vector<bool> violated;

  void record(double l, double r, double rel_tol = kMonitorTolerance);
  std::size_t violations() const;
};

struct MonitorSeries {
  std::vector<double> times;
  std::vector<MonitorChannel> channels;

  MonitorChannel& channel(const std::string& name);  // created on first use
  const MonitorChannel* find(const std::string& name) const;
  std::size_t violation_count() const;
  bool any_violation() const { return violation_count() > 0; }
};

// Label used for the θ Lᵖ channel, e.g. "theta_Lp_2" or "theta_Lp_inf".
std::string theta_channel_name(double p);

/// The six constant-free a priori bounds (θ Lᵖ decay for every listed p,
/// velocity L², energy–dissipation, θ dissipation, ω L² and ω L∞), with time
/// integrals by the trapezoid rule on the snapshot times. The first entry is
/// the initial state.
MonitorSeries monitor_apriori(const std::vector<SnapshotNorms>& history, const std::vector<double>& p_list, double mu,
                              double kappa0);
MonitorSeries monitor_apriori(const std::vector<State>& history, const std::vector<double>& p_list);

// Long form: t,channel,left,right,margin,violated.
void write_monitor_csv(std::ostream& os, const MonitorSeries& m);
// Wide form: t followed by one margin column per channel.
void write_monitor_series_csv(std::ostream& os, const MonitorSeries& m);

}  // namespace bpl
