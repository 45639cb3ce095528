#include "analysis/monitors.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "analysis/norms.hpp"
#include "common/error.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

double grad_l2_sq(const ScalarField& f) {
  const double g = lebesgue_norm(gradient(f), 2.0);
  return g * g;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

SnapshotNorms snapshot_norms(const State& s, const std::vector<double>& p_list) {
  SnapshotNorms r;
  r.t = s.t;
  for (double p : p_list) r.theta_lp.push_back(lebesgue_norm(s.theta, p));
  r.theta_l2 = lebesgue_norm(s.theta, 2.0);
  const VelocityField v = biot_savart(s.omega);
  r.velocity_l2 = lebesgue_norm(v, 2.0);
  r.grad_velocity_l2_sq = grad_l2_sq(v.u1) + grad_l2_sq(v.u2);
  const VelocityField gt = gradient(s.theta);
  const double gl2 = lebesgue_norm(gt, 2.0);
  r.grad_theta_l2_sq = gl2 * gl2;
  r.grad_theta_linf = lebesgue_norm(gt, kInfinity);
  r.omega_l2 = lebesgue_norm(s.omega, 2.0);
  r.omega_linf = s.omega.max_abs();
  return r;
}

void MonitorChannel::record(double l, double r, double rel_tol) {
  left.push_back(l);
  right.push_back(r);
  margin.push_back(r - l);
  violated.push_back(!(l <= r + rel_tol * std::abs(r)));
}

std::size_t MonitorChannel::violations() const {
  std::size_t c = 0;
  for (bool v : violated) c += v ? 1 : 0;
  return c;
}

MonitorChannel& MonitorSeries::channel(const std::string& name) {
  for (MonitorChannel& c : channels)
    if (c.name == name) return c;
  channels.push_back(MonitorChannel{name, {}, {}, {}, {}});
  return channels.back();
}

const MonitorChannel* MonitorSeries::find(const std::string& name) const {
  for (const MonitorChannel& c : channels)
    if (c.name == name) return &c;
  return nullptr;
}

std::size_t MonitorSeries::violation_count() const {
  std::size_t c = 0;
  for (const MonitorChannel& ch : channels) c += ch.violations();
  return c;
}

std::string theta_channel_name(double p) {
  if (std::isinf(p)) return "theta_Lp_inf";
  std::ostringstream os;
  os << "theta_Lp_" << p;
  return os.str();
}

MonitorSeries monitor_apriori(const std::vector<SnapshotNorms>& history, const std::vector<double>& p_list, double mu,
                              double kappa0) {
  MonitorSeries m;
  if (history.empty()) return m;
  const SnapshotNorms& s0 = history.front();
  if (s0.theta_lp.size() != p_list.size())
    fail(ErrorCode::InvalidArgument, "monitor_apriori: snapshot norms were computed for a different p list");

  // Running trapezoid integrals.
  double int_grad_v = 0.0, int_grad_theta = 0.0, int_grad_theta_inf = 0.0;
  for (std::size_t k = 0; k < history.size(); ++k) {
    const SnapshotNorms& s = history[k];
    if (k > 0) {
      const SnapshotNorms& a = history[k - 1];
      const double w = 0.5 * (s.t - a.t);
      int_grad_v += w * (a.grad_velocity_l2_sq + s.grad_velocity_l2_sq);
      int_grad_theta += w * (a.grad_theta_l2_sq + s.grad_theta_l2_sq);
      int_grad_theta_inf += w * (a.grad_theta_linf + s.grad_theta_linf);
    }
    const double t = s.t - s0.t;
    m.times.push_back(s.t);
    for (std::size_t i = 0; i < p_list.size(); ++i)
      m.channel(theta_channel_name(p_list[i])).record(s.theta_lp[i], s0.theta_lp[i]);
    const double vbound = s0.velocity_l2 + t * s0.theta_l2;
    m.channel("velocity_L2").record(s.velocity_l2, vbound);
    m.channel("energy_dissipation")
        .record(s.velocity_l2 * s.velocity_l2 + 2.0 * mu * int_grad_v, vbound * vbound);
    m.channel("theta_dissipation").record(int_grad_theta, kappa0 * s0.theta_l2 * s0.theta_l2);
    m.channel("omega_L2").record(s.omega_l2, s0.omega_l2 + kappa0 * s0.theta_l2 * s0.theta_l2 + t);
    m.channel("omega_Linf").record(s.omega_linf, s0.omega_linf + int_grad_theta_inf);
  }
  return m;
}

MonitorSeries monitor_apriori(const std::vector<State>& history, const std::vector<double>& p_list) {
  if (history.empty()) return {};
  std::vector<SnapshotNorms> norms;
  norms.reserve(history.size());
  for (const State& s : history) norms.push_back(snapshot_norms(s, p_list));
  const State& s0 = history.front();
  return monitor_apriori(norms, p_list, s0.mu, s0.kappa.kappa0());
}

void write_monitor_csv(std::ostream& os, const MonitorSeries& m) {
  os << "t,channel,left,right,margin,violated\n";
  for (std::size_t k = 0; k < m.times.size(); ++k)
    for (const MonitorChannel& c : m.channels) {
      if (k >= c.left.size()) continue;
      os << format_number(m.times[k]) << ',' << c.name << ',' << format_number(c.left[k]) << ','
         << format_number(c.right[k]) << ',' << format_number(c.margin[k]) << ',' << (c.violated[k] ? 1 : 0) << '\n';
    }
}

void write_monitor_series_csv(std::ostream& os, const MonitorSeries& m) {
  os << 't';
  for (const MonitorChannel& c : m.channels) os << ',' << c.name;
  os << '\n';
  for (std::size_t k = 0; k < m.times.size(); ++k) {
    os << format_number(m.times[k]);
    for (const MonitorChannel& c : m.channels) os << ',' << (k < c.margin.size() ? format_number(c.margin[k]) : "");
    os << '\n';
  }
}

}  // namespace bpl
