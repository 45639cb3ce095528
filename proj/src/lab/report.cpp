#include "lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "common/error.hpp"
#include "patch/contour.hpp"

namespace bpl {
namespace {

namespace fs = std::filesystem;

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  f << std::setprecision(17);
  return f;
}

void close_out(std::ofstream& f, const fs::path& path) {
  f.close();
  if (!f) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

template <class Body>
void write_file(const fs::path& path, Body body) {
  std::ofstream f = open_out(path);
  body(f);
  close_out(f, path);
}

void write_norms(std::ostream& os, const Trajectory& tr) {
  os << "t";
  for (double p : tr.p_list) os << "," << theta_channel_name(p);
  os << ",velocity_L2,omega_L2,omega_Linf,grad_theta_Linf\n";
  for (const SnapshotNorms& s : tr.norms) {
    os << s.t;
    for (double v : s.theta_lp) os << "," << v;
    os << "," << s.velocity_l2 << "," << s.omega_l2 << "," << s.omega_linf << "," << s.grad_theta_linf << "\n";
  }
}

void write_geometry(std::ostream& os, const Trajectory& tr) {
  os << "t,jacobian_min,jacobian_max,jacobian_max_deviation,area,area_drift,tangency_residual,tangent_holder,simple\n";
  for (const BoundaryRecord& b : tr.geometry)
    os << b.t << "," << b.jacobian_min << "," << b.jacobian_max << "," << b.jacobian_max_deviation << "," << b.area << ","
       << b.area_drift << "," << b.tangency_residual << "," << b.tangent_holder << "," << (b.simple ? 1 : 0) << "\n";
}

void write_pairs(std::ostream& os, const std::vector<DiffRecord>& rows) {
  os << "t,mu,p,velocity,theta,pi,omega,flow\n";
  for (const DiffRecord& d : rows)
    for (std::size_t i = 0; i < d.p_list.size(); ++i)
      os << d.t << "," << d.mu << "," << p_label(d.p_list[i]) << "," << d.velocity[i] << "," << d.theta[i] << ","
         << d.pi[i] << "," << d.omega[i] << "," << (d.has_flow ? d.flow : std::nan("")) << "\n";
}

void write_summary(std::ostream& os, const std::vector<RateReport>& reports) {
  os << "metric,p,t_star,slope,theory,threshold,residual,points_used,floor,monotone,verdict\n";
  for (const RateReport& r : reports) {
    int used = 0;
    for (const RatePoint& p : r.points) used += p.used ? 1 : 0;
    os << to_string(r.metric) << "," << p_label(r.p) << "," << r.t_star << "," << r.slope << "," << r.theory << ","
       << 0.95 * r.theory << "," << r.residual << "," << used << "," << r.floor << "," << (r.monotone ? 1 : 0) << ","
       << (r.pass ? "PASS" : "FAIL") << "\n";
  }
}

void write_plot(std::ostream& os, const RateReport& r) {
  os << "# " << to_string(r.metric) << " p=" << p_label(r.p) << " slope=" << r.slope << " theory=" << r.theory << "\n";
  os << "# log10_mu log10_err used log10_fit\n";
  for (const RatePoint& p : r.points) {
    const double fit = (r.intercept + r.slope * std::log(p.mu)) / std::log(10.0);
    os << std::log10(p.mu) << " " << std::log10(p.error) << " " << (p.used ? 1 : 0) << " " << fit << "\n";
  }
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  write_file(path, [&](std::ostream& os) { os << text; });
}

int report_status(const ReportInputs& in) {
  if (in.monitors != nullptr && in.monitors->any_violation()) return kExitScientific;
  if (in.sweep != nullptr) {
    if (in.sweep->failed) return kExitScientific;
    for (const RateReport& r : in.sweep->reports)
      if (!r.pass) return kExitScientific;
  }
  return kExitOk;
}

int emit_report(const ReportInputs& in, const std::string& out_dir) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory '" + out_dir + "': " + ec.message());

  static const MonitorSeries kNoMonitors;
  const MonitorSeries& mon = in.monitors != nullptr ? *in.monitors : kNoMonitors;
  write_file(dir / "monitors.csv", [&](std::ostream& os) { write_monitor_csv(os, mon); });
  write_file(dir / "monitor_series.csv", [&](std::ostream& os) { write_monitor_series_csv(os, mon); });
  write_file(dir / "probes.jsonl", [&](std::ostream& os) {
    if (in.probes != nullptr)
      for (const ProbeRecord& r : *in.probes) os << to_json_line(r) << "\n";
  });

  static const std::vector<RateReport> kNoReports;
  const std::vector<RateReport>& reports = in.sweep != nullptr ? in.sweep->reports : kNoReports;
  write_file(dir / "rates.json", [&](std::ostream& os) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RateReport& r : reports) arr.push_back(nlohmann::ordered_json::parse(rate_report_json(r)));
    os << arr.dump(2) << "\n";
  });
  write_file(dir / "sweep_summary.csv", [&](std::ostream& os) { write_summary(os, reports); });

  if (in.trajectory != nullptr) {
    const Trajectory& tr = *in.trajectory;
    write_file(dir / "norms.csv", [&](std::ostream& os) { write_norms(os, tr); });
    if (!tr.geometry.empty()) {
      write_file(dir / "geometry.csv", [&](std::ostream& os) { write_geometry(os, tr); });
      write_file(dir / "contour_initial.csv",
                 [&](std::ostream& os) { write_contour_csv(os, tr.contour_zeta, tr.initial_contour); });
      if (!tr.flowmaps.empty())
        write_file(dir / "contour_final.csv",
                   [&](std::ostream& os) { write_contour_csv(os, tr.contour_zeta, tr.flowmaps.back().contour); });
    }
  }
  if (in.pair != nullptr) write_file(dir / "pairs.csv", [&](std::ostream& os) { write_pairs(os, *in.pair); });

  if (in.sweep != nullptr) {
    const SweepResult& s = *in.sweep;
    std::vector<DiffRecord> done;
    for (std::size_t i = 0; i < s.pairs.size(); ++i)
      if (s.pair_done[i]) done.insert(done.end(), s.pairs[i].begin(), s.pairs[i].end());
    write_file(dir / "pairs.csv", [&](std::ostream& os) { write_pairs(os, done); });
    if (s.failed) {
      nlohmann::ordered_json j;
      j["code"] = static_cast<int>(s.failure_code);
      j["message"] = s.failure_message;
      j["time"] = s.failure_time;
      j["pairs_completed"] = done.empty() ? 0 : static_cast<int>(std::count(s.pair_done.begin(), s.pair_done.end(), true));
      write_file(dir / "failure.json", [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    }
    if (in.plots)
      for (const RateReport& r : reports)
        write_file(dir / ("plot_" + to_string(r.metric) + "_p" + p_label(r.p) + ".dat"),
                   [&](std::ostream& os) { write_plot(os, r); });
  }
  return report_status(in);
}

}  // namespace bpl
