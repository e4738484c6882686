#include "nls/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/variational/classify.hpp"

namespace nls {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()), path_(path) {
  if (!out_) fail(ErrorKind::Io, "cannot write " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(format_double(v));
  row(f);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    fail(ErrorKind::Format, path_.string() + ": row has " + std::to_string(fields.size()) + " fields, header has " +
                                std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << "\n";
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) fail(ErrorKind::Io, "error while writing " + path_.string());
}

std::size_t CsvTable::index(const std::string& column) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) return i;
  fail(ErrorKind::Format, "missing column '" + column + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t j = index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double v = 0;
    const std::string& s = r.at(j);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(ErrorKind::Format, "column '" + name + "' holds a non-number: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::stringstream ss(l);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (!l.empty() && l.back() == ',') f.emplace_back();
    return f;
  };
  if (!std::getline(in, line)) fail(ErrorKind::Format, path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != t.header.size())
      fail(ErrorKind::Format, path.string() + ": ragged row " + std::to_string(t.rows.size() + 1));
    t.rows.push_back(std::move(f));
  }
  return t;
}

namespace schema {
const std::vector<std::string> trajectory{"time",    "mass",     "kinetic", "lq",         "lp",
                                          "energy",  "action",   "pohozaev", "i_omega", "membership",
                                          "boundary_fraction"};
const std::vector<std::string> steps{"t", "dt", "max_abs", "kinetic"};
const std::vector<std::string> virial{"time", "v", "v_dot", "v_ddot", "eight_g", "kinetic"};
const std::vector<std::string> morawetz{"time",  "radius", "m_value", "m_dot_fd", "term1",    "term2",  "term3",
                                        "term4", "term5",  "term_sum", "identity_residual", "interior", "tainted"};
const std::vector<std::string> coercivity{"time", "z1", "z2", "z3", "radius", "xi1", "xi2", "xi3", "g_loc", "grad_sq_loc",
                                          "ratio"};
const std::vector<std::string> ratefit{"time", "tau", "g", "ratio"};
const std::vector<std::string> invariance{"time", "membership", "pohozaev", "kinetic", "bound", "slack"};
const std::vector<std::string> standing_wave{"time", "max_error", "relative_error"};
}  // namespace schema

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, double m_omega) {
  CsvWriter w(path, schema::trajectory);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& r = traj.reports[i];
    w.row(std::vector<std::string>{format_double(r.time), format_double(r.mass), format_double(r.kinetic),
                                   format_double(r.lq), format_double(r.lp), format_double(r.energy),
                                   format_double(r.action), format_double(r.pohozaev), format_double(r.i_omega),
                                   m_omega > 0 ? to_string(membership_of(r, m_omega)) : "unknown",
                                   format_double(traj.samples[i].boundary_fraction)});
  }
  w.close();
}

void write_steps_csv(const std::filesystem::path& path, const Trajectory& traj) {
  CsvWriter w(path, schema::steps);
  for (const auto& s : traj.step_log) w.row(std::vector<double>{s.t, s.dt, s.max_abs, s.kinetic});
  w.close();
}

void write_virial_csv(const std::filesystem::path& path, const VirialSeries& s) {
  CsvWriter w(path, schema::virial);
  for (std::size_t i = 0; i < s.times.size(); ++i)
    w.row(std::vector<double>{s.times[i], s.v[i], s.v_dot[i], s.v_ddot[i], 8 * s.g_pohozaev[i], s.kinetic[i]});
  w.close();
}

void write_morawetz_csv(const std::filesystem::path& path, const MorawetzSeries& s) {
  CsvWriter w(path, schema::morawetz);
  for (const auto& m : s.samples) {
    const auto& t = m.terms.term;
    w.row(std::vector<double>{m.t, m.radius, m.m_value, m.m_dot_fd, t[0], t[1], t[2], t[3], t[4], m.terms.sum(),
                              m.identity_residual, m.interior ? 1.0 : 0.0, m.tainted ? 1.0 : 0.0});
  }
  w.close();
}

void write_coercivity_csv(const std::filesystem::path& path, const CoercivityScan& scan) {
  CsvWriter w(path, schema::coercivity);
  for (const auto& p : scan.points)
    w.row(std::vector<double>{p.t, p.z[0], p.z[1], p.z[2], p.radius, p.xi[0], p.xi[1], p.xi[2], p.value.g_loc,
                              p.value.grad_sq_loc, p.value.ratio});
  w.close();
}

void write_ratefit_csv(const std::filesystem::path& path, const RateFit& fit) {
  CsvWriter w(path, schema::ratefit);
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    const double tau = fit.t_star - fit.times[i];
    const double ratio = tau > 0 ? fit.g[i] / std::pow(tau, fit.exponent_predicted) : NAN;
    w.row(std::vector<double>{fit.times[i], tau, fit.g[i], ratio});
  }
  w.close();
}

void write_invariance_csv(const std::filesystem::path& path, const InvarianceReport& r) {
  CsvWriter w(path, schema::invariance);
  for (const auto& s : r.samples)
    w.row(std::vector<std::string>{format_double(s.t), to_string(s.membership), format_double(s.pohozaev),
                                   format_double(s.kinetic), format_double(s.bound), format_double(s.slack)});
  w.close();
}

}  // namespace nls
