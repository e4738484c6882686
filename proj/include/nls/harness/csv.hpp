#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nls/diagnostics/coercivity.hpp"
#include "nls/diagnostics/invariance.hpp"
#include "nls/diagnostics/morawetz.hpp"
#include "nls/diagnostics/rates.hpp"
#include "nls/diagnostics/virial.hpp"
#include "nls/evolution/trajectory.hpp"

namespace nls {

// 17 significant digits: every double survives a text round trip.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t index(const std::string& column) const;  // Format error naming the column
  std::vector<double> column(const std::string& name) const;
  std::size_t size() const { return rows.size(); }
};
CsvTable read_csv(const std::filesystem::path& path);

// Column sets of the run outputs. Consumers rely on these names.
namespace schema {
extern const std::vector<std::string> trajectory;  // report fields + membership, boundary_fraction
extern const std::vector<std::string> steps;
extern const std::vector<std::string> virial;
extern const std::vector<std::string> morawetz;
extern const std::vector<std::string> coercivity;
extern const std::vector<std::string> ratefit;
extern const std::vector<std::string> invariance;
extern const std::vector<std::string> standing_wave;
}  // namespace schema

// m_omega ≤ 0 writes "unknown" membership.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, double m_omega);
void write_steps_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_virial_csv(const std::filesystem::path& path, const VirialSeries& s);
void write_morawetz_csv(const std::filesystem::path& path, const MorawetzSeries& s);
void write_coercivity_csv(const std::filesystem::path& path, const CoercivityScan& scan);
void write_ratefit_csv(const std::filesystem::path& path, const RateFit& fit);
void write_invariance_csv(const std::filesystem::path& path, const InvarianceReport& r);

}  // namespace nls
