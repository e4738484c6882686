#include "nls/core/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nls/core/error.hpp"

namespace nls {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

void write_snapshot(const std::filesystem::path& path, const FieldState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  char header[256];
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    std::snprintf(header, sizeof header, "NLSFIELD v1 cartesian %d %.17g %.17g\n", g.n(), g.box_length(), s.time);
  } else {
    const auto& g = s.radial();
    std::snprintf(header, sizeof header, "NLSFIELD v1 radial %d %.17g %.17g\n", g.m(), g.r_max(), s.time);
  }
  out << header;
  out.write(reinterpret_cast<const char*>(s.values.data()), std::streamsize(s.values.size() * sizeof(cplx)));
  if (!out) fail(ErrorKind::Io, "short write on " + path.string());
}

FieldState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  std::string magic, version, kind;
  int count = 0;
  double extent = 0, time = 0;
  hs >> magic >> version >> kind >> count >> extent >> time;
  if (!hs || magic != "NLSFIELD" || version != "v1")
    fail(ErrorKind::Format, path.string() + ": bad snapshot header");
  if (kind != "cartesian" && kind != "radial") fail(ErrorKind::Format, "unknown grid kind '" + kind + "'");
  Grid grid = kind == "cartesian" ? Grid(CartesianGrid(count, extent)) : Grid(RadialGrid(extent, count));
  CField v(grid_size(grid));
  in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(cplx)));
  if (in.gcount() != std::streamsize(v.size() * sizeof(cplx)))
    fail(ErrorKind::Format, path.string() + ": truncated payload");
  return FieldState(std::move(grid), std::move(v), time);
}

}  // namespace nls
