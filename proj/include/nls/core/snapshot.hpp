#pragma once

#include <filesystem>

#include "nls/core/field.hpp"

namespace nls {

// Header `NLSFIELD v1 <cartesian|radial> <n|m> <L|r_max> <time>` then (re, im)
// little-endian doubles, x fastest.
void write_snapshot(const std::filesystem::path& path, const FieldState& s);
FieldState read_snapshot(const std::filesystem::path& path);

}  // namespace nls
