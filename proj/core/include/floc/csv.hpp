#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "floc/integrator.hpp"

namespace floc {

/// printf "%.17g": 17 significant digits, so every double round-trips.
std::string format_number(double v);

/// Shortest round-trip rendering ("0.5", "2"), used in file names.
std::string format_short(double v);

/// Header `t,<names>` then one row per time point, LF line endings.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Generic table with a header row; all columns must have equal length.
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);

}  // namespace floc
