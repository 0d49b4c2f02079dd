#include "floc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "floc/error.hpp"

namespace floc {

std::string format_number(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_short(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.state_names.size() != traj.dimension)
    throw ConfigError("state_names", "trajectory has " + std::to_string(traj.dimension) + " components but " +
                                         std::to_string(traj.state_names.size()) + " names");
  os << 't';
  for (const auto& name : traj.state_names) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_number(traj.times[i]);
    for (double v : traj.state(i)) os << ',' << format_number(v);
    os << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trajectory_csv(os, traj);
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw ConfigError("columns", "name/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw ConfigError("columns", "ragged columns");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_number(columns[j][i]);
    os << '\n';
  }
}

}  // namespace floc
