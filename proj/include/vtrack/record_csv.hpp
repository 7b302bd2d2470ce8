#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vtrack/reference.hpp"
#include "vtrack/sim.hpp"

namespace vtrack {

inline constexpr std::array<std::string_view, 35> kRunCsvColumns{
    "s",   "t",    "x",    "y",    "psi",  "u",    "v",   "r",   "x_re", "y_re", "psi_re", "u_re",
    "v_re", "r_re", "e_x",  "e_y",  "e_u",  "e_v",  "e_psi", "e_r", "tau1", "tau2", "w1",    "w2",
    "V",   "Vuv",  "G",    "z",    "W1",   "W2",   "Wt1", "Wt2", "f_u",  "f_v",  "f_r"};

// Shortest text with 17 significant digits; "nan"/"inf" for non-finite values.
std::string format_double(double v);

// The t column is physical time s / d.
void write_run_csv(std::ostream& out, const RunRecord& rec);
void write_run_csv(const std::filesystem::path& path, const RunRecord& rec);

// Same schema, `d` as above: the trajectory fills both the vessel and the *_re columns,
// tau1/tau2 hold the reference input and every other column is zero.
void write_reference_csv(std::ostream& out, const ReferenceTrajectory& traj, double d);
void write_reference_csv(const std::filesystem::path& path, const ReferenceTrajectory& traj,
                         double d);

// Numeric CSV with a header row. Throws std::runtime_error naming the line on
// malformed input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Throws std::out_of_range for an unknown column.
  std::size_t index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable load_csv(const std::filesystem::path& path);

// Reads s and the *_re columns back into a trajectory (params, input and
// limits are left default). Throws std::runtime_error if the header is not
// the run schema.
ReferenceTrajectory read_reference_csv(std::istream& in);

}  // namespace vtrack
