#include "vtrack/record_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vtrack {

namespace {

void put_row(std::ostream& out, const std::array<double, kRunCsvColumns.size()>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << format_double(row[i]);
  }
  out << '\n';
}

void put_header(std::ostream& out) {
  for (std::size_t i = 0; i < kRunCsvColumns.size(); ++i) {
    if (i) out << ',';
    out << kRunCsvColumns[i];
  }
  out << '\n';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

double parse_field(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": not a number: '" +
                             std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_run_csv(std::ostream& out, const RunRecord& rec) {
  const double d = rec.setup.constants.d;
  put_header(out);
  for (const Sample& m : rec.samples) {
    const VesselState& a = m.vessel;
    const VesselState& b = m.ref;
    const ErrorState& e = m.error;
    put_row(out, {m.s,    m.s / d, a.x,    a.y,     a.psi,   a.u,     a.v,     a.r,   b.x,
                  b.y,    b.psi,   b.u,    b.v,     b.r,     e.e_x,   e.e_y,   e.e_u, e.e_v,
                  e.e_psi, e.e_r,  m.tau.tau1, m.tau.tau2, m.w.w1, m.w.w2, m.V, m.Vuv, m.G,
                  m.z,    m.W1,    m.W2,   m.Wt1,   m.Wt2,   m.f.f_u, m.f.f_v, m.f.f_r});
  }
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& rec) {
  std::ofstream out = open_out(path);
  write_run_csv(out, rec);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_reference_csv(std::ostream& out, const ReferenceTrajectory& traj, double d) {
  put_header(out);
  for (std::size_t i = 0; i < traj.s.size(); ++i) {
    const double s = traj.s[i];
    const VesselState& b = traj.states[i];
    const ControlInput tau = traj.input.at(s);
    put_row(out, {s,   s / d, b.x, b.y, b.psi, b.u, b.v, b.r, b.x, b.y, b.psi, b.u,
                  b.v, b.r,   0.0, 0.0, 0.0,   0.0, 0.0, 0.0, tau.tau1, tau.tau2, 0.0, 0.0,
                  0.0, 0.0,   0.0, 0.0, 0.0,   0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  }
}

void write_reference_csv(const std::filesystem::path& path, const ReferenceTrajectory& traj,
                         double d) {
  std::ofstream out = open_out(path);
  write_reference_csv(out, traj, d);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::size_t CsvTable::index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::column(std::string_view name) const {
  const std::size_t k = index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (t.header.empty()) {
      for (auto f : fields) t.header.emplace_back(f);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw std::runtime_error("line " + std::to_string(n) + ": expected " +
                               std::to_string(t.header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_field(f, n));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::runtime_error("empty CSV");
  return t;
}

CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return read_csv(in);
}

ReferenceTrajectory read_reference_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (t.header.size() != kRunCsvColumns.size()) {
    throw std::runtime_error("header does not match the run CSV schema");
  }
  for (std::size_t i = 0; i < kRunCsvColumns.size(); ++i) {
    if (t.header[i] != kRunCsvColumns[i]) {
      throw std::runtime_error("unexpected column '" + t.header[i] + "' at position " +
                               std::to_string(i));
    }
  }
  const std::size_t x = t.index("x_re");
  ReferenceTrajectory traj;
  for (const auto& r : t.rows) {
    traj.s.push_back(r[0]);
    traj.states.push_back({r[x], r[x + 1], r[x + 2], r[x + 3], r[x + 4], r[x + 5]});
  }
  return traj;
}

}  // namespace vtrack
