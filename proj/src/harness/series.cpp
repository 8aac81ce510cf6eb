#include "nsrel/harness/series.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nsrel/errors.hpp"

namespace nsrel::harness {

namespace {

using Column = double DiagnosticsRecord::*;

constexpr std::array<std::pair<std::string_view, Column>, 16> kColumns = {{
    {"time", &DiagnosticsRecord::time},
    {"mass", &DiagnosticsRecord::mass},
    {"energy", &DiagnosticsRecord::energy},
    {"dissipation", &DiagnosticsRecord::dissipation},
    {"rel_entropy", &DiagnosticsRecord::rel_entropy},
    {"rem_convective", &DiagnosticsRecord::rem_convective},
    {"rem_viscous", &DiagnosticsRecord::rem_viscous},
    {"rem_force", &DiagnosticsRecord::rem_force},
    {"rem_entropy", &DiagnosticsRecord::rem_entropy},
    {"rem_pressure", &DiagnosticsRecord::rem_pressure},
    {"rem_friction", &DiagnosticsRecord::rem_friction},
    {"rem_total", &DiagnosticsRecord::rem_total},
    {"rei_residual", &DiagnosticsRecord::rei_residual},
    {"gronwall_h", &DiagnosticsRecord::gronwall_h},
    {"gronwall_env", &DiagnosticsRecord::gronwall_env},
    {"clipped_mass", &DiagnosticsRecord::clipped_mass},
}};

constexpr std::string_view kHeader =
    "time,mass,energy,dissipation,rel_entropy,rem_convective,rem_viscous,rem_force,rem_entropy,"
    "rem_pressure,rem_friction,rem_total,rei_residual,gronwall_h,gronwall_env,clipped_mass";

double parse_double(std::string_view s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw IoError("malformed number '" + std::string(s) + "' in " + path.string());
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= line.size(); ++k)
    if (k == line.size() || line[k] == ',') {
      out.push_back(line.substr(start, k - start));
      start = k + 1;
    }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string_view series_header() { return kHeader; }

void write_series(std::span<const DiagnosticsRecord> records, const std::filesystem::path& path) {
  if (records.empty()) throw StructuralError("write_series: no records");
  std::string text(kHeader);
  text += '\n';
  for (const auto& rec : records) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const double v = rec.*kColumns[c].second;
      if (std::isnan(v))
        throw StructuralError("write_series: column " + std::string(kColumns[c].first) + " unset");
      if (c) text += ',';
      text += format_double(v);
    }
    text += '\n';
  }
  write_text(path, text);
}

std::vector<DiagnosticsRecord> read_series(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines.front() != kHeader)
    throw IoError("unexpected series header in " + path.string());
  std::vector<DiagnosticsRecord> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k]);
    if (cells.size() != kColumns.size())
      throw IoError("row " + std::to_string(k) + " of " + path.string() + " has the wrong width");
    DiagnosticsRecord rec;
    for (std::size_t c = 0; c < kColumns.size(); ++c) rec.*kColumns[c].second = parse_double(cells[c], path);
    out.push_back(rec);
  }
  return out;
}

void write_convergence(std::span<const ConvergenceRow> rows, const std::filesystem::path& path) {
  std::string text = "resolution,dx,err_rho,err_u\n";
  for (const auto& r : rows)
    text += std::to_string(r.resolution) + ',' + format_double(r.dx) + ',' + format_double(r.err_rho) +
            ',' + format_double(r.err_u) + '\n';
  write_text(path, text);
}

std::vector<ConvergenceRow> read_convergence(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines.front() != "resolution,dx,err_rho,err_u")
    throw IoError("unexpected convergence header in " + path.string());
  std::vector<ConvergenceRow> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k]);
    if (cells.size() != 4) throw IoError("malformed convergence row in " + path.string());
    out.push_back({static_cast<int>(parse_double(cells[0], path)), parse_double(cells[1], path),
                   parse_double(cells[2], path), parse_double(cells[3], path)});
  }
  return out;
}

double convergence_order(std::span<const ErrorSample> samples) {
  if (samples.size() < 2) throw StructuralError("convergence_order: need at least two entries");
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples) {
    if (!(s.dx > 0.0)) throw DomainError("convergence_order: dx must be > 0");
    if (!(s.error > 0.0)) throw DomainError("convergence_order: errors must be > 0");
    mx += std::log(s.dx);
    my += std::log(s.error);
  }
  const double n = static_cast<double>(samples.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double x = std::log(s.dx) - mx;
    sxx += x * x;
    sxy += x * (std::log(s.error) - my);
  }
  if (sxx == 0.0) throw StructuralError("convergence_order: all dx are equal");
  return sxy / sxx;
}

}  // namespace nsrel::harness
