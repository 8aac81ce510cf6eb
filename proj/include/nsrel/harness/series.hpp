/// @file series.hpp
/// @brief CSV emission of diagnostics series and convergence tables.
#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "nsrel/diagnostics.hpp"

namespace nsrel::harness {

/// The exact header line of a diagnostics CSV (without newline).
std::string_view series_header();

/// One row per record, floats in shortest round-trip form. Throws
/// StructuralError on an empty or incomplete series and IoError when the
/// file cannot be written.
void write_series(std::span<const DiagnosticsRecord> records, const std::filesystem::path& path);

/// Reads the columns of a file written by write_series; other fields stay unset.
std::vector<DiagnosticsRecord> read_series(const std::filesystem::path& path);

struct ConvergenceRow {
  int resolution = 0;
  double dx = 0.0;
  double err_rho = 0.0;
  double err_u = 0.0;
};

/// Header "resolution,dx,err_rho,err_u".
void write_convergence(std::span<const ConvergenceRow> rows, const std::filesystem::path& path);
std::vector<ConvergenceRow> read_convergence(const std::filesystem::path& path);

struct ErrorSample {
  double dx = 0.0;
  double error = 0.0;
};

/// Least-squares slope of log(error) against log(dx). Throws StructuralError
/// with fewer than two entries or identical dx, DomainError on non-positive
/// dx or error.
double convergence_order(std::span<const ErrorSample> samples);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace nsrel::harness
