/// @file checkpoint.hpp
/// @brief Binary snapshots of a State with its fluid parameters.
///
/// Layout (all integers and floats little-endian):
///
///   offset  size  field
///        0     8  magic "NSRELCK1"
///        8     4  u32 format version (1)
///       12     4  u32 dim
///       16     8  i32 cells[2]
///       24    16  f64 spacing[2]
///       40    16  f64 origin[2]
///       56    16  u32 boundary[4] (0 no_slip, 1 navier_slip, 2 periodic; XLo XHi YLo YHi)
///       72     8  f64 time
///       80    56  f64 mu, eta, beta, a, gamma, rho_bar, cfl
///      136     -  f64 rho[n], then f64 u_c[n] for c < dim; n = cells[0] * cells[1],
///                 row-major with x varying fastest
///
/// A plain-text sidecar "<path>.txt" records the config hash and header summary.
#pragma once

#include <filesystem>
#include <string>

#include "nsrel/solver.hpp"

namespace nsrel {

struct Checkpoint {
  State state;
  FluidParams params;  ///< law rebuilt as IsentropicLaw
  std::string config_hash;
};

/// Throws IoError when the file cannot be written.
void write_checkpoint(const std::filesystem::path& path, const State& s, const FluidParams& params,
                      const std::string& config_hash);

/// Throws IoError on unreadable or malformed files.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace nsrel
