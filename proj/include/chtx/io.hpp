#pragma once

#include <filesystem>
#include <string>

#include "chtx/diagnostics.hpp"
#include "chtx/model.hpp"

namespace chtx {

/// Writes the trace as CSV with header
///   t,sup_u,sup_v,sup_grad_v,local_lp_p<value>[,...],weighted_energy,lyapunov
/// Values are printed with 17 significant digits so doubles round-trip.
void write_trace(const DiagnosticsTrace& trace, const std::filesystem::path& path);

DiagnosticsTrace read_trace(const std::filesystem::path& path);

/// Snapshot format CHTX1 (little-endian): magic "CHTX1" (5 bytes), u8 dim,
/// u64 points per dim, f64 half_width, then N^dim f64 values row-major.
void write_snapshot(const Field& field, const std::filesystem::path& path);

Field read_snapshot(const std::filesystem::path& path);

/// Column label for a local L^p series, e.g. p = 2 -> "local_lp_p2".
std::string local_lp_column(double p);

/// Emits a small matplotlib script that plots the named trace CSVs.
void write_plot_script(const std::filesystem::path& path,
                       const std::vector<std::string>& csv_names);

}  // namespace chtx
