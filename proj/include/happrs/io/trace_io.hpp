#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "happrs/baseline.hpp"
#include "happrs/solver.hpp"

namespace happrs::io {

inline constexpr const char* kTraceHeader =
    "k,t_x,t_y,norm_dx,norm_dy,L_beta,L_hat,feas_inf,kkt_inf,ofv,backtracks_x,backtracks_y,"
    "elapsed_ms";

/// Shortest-round-trip decimal, '.' separator regardless of locale.
std::string format_double(double v);

void write_trace(const std::vector<StepRecord>& trace, const std::filesystem::path& path);

/// Parses a file written by write_trace. Only the CSV columns are restored.
std::vector<StepRecord> read_trace(const std::filesystem::path& path);

void write_baseline_trace(const std::vector<GdStep>& trace, const std::filesystem::path& path);

}  // namespace happrs::io
