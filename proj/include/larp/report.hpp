#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "larp/experiments.hpp"

namespace larp {

/// Decimal rendering used in every machine-readable output: '.' separator,
/// no grouping, 17 significant digits (lossless for doubles).
std::string format_real(double value);

// CSV schemas. Header row always present; rows follow the deterministic
// record order produced by the sweep drivers.

/// epsilon,kind,rep,m,param,delta,risk
std::string cells_csv(const std::vector<CellRecord>& records);

/// epsilon,kind,r_agn_mean,r_agn_stderr
std::string aggregate_csv(const std::vector<AggregateRecord>& records);

/// delta2,kind,gap_mean,gap_stderr
std::string hetero_aggregate_csv(const std::vector<HeteroAggregateRecord>& records);

/// p1,theta0,theta_quarter,theta2,r_agn
std::string lowerbound_csv(const std::vector<std::array<double, 5>>& rows);

/// Writes via a temp file in the target directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace larp
