#pragma once

#include "dabench/protocol.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dabench::cli {

// Percent with exactly two decimals, ties rounded half up (away from zero
// for the negatives, which never occur in accuracy data).
std::string format_percent_2dp(double v);

// results.csv: `method,layer,mean,stderr,n_splits`, full precision.
void write_results_csv(const protocol::ResultTable& table,
                       const std::filesystem::path& path);

// per-split.csv: `method,layer,split_id,accuracy`, full precision.
void write_per_split_csv(const protocol::ResultTable& table,
                         const std::filesystem::path& path);

// results.md: one row per method, `mean ± stderr` to two decimals.
void write_results_markdown(const protocol::ResultTable& table,
                            const std::filesystem::path& path);

// sweep.csv: `method,x,mean,stderr,status`; skipped rows leave mean and
// stderr empty.
void write_sweep_csv(const std::vector<protocol::SweepPoint>& points,
                     const std::filesystem::path& path);

}  // namespace dabench::cli
