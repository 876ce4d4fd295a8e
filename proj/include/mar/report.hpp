#pragma once

#include <filesystem>
#include <string>

#include "mar/backtest.hpp"

namespace mar {

// Full-precision JSON form of a report.
std::string report_to_json(const BacktestReport& report);

// Tables-style summary: name,profit,risk,sharpe at 6 decimal places.
std::string metrics_to_csv(const BacktestReport& report);

std::string equity_to_csv(const BacktestReport& report, const StrategyResult& strategy);
std::string weights_to_csv(const BacktestReport& report, const StrategyResult& strategy);

// Writes to a temporary file in the target directory, then renames, so a
// failure never leaves partial output behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Writes report.json, metrics.csv, equity_<name>.csv, weights_<name>.csv.
void write_report_files(const BacktestReport& report, const std::filesystem::path& out_dir);

}  // namespace mar
