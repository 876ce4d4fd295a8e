#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mar/backtest.hpp"
#include "mar/data.hpp"

namespace mar {

// A batch run: input files plus the backtest parameters.
struct RunConfig {
    std::vector<std::filesystem::path> data_files;
    BacktestConfig backtest;
};

// Parses the JSON run config; throws ConfigError on schema violations or
// missing data files.
RunConfig parse_run_config(const std::filesystem::path& path);

SynthConfig parse_synth_config(const std::filesystem::path& path);

}  // namespace mar
