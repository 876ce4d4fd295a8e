#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mar/dates.hpp"

namespace mar {

// Date-aligned matrix of adjusted close prices, one column per asset.
struct PriceTable {
    std::vector<Date> dates;          // strictly increasing
    std::vector<std::string> assets;  // column names
    Eigen::MatrixXd prices;           // rows = dates, cols = assets
};

// Simple per-period returns; one fewer row than the source prices.
struct ReturnTable {
    std::vector<Date> dates;  // the later date of each price pair
    std::vector<std::string> assets;
    Eigen::MatrixXd returns;
};

// One piecewise-constant drift/vol segment of the synthetic market.
struct SynthRegime {
    int length_days = 0;
    std::vector<double> annual_drift;  // per asset
    std::vector<double> annual_vol;    // per asset, > 0
};

struct SynthConfig {
    int n_days = 0;  // must equal the sum of segment lengths
    std::vector<std::string> assets;
    Date start{2015, 1, 1};
    double correlation = 0.0;  // common pairwise correlation, |c| < 1
    std::uint64_t seed = 0;
    std::vector<SynthRegime> regimes;
};

PriceTable load_csv(const std::filesystem::path& path);

// Canonical CSV form: header `date,A,B,...`, LF endings, shortest
// round-trip decimals. load_csv of a canonical file followed by to_csv
// reproduces the bytes.
std::string to_csv(const PriceTable& table);
void write_csv(const PriceTable& table, const std::filesystem::path& path);

// Inner join on dates; columns concatenated in input order.
PriceTable align(std::span<const PriceTable> tables);

ReturnTable to_returns(const PriceTable& prices);

// Correlated geometric Brownian motion with piecewise-constant
// drift/vol segments, weekday calendar, dt = 1/252.
PriceTable synth_market(const SynthConfig& config);

void validate_price_table(const PriceTable& table);

}  // namespace mar
