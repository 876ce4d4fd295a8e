#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "mar/backtest.hpp"
#include "mar/config.hpp"
#include "mar/data.hpp"
#include "mar/errors.hpp"
#include "mar/ratios.hpp"
#include "mar/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int cmd_backtest(const std::string& config_path, const std::string& out_dir) {
    const mar::RunConfig config = mar::parse_run_config(config_path);

    std::vector<mar::PriceTable> tables;
    for (const auto& f : config.data_files) tables.push_back(mar::load_csv(f));
    const mar::PriceTable prices = mar::align(tables);

    const mar::BacktestReport report = mar::run(config.backtest, prices);
    mar::write_report_files(report, out_dir);

    std::printf("wrote %s/report.json (%zu strategies, %zu segments)\n", out_dir.c_str(),
                report.strategies.size(), report.schedule.size());
    return 0;
}

int cmd_ratio_grid(double alpha, double risk_free, const std::vector<double>& regimes,
                   double sigma_min, double sigma_max, int steps, const std::string& out_path) {
    if (!(sigma_min > 0.0) || !(sigma_max > sigma_min))
        throw mar::ConfigError("ratio-grid: need 0 < sigma-min < sigma-max");
    if (steps < 2) throw mar::ConfigError("ratio-grid: need at least 2 steps");

    std::string out = "sigma,sharpe";
    std::vector<double> rhos;
    for (double r : regimes) {
        rhos.push_back(mar::rho(r, alpha));
        char col[64];
        std::snprintf(col, sizeof col, ",m_regime_%g", r);
        out += col;
    }
    out += '\n';

    // Fixed-Sharpe family: excess return equals sigma, so Sharpe is 1.
    for (int i = 0; i < steps; ++i) {
        const double sigma = sigma_min + (sigma_max - sigma_min) * i / (steps - 1);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", sigma,
                      mar::sharpe(risk_free + sigma, risk_free, sigma));
        out += buf;
        for (double r : rhos) {
            std::snprintf(buf, sizeof buf, ",%.6f",
                          mar::market_adaptive_ratio(risk_free + sigma, risk_free, sigma, r));
            out += buf;
        }
        out += '\n';
    }
    mar::atomic_write(out_path, out);
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_path) {
    const mar::SynthConfig config = mar::parse_synth_config(config_path);
    const mar::PriceTable table = mar::synth_market(config);
    mar::atomic_write(out_path, mar::to_csv(table));
    std::printf("wrote %s (%zu days, %zu assets)\n", out_path.c_str(), table.dates.size(),
                table.assets.size());
    return 0;
}

int cmd_validate(const std::string& data_path) {
    const mar::PriceTable table = mar::load_csv(data_path);
    std::printf("%s: %zu rows, %zu assets, %s .. %s\n", data_path.c_str(), table.dates.size(),
                table.assets.size(), mar::to_string(table.dates.front()).c_str(),
                mar::to_string(table.dates.back()).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regime-aware portfolio backtesting engine"};
    app.require_subcommand(1);

    std::string config_path, out_path, data_path;

    auto* backtest = app.add_subcommand("backtest", "Run a configured backtest");
    backtest->add_option("--config", config_path, "JSON run config")->required();
    backtest->add_option("--out", out_path, "output directory")->required();

    double alpha = 5.0, rf = 0.0, sigma_min = 1.0, sigma_max = 8.0;
    int steps = 100;
    std::vector<double> regimes;
    auto* grid = app.add_subcommand("ratio-grid", "Emit ratio curves along the fixed-Sharpe family");
    grid->add_option("--alpha", alpha, "regime sigmoid steepness");
    grid->add_option("--rf", rf, "risk-free rate");
    grid->add_option("--regimes", regimes, "regime returns, one curve each")->required();
    grid->add_option("--sigma-min", sigma_min, "lowest risk level");
    grid->add_option("--sigma-max", sigma_max, "highest risk level");
    grid->add_option("--steps", steps, "grid points");
    grid->add_option("--out", out_path, "output CSV path")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic price table");
    synth->add_option("--config", config_path, "JSON synthetic market config")->required();
    synth->add_option("--out", out_path, "output CSV path")->required();

    auto* validate = app.add_subcommand("validate", "Check a price CSV and print a summary");
    validate->add_option("path", data_path, "price CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(backtest)) return cmd_backtest(config_path, out_path);
        if (app.got_subcommand(grid))
            return cmd_ratio_grid(alpha, rf, regimes, sigma_min, sigma_max, steps, out_path);
        if (app.got_subcommand(synth)) return cmd_synth(config_path, out_path);
        if (app.got_subcommand(validate)) return cmd_validate(data_path);
    } catch (const mar::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const mar::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const mar::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
    return 1;
}
