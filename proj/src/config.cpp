#include "mar/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "mar/errors.hpp"

namespace mar {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

Date date_field(const json& j, const char* what) {
    if (!j.is_string()) throw ConfigError(std::string(what) + ": expected an ISO date string");
    try {
        return parse_date(j.get<std::string>());
    } catch (const ParseError& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

StrategySpec parse_strategy(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("strategy entry must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();

    StrategySpec spec;
    if (kind == "equal_weight")
        spec.kind = StrategyKind::EqualWeight;
    else if (kind == "tangency")
        spec.kind = StrategyKind::Tangency;
    else if (kind == "risk_budgeting")
        spec.kind = StrategyKind::RiskBudgeting;
    else if (kind == "rrl_sharpe")
        spec.kind = StrategyKind::RrlSharpe;
    else if (kind == "rrl_market_adaptive")
        spec.kind = StrategyKind::RrlMarketAdaptive;
    else
        throw ConfigError("unknown strategy kind '" + kind + "'");

    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (j.contains("cost_rate")) spec.cost_rate = j.at("cost_rate").get<double>();

    if (j.contains("budgets")) {
        const auto b = j.at("budgets").get<std::vector<double>>();
        spec.budgets = Eigen::Map<const Eigen::VectorXd>(b.data(),
                                                         static_cast<Eigen::Index>(b.size()));
    }

    TrainConfig& tc = spec.train;
    if (j.contains("learning_rate")) tc.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("epochs")) tc.epochs = j.at("epochs").get<int>();
    if (j.contains("feature_lags")) tc.feature_lags = j.at("feature_lags").get<int>();
    if (j.contains("seed")) tc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("train_cost_rate")) tc.cost_rate = j.at("train_cost_rate").get<double>();
    if (j.contains("alpha")) tc.ratio.alpha = j.at("alpha").get<double>();
    if (j.contains("regime_lookback")) tc.ratio.regime_lookback = j.at("regime_lookback").get<int>();
    if (j.contains("pin_regime_return") && !j.at("pin_regime_return").is_null())
        tc.pin_regime_return = j.at("pin_regime_return").get<double>();
    return spec;
}

}  // namespace

RunConfig parse_run_config(const std::filesystem::path& path) {
    const json j = load_json(path);
    try {
        RunConfig config;
        if (!j.contains("data") || !j.at("data").is_array() || j.at("data").empty())
            throw ConfigError("config: 'data' must be a non-empty array of file paths");
        for (const auto& f : j.at("data")) {
            std::filesystem::path p = f.get<std::string>();
            if (p.is_relative()) p = path.parent_path() / p;
            if (!std::filesystem::exists(p))
                throw ConfigError("config: data file '" + p.string() + "' does not exist");
            config.data_files.push_back(p);
        }

        const auto& pre = j.at("pretrain");
        const auto& test = j.at("test");
        if (!pre.is_array() || pre.size() != 2 || !test.is_array() || test.size() != 2)
            throw ConfigError("config: 'pretrain' and 'test' must be [start, end] date pairs");
        config.backtest.pretrain_start = date_field(pre[0], "pretrain start");
        config.backtest.pretrain_end = date_field(pre[1], "pretrain end");
        config.backtest.test_start = date_field(test[0], "test start");
        config.backtest.test_end = date_field(test[1], "test end");

        if (j.contains("retrain_months"))
            config.backtest.retrain_months = j.at("retrain_months").get<int>();
        if (j.contains("rebalance_months"))
            config.backtest.rebalance_months = j.at("rebalance_months").get<int>();
        if (j.contains("annualization_factor"))
            config.backtest.annualization_factor = j.at("annualization_factor").get<double>();
        if (j.contains("risk_free")) config.backtest.risk_free = j.at("risk_free").get<double>();

        if (j.contains("strategies"))
            for (const auto& s : j.at("strategies"))
                config.backtest.strategies.push_back(parse_strategy(s));
        return config;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

SynthConfig parse_synth_config(const std::filesystem::path& path) {
    const json j = load_json(path);
    try {
        SynthConfig config;
        config.n_days = j.at("n_days").get<int>();
        config.assets = j.at("assets").get<std::vector<std::string>>();
        if (j.contains("start")) config.start = date_field(j.at("start"), "start");
        if (j.contains("correlation")) config.correlation = j.at("correlation").get<double>();
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& r : j.at("regimes")) {
            SynthRegime reg;
            reg.length_days = r.at("length_days").get<int>();
            reg.annual_drift = r.at("annual_drift").get<std::vector<double>>();
            reg.annual_vol = r.at("annual_vol").get<std::vector<double>>();
            config.regimes.push_back(std::move(reg));
        }
        return config;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

}  // namespace mar
