#include "mar/report.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "mar/errors.hpp"

namespace mar {

namespace {

using nlohmann::json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json segment_json(const Segment& seg) {
    return json{{"train_start", to_string(seg.train_start)},
                {"train_end", to_string(seg.train_end)},
                {"test_start", to_string(seg.test_start)},
                {"test_end", to_string(seg.test_end)}};
}

}  // namespace

std::string report_to_json(const BacktestReport& report) {
    json j;
    j["annualization_factor"] = report.annualization_factor;
    j["risk_free"] = report.risk_free;
    j["train_window"] = "expanding";

    j["schedule"] = json::array();
    for (const Segment& seg : report.schedule) j["schedule"].push_back(segment_json(seg));

    j["equity_dates"] = json::array();
    for (const Date& d : report.equity_dates) j["equity_dates"].push_back(to_string(d));

    j["strategies"] = json::array();
    for (const StrategyResult& s : report.strategies) {
        json e;
        e["name"] = s.name;
        e["profit"] = s.metrics.profit;
        e["risk"] = s.metrics.risk;
        e["sharpe"] = s.metrics.sharpe;
        e["whole_period"] = json{{"total_return", s.total_return}, {"std", s.whole_period_std}};
        e["returns"] = s.returns;
        e["equity"] = s.equity;
        e["weights"] = json::array();
        for (const WeightSnapshot& w : s.weights) {
            json row;
            row["date"] = to_string(w.date);
            row["weights"] = std::vector<double>(w.weights.data(), w.weights.data() + w.weights.size());
            e["weights"].push_back(row);
        }
        j["strategies"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string metrics_to_csv(const BacktestReport& report) {
    std::string out = "name,profit,risk,sharpe\n";
    for (const StrategyResult& s : report.strategies) {
        out += s.name + "," + fixed6(s.metrics.profit) + "," + fixed6(s.metrics.risk) + "," +
               fixed6(s.metrics.sharpe) + "\n";
    }
    return out;
}

std::string equity_to_csv(const BacktestReport& report, const StrategyResult& strategy) {
    std::string out = "date,equity\n";
    // equity[0] is the initial stake, before the first test return.
    out += "start," + fixed6(strategy.equity.front()) + "\n";
    for (std::size_t i = 0; i < report.equity_dates.size(); ++i)
        out += to_string(report.equity_dates[i]) + "," + fixed6(strategy.equity[i + 1]) + "\n";
    return out;
}

std::string weights_to_csv(const BacktestReport& report, const StrategyResult& strategy) {
    (void)report;
    std::string out = "date";
    const Eigen::Index n = strategy.weights.empty() ? 0 : strategy.weights.front().weights.size();
    for (Eigen::Index i = 0; i < n; ++i) out += ",w" + std::to_string(i);
    out += "\n";
    for (const WeightSnapshot& w : strategy.weights) {
        out += to_string(w.date);
        for (Eigen::Index i = 0; i < w.weights.size(); ++i) out += "," + fixed6(w.weights(i));
        out += "\n";
    }
    return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_report_files(const BacktestReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    atomic_write(out_dir / "report.json", report_to_json(report));
    atomic_write(out_dir / "metrics.csv", metrics_to_csv(report));
    for (const StrategyResult& s : report.strategies) {
        atomic_write(out_dir / ("equity_" + s.name + ".csv"), equity_to_csv(report, s));
        atomic_write(out_dir / ("weights_" + s.name + ".csv"), weights_to_csv(report, s));
    }
}

}  // namespace mar
