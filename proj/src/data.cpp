#include "mar/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "mar/errors.hpp"

namespace mar {

void validate_price_table(const PriceTable& table) {
    const auto rows = static_cast<Eigen::Index>(table.dates.size());
    const auto cols = static_cast<Eigen::Index>(table.assets.size());
    if (table.prices.rows() != rows || table.prices.cols() != cols)
        throw ValidationError("price table: dimension mismatch");
    if (rows == 0 || cols == 0) throw ValidationError("price table: empty");
    for (std::size_t i = 1; i < table.dates.size(); ++i)
        if (!(table.dates[i - 1] < table.dates[i]))
            throw ValidationError("price table: dates not strictly increasing at row " +
                                  std::to_string(i + 1));
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double p = table.prices(r, c);
            if (!std::isfinite(p) || p <= 0.0)
                throw ValidationError("price table: non-positive or non-finite price for asset '" +
                                      table.assets[static_cast<std::size_t>(c)] + "' on " +
                                      to_string(table.dates[static_cast<std::size_t>(r)]));
        }
}

namespace {

double parse_price(const std::string& field, int line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

PriceTable load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date")
        throw ParseError(path.string() + ": line 1: header must be 'date,<ASSET>,...'");

    PriceTable table;
    table.assets.assign(header.begin() + 1, header.end());
    for (const auto& a : table.assets)
        if (a.empty()) throw ParseError(path.string() + ": line 1: empty asset name");

    struct Row {
        Date date;
        std::vector<double> prices;
        int line_no;
    };
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        Row row;
        row.line_no = line_no;
        row.date = parse_date(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i)
            row.prices.push_back(parse_price(fields[i], line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw ValidationError(path.string() + ": line " + std::to_string(rows[i].line_no) +
                                  ": duplicate date " + to_string(rows[i].date));
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.prices.size(); ++c)
            if (!std::isfinite(row.prices[c]) || row.prices[c] <= 0.0)
                throw ValidationError(path.string() + ": line " + std::to_string(row.line_no) +
                                      ": non-positive price for asset '" + table.assets[c] + "'");

    table.dates.reserve(rows.size());
    table.prices.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.assets.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        table.dates.push_back(rows[r].date);
        for (std::size_t c = 0; c < rows[r].prices.size(); ++c)
            table.prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r].prices[c];
    }
    return table;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string to_csv(const PriceTable& table) {
    validate_price_table(table);
    std::string out = "date";
    for (const auto& a : table.assets) {
        out += ',';
        out += a;
    }
    out += '\n';
    for (std::size_t r = 0; r < table.dates.size(); ++r) {
        out += to_string(table.dates[r]);
        for (Eigen::Index c = 0; c < table.prices.cols(); ++c) {
            out += ',';
            out += format_double(table.prices(static_cast<Eigen::Index>(r), c));
        }
        out += '\n';
    }
    return out;
}

void write_csv(const PriceTable& table, const std::filesystem::path& path) {
    const std::string body = to_csv(table);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << body;
}

PriceTable align(std::span<const PriceTable> tables) {
    if (tables.empty()) throw InvalidInputError("align: no tables");
    for (const auto& t : tables) validate_price_table(t);

    // Intersect calendars; each input is already strictly increasing.
    std::vector<Date> common = tables[0].dates;
    for (std::size_t i = 1; i < tables.size(); ++i) {
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), tables[i].dates.begin(),
                              tables[i].dates.end(), std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) throw NoOverlapError("align: no common dates across tables");

    PriceTable out;
    out.dates = common;
    Eigen::Index total_cols = 0;
    for (const auto& t : tables) total_cols += t.prices.cols();
    out.prices.resize(static_cast<Eigen::Index>(common.size()), total_cols);

    Eigen::Index col0 = 0;
    for (const auto& t : tables) {
        out.assets.insert(out.assets.end(), t.assets.begin(), t.assets.end());
        std::size_t src = 0;
        for (std::size_t r = 0; r < common.size(); ++r) {
            while (t.dates[src] < common[r]) ++src;
            out.prices.block(static_cast<Eigen::Index>(r), col0, 1, t.prices.cols()) =
                t.prices.row(static_cast<Eigen::Index>(src));
        }
        col0 += t.prices.cols();
    }
    return out;
}

ReturnTable to_returns(const PriceTable& prices) {
    validate_price_table(prices);
    if (prices.dates.size() < 2) throw InsufficientDataError("to_returns: need at least 2 rows");

    ReturnTable out;
    out.assets = prices.assets;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    const Eigen::Index rows = prices.prices.rows() - 1;
    out.returns = prices.prices.bottomRows(rows).array() / prices.prices.topRows(rows).array() - 1.0;
    return out;
}

namespace {

void validate_synth_config(const SynthConfig& config) {
    if (config.assets.empty()) throw ValidationError("synth: no assets");
    if (config.regimes.empty()) throw ValidationError("synth: no regimes");
    if (!(std::abs(config.correlation) < 1.0))
        throw ValidationError("synth: |correlation| must be < 1");
    const std::size_t n = config.assets.size();
    int total = 0;
    for (const auto& reg : config.regimes) {
        if (reg.length_days < 1) throw ValidationError("synth: regime length must be positive");
        if (reg.annual_drift.size() != n || reg.annual_vol.size() != n)
            throw ValidationError("synth: regime drift/vol count must match asset count");
        for (double v : reg.annual_vol)
            if (!(v >= 0.0)) throw ValidationError("synth: vols must be non-negative");
        total += reg.length_days;
    }
    if (config.n_days != total)
        throw ValidationError("synth: n_days (" + std::to_string(config.n_days) +
                              ") must equal the sum of regime lengths (" + std::to_string(total) +
                              ")");
}

}  // namespace

PriceTable synth_market(const SynthConfig& config) {
    validate_synth_config(config);
    const Eigen::Index n = static_cast<Eigen::Index>(config.assets.size());
    const double dt = 1.0 / 252.0;

    // Equicorrelated shocks via Cholesky of (1-c)I + c*11'.
    Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(n, n, config.correlation);
    corr.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success)
        throw ValidationError("synth: correlation matrix not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    PriceTable table;
    table.assets = config.assets;
    table.dates.reserve(static_cast<std::size_t>(config.n_days));
    table.prices.resize(config.n_days, n);

    Date d = config.start;
    while (is_weekend(d)) d = next_day(d);

    Eigen::VectorXd log_price = Eigen::VectorXd::Constant(n, std::log(100.0));
    Eigen::VectorXd eps(n);
    Eigen::Index row = 0;
    for (const auto& reg : config.regimes) {
        for (int k = 0; k < reg.length_days; ++k, ++row) {
            for (Eigen::Index j = 0; j < n; ++j) eps(j) = gauss(rng);
            const Eigen::VectorXd z = chol * eps;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double mu = reg.annual_drift[static_cast<std::size_t>(j)];
                const double vol = reg.annual_vol[static_cast<std::size_t>(j)];
                log_price(j) += (mu - 0.5 * vol * vol) * dt + vol * std::sqrt(dt) * z(j);
                table.prices(row, j) = std::exp(log_price(j));
            }
            table.dates.push_back(d);
            do {
                d = next_day(d);
            } while (is_weekend(d));
        }
    }
    return table;
}

}  // namespace mar
