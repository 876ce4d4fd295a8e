#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mar/data.hpp"
#include "mar/errors.hpp"
#include "mar/ratios.hpp"

using namespace mar;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

SynthConfig toy_synth(int days, double drift, double vol, std::uint64_t seed) {
    SynthConfig c;
    c.n_days = days;
    c.assets = {"X"};
    c.seed = seed;
    c.regimes.push_back({days, {drift}, {vol}});
    return c;
}

}  // namespace

TEST_SUITE("csv io") {
    TEST_CASE("well-formed file") {
        const auto path = write_temp("mar_ok.csv",
                                     "date,AAA,BBB\n"
                                     "2020-01-02,100.5,50.25\n"
                                     "2020-01-03,101,49.5\n"
                                     "2020-01-06,99.75,51\n");
        const auto table = load_csv(path);
        CHECK(table.dates.size() == 3);
        CHECK(table.assets == std::vector<std::string>{"AAA", "BBB"});
        CHECK(table.prices(0, 0) == doctest::Approx(100.5));
        CHECK(table.prices(2, 1) == doctest::Approx(51.0));
    }

    TEST_CASE("zero price names the line") {
        const auto path = write_temp("mar_zero.csv",
                                     "date,AAA\n2020-01-02,100\n2020-01-03,0\n");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 3"), ValidationError);
    }

    TEST_CASE("duplicate date rejected") {
        const auto path = write_temp("mar_dup.csv",
                                     "date,AAA\n2020-01-02,100\n2020-01-02,101\n");
        CHECK_THROWS_AS(load_csv(path), ValidationError);
    }

    TEST_CASE("shuffled rows load as sorted") {
        const auto sorted = load_csv(write_temp("mar_sorted.csv",
                                                "date,AAA\n"
                                                "2020-01-02,100\n2020-01-03,101\n2020-01-06,102\n"));
        const auto shuffled = load_csv(write_temp("mar_shuffled.csv",
                                                  "date,AAA\n"
                                                  "2020-01-06,102\n2020-01-02,100\n2020-01-03,101\n"));
        CHECK(to_csv(sorted) == to_csv(shuffled));
    }

    TEST_CASE("malformed inputs") {
        CHECK_THROWS_AS(load_csv(write_temp("mar_empty.csv", "")), ParseError);
        CHECK_THROWS_AS(load_csv(write_temp("mar_header.csv", "time,AAA\n2020-01-02,1\n")),
                        ParseError);
        CHECK_THROWS_AS(load_csv(write_temp("mar_fields.csv", "date,AAA\n2020-01-02,1,2\n")),
                        ParseError);
        CHECK_THROWS_AS(load_csv(write_temp("mar_num.csv", "date,AAA\n2020-01-02,abc\n")),
                        ParseError);
        CHECK_THROWS_AS(load_csv(write_temp("mar_norows.csv", "date,AAA\n")), ParseError);
    }

    TEST_CASE("canonical round trip is byte identical") {
        const std::string canon =
            "date,AAA,BBB\n"
            "2020-01-02,100.5,50.25\n"
            "2020-01-03,101.125,49.5\n";
        const auto table = load_csv(write_temp("mar_canon.csv", canon));
        CHECK(to_csv(table) == canon);
    }
}

TEST_SUITE("align") {
    TEST_CASE("identical calendars concatenate columns") {
        const auto a = load_csv(write_temp("mar_a.csv",
                                           "date,AAA\n2020-01-02,100\n2020-01-03,101\n"));
        const auto b = load_csv(write_temp("mar_b.csv",
                                           "date,BBB\n2020-01-02,50\n2020-01-03,51\n"));
        const PriceTable tables[] = {a, b};
        const auto joined = align(tables);
        CHECK(joined.assets == std::vector<std::string>{"AAA", "BBB"});
        CHECK(joined.dates.size() == 2);
        CHECK(joined.prices(1, 1) == doctest::Approx(51.0));
    }

    TEST_CASE("offset calendars keep the intersection") {
        std::string a_csv = "date,AAA\n", b_csv = "date,BBB\n";
        Date d{2020, 3, 2};
        for (int i = 0; i < 10; ++i) {
            if (i < 9) a_csv += to_string(d) + ",100\n";
            if (i > 0) b_csv += to_string(d) + ",50\n";
            do {
                d = next_day(d);
            } while (is_weekend(d));
        }
        const auto a = load_csv(write_temp("mar_off_a.csv", a_csv));
        const auto b = load_csv(write_temp("mar_off_b.csv", b_csv));
        const PriceTable tables[] = {a, b};
        CHECK(align(tables).dates.size() == 8);
    }

    TEST_CASE("disjoint calendars") {
        const auto a = load_csv(write_temp("mar_d1.csv", "date,AAA\n2020-01-02,100\n"));
        const auto b = load_csv(write_temp("mar_d2.csv", "date,BBB\n2021-01-04,50\n"));
        const PriceTable tables[] = {a, b};
        CHECK_THROWS_AS(align(tables), NoOverlapError);
    }

    TEST_CASE("idempotent") {
        const auto a = load_csv(write_temp("mar_i1.csv",
                                           "date,AAA\n2020-01-02,100\n2020-01-03,101\n"));
        const auto b = load_csv(write_temp("mar_i2.csv",
                                           "date,BBB\n2020-01-03,50\n2020-01-06,51\n"));
        const PriceTable tables[] = {a, b};
        const auto once = align(tables);
        const PriceTable again[] = {once};
        CHECK(to_csv(align(again)) == to_csv(once));
    }
}

TEST_SUITE("returns") {
    TEST_CASE("examples") {
        const auto t = load_csv(write_temp("mar_r.csv",
                                           "date,AAA\n2020-01-02,100\n2020-01-03,110\n"));
        const auto r = to_returns(t);
        CHECK(r.returns(0, 0) == doctest::Approx(0.10));
        CHECK(r.dates.front() == Date{2020, 1, 3});

        const auto v = load_csv(write_temp("mar_v.csv",
                                           "date,AAA\n2020-01-02,100\n2020-01-03,50\n2020-01-06,100\n"));
        const auto rv = to_returns(v);
        CHECK(rv.returns(0, 0) == doctest::Approx(-0.5));
        CHECK(rv.returns(1, 0) == doctest::Approx(1.0));
    }

    TEST_CASE("constant prices give zero returns") {
        const auto t = load_csv(write_temp("mar_c.csv",
                                           "date,AAA\n2020-01-02,100\n2020-01-03,100\n"));
        CHECK(to_returns(t).returns.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }

    TEST_CASE("single row is insufficient") {
        const auto t = load_csv(write_temp("mar_s.csv", "date,AAA\n2020-01-02,100\n"));
        CHECK_THROWS_AS(to_returns(t), InsufficientDataError);
    }

    TEST_CASE("compounding returns recovers the price ratio") {
        const auto table = synth_market(toy_synth(300, 0.08, 0.25, 4));
        const auto r = to_returns(table);
        double growth = 1.0;
        for (int t = 0; t < r.returns.rows(); ++t) growth *= 1.0 + r.returns(t, 0);
        CHECK(growth == doctest::Approx(table.prices(299, 0) / table.prices(0, 0)).epsilon(1e-12));
    }
}

TEST_SUITE("synthetic market") {
    TEST_CASE("deterministic per seed") {
        const auto a = synth_market(toy_synth(100, 0.05, 0.2, 9));
        const auto b = synth_market(toy_synth(100, 0.05, 0.2, 9));
        CHECK(to_csv(a) == to_csv(b));
        const auto c = synth_market(toy_synth(100, 0.05, 0.2, 10));
        CHECK(to_csv(a) != to_csv(c));
    }

    TEST_CASE("zero vol positive drift is strictly increasing") {
        const auto table = synth_market(toy_synth(50, 0.10, 0.0, 0));
        for (int t = 1; t < 50; ++t) CHECK(table.prices(t, 0) > table.prices(t - 1, 0));
    }

    TEST_CASE("weekday calendar, strictly increasing dates") {
        const auto table = synth_market(toy_synth(30, 0.05, 0.2, 1));
        for (const Date& d : table.dates) CHECK(!is_weekend(d));
        for (std::size_t i = 1; i < table.dates.size(); ++i)
            CHECK(table.dates[i - 1] < table.dates[i]);
    }

    TEST_CASE("long-run sample moments match the configured regime") {
        const auto table = synth_market(toy_synth(100000, 0.05, 0.2, 12));
        double sum = 0.0, ss = 0.0;
        const int n = 99999;
        std::vector<double> lr(n);
        for (int t = 0; t < n; ++t) {
            lr[t] = std::log(table.prices(t + 1, 0) / table.prices(t, 0));
            sum += lr[t];
        }
        const double mean = sum / n;
        for (double x : lr) ss += (x - mean) * (x - mean);
        const double ann_drift = mean * 252.0 + 0.5 * 0.2 * 0.2;  // undo the Ito correction
        const double ann_vol = std::sqrt(ss / (n - 1)) * std::sqrt(252.0);
        CHECK(std::abs(ann_drift - 0.05) < 0.01);
        CHECK(std::abs(ann_vol - 0.2) < 0.005);
    }

    TEST_CASE("bull segments show positive trailing regime returns") {
        SynthConfig c;
        c.n_days = 252;
        c.assets = {"X"};
        c.seed = 21;
        c.regimes.push_back({126, {0.80}, {0.10}});
        c.regimes.push_back({126, {-0.80}, {0.10}});
        const auto r = to_returns(synth_market(c));
        std::vector<double> first_half(r.returns.col(0).data(), r.returns.col(0).data() + 125);
        std::vector<double> all(r.returns.col(0).data(), r.returns.col(0).data() + 251);
        CHECK(regime_return(first_half, 60) > 0.0);
        CHECK(regime_return(all, 60) < 0.0);
    }

    TEST_CASE("config validation") {
        auto c = toy_synth(100, 0.05, 0.2, 0);
        c.n_days = 99;
        CHECK_THROWS_AS(synth_market(c), ValidationError);
        auto c2 = toy_synth(100, 0.05, -0.1, 0);
        CHECK_THROWS_AS(synth_market(c2), ValidationError);
        SynthConfig c3 = toy_synth(100, 0.05, 0.2, 0);
        c3.correlation = 1.0;
        CHECK_THROWS_AS(synth_market(c3), ValidationError);
    }
}
