#include "mar/dates.hpp"

#include <cstdio>

#include "mar/errors.hpp"

namespace mar {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[month - 1];
}

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("malformed date '" + text + "', expected YYYY-MM-DD");
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (text[i] < '0' || text[i] > '9')
            throw ParseError("malformed date '" + text + "', expected YYYY-MM-DD");
    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw ParseError("impossible date '" + text + "'");
    return d;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

namespace {

// Howard Hinnant's days-from-civil.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

}  // namespace

int weekday(const Date& d) {
    // days_from_civil(1970,1,1) == 0, a Thursday.
    long n = days_from_civil(d.year, d.month, d.day);
    return static_cast<int>(((n % 7) + 10) % 7);
}

bool is_weekend(const Date& d) {
    return weekday(d) >= 5;
}

Date next_day(const Date& d) {
    Date r = d;
    if (++r.day > days_in_month(r.year, r.month)) {
        r.day = 1;
        if (++r.month > 12) {
            r.month = 1;
            ++r.year;
        }
    }
    return r;
}

Date add_months(const Date& d, int months) {
    int total = (d.year * 12 + d.month - 1) + months;
    Date r;
    r.year = total / 12;
    r.month = total % 12 + 1;
    r.day = d.day;
    int cap = days_in_month(r.year, r.month);
    if (r.day > cap) r.day = cap;
    return r;
}

}  // namespace mar
