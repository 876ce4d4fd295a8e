#pragma once

#include <compare>
#include <string>

namespace mar {

// Calendar date, ISO-8601 text form YYYY-MM-DD.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

// Parses YYYY-MM-DD; throws ParseError on malformed or impossible dates.
Date parse_date(const std::string& text);

std::string to_string(const Date& d);

bool is_leap_year(int year);
int days_in_month(int year, int month);

// 0 = Monday ... 6 = Sunday.
int weekday(const Date& d);

bool is_weekend(const Date& d);

Date next_day(const Date& d);

// Adds calendar months, clamping the day to the target month's length.
Date add_months(const Date& d, int months);

}  // namespace mar
