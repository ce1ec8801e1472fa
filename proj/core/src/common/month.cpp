#include "fewscast/common/month.hpp"

#include <charconv>
#include <cstdio>

#include "fewscast/common/error.hpp"

namespace fewscast {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("malformed date '" + std::string(whole) + "'");
    }
    return value;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

}  // namespace

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    Date d{parse_int(text.substr(0, 4), text), parse_int(text.substr(5, 2), text),
           parse_int(text.substr(8, 2), text)};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw DataError("invalid calendar date '" + std::string(text) + "'");
    }
    return d;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Month Month::parse(std::string_view text) {
    if (text.size() == 10) return Month(Date::parse(text));
    if (text.size() != 7 || text[4] != '-') {
        throw DataError("malformed month '" + std::string(text) + "', expected YYYY-MM");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    if (m < 1 || m > 12) throw DataError("invalid month '" + std::string(text) + "'");
    return Month(y, m);
}

std::string Month::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
}

}  // namespace fewscast
