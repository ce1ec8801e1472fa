#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fewscast {

/// Calendar date parsed from "YYYY-MM-DD".
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Throws DataError on malformed input or an impossible calendar date.
    static Date parse(std::string_view text);
    [[nodiscard]] std::string str() const;
};

/// A calendar month, stored as a count of months since year 0.
///
/// Months are the time index of every series in the pipeline; arithmetic is
/// plain integer arithmetic on the month count.
class Month {
public:
    constexpr Month() = default;
    constexpr Month(int year, int month) : index_(year * 12 + (month - 1)) {}
    constexpr explicit Month(const Date& d) : Month(d.year, d.month) {}

    static constexpr Month from_index(std::int32_t index) {
        Month m;
        m.index_ = index;
        return m;
    }
    /// Accepts "YYYY-MM" or "YYYY-MM-DD" (the day is ignored).
    static Month parse(std::string_view text);

    [[nodiscard]] constexpr std::int32_t index() const { return index_; }
    [[nodiscard]] constexpr int year() const { return index_ / 12; }
    [[nodiscard]] constexpr int month() const { return index_ % 12 + 1; }
    [[nodiscard]] std::string str() const;

    constexpr Month operator+(int n) const { return from_index(index_ + n); }
    constexpr Month operator-(int n) const { return from_index(index_ - n); }
    constexpr int operator-(Month other) const { return index_ - other.index_; }
    constexpr Month& operator++() {
        ++index_;
        return *this;
    }

    constexpr auto operator<=>(const Month&) const = default;

private:
    std::int32_t index_ = 0;
};

/// Closed date interval [first, last].
struct DateWindow {
    Date first;
    Date last;

    [[nodiscard]] bool contains(const Date& d) const { return first <= d && d <= last; }
    [[nodiscard]] bool empty() const { return last < first; }
};

}  // namespace fewscast
