#pragma once

#include <cstdint>
#include <string>

namespace agripv {

struct CivilDate {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31
};

struct CivilDateTime {
    CivilDate date;
    int hour = 0;
    int minute = 0;
    int second = 0;
};

bool is_leap_year(int year);
int days_in_year(int year);
int day_of_year(const CivilDate& d);  // 1-based

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d);
CivilDate civil_from_days(std::int64_t z);

// A point in time: UTC seconds since the epoch plus the fixed UTC offset
// the timestamp was written with (display only; comparisons use unix_sec).
struct Instant {
    std::int64_t unix_sec = 0;
    int offset_min = 0;

    CivilDateTime local() const;
};

// Parses "YYYY-MM-DDTHH:MM[:SS](Z|+HH:MM|-HH:MM)". Throws DataError on
// malformed input; timestamps without an offset are rejected.
Instant parse_iso8601(const std::string& s);

std::string format_iso8601(const Instant& t);

} // namespace agripv
