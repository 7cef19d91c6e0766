#include "agripv/timeutil.hpp"

#include <cctype>
#include <cstdio>

#include "agripv/common.hpp"

namespace agripv {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }

static int days_in_month(int year, int month) {
    static const int dm[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return dm[month - 1];
}

int day_of_year(const CivilDate& d) {
    int doy = d.day;
    for (int m = 1; m < d.month; ++m) doy += days_in_month(d.year, m);
    return doy;
}

// Howard Hinnant's algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

CivilDateTime Instant::local() const {
    std::int64_t t = unix_sec + static_cast<std::int64_t>(offset_min) * 60;
    std::int64_t days = t / 86400;
    std::int64_t sod = t % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    CivilDateTime out;
    out.date = civil_from_days(days);
    out.hour = static_cast<int>(sod / 3600);
    out.minute = static_cast<int>((sod % 3600) / 60);
    out.second = static_cast<int>(sod % 60);
    return out;
}

static bool parse_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

Instant parse_iso8601(const std::string& s) {
    auto fail = [&]() -> Instant { throw DataError("malformed ISO-8601 timestamp: '" + s + "'"); };

    int y, mo, d, h, mi, se = 0;
    if (!parse_int(s, 0, 4, y)) return fail();
    if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
        return fail();
    if (!parse_int(s, 5, 2, mo) || !parse_int(s, 8, 2, d) || !parse_int(s, 11, 2, h) ||
        !parse_int(s, 14, 2, mi))
        return fail();
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!parse_int(s, pos + 1, 2, se)) return fail();
        pos += 3;
    }
    if (pos >= s.size()) return fail();  // offset is mandatory

    int off_min = 0;
    if (s[pos] == 'Z') {
        if (pos + 1 != s.size()) return fail();
    } else if (s[pos] == '+' || s[pos] == '-') {
        int sign = s[pos] == '+' ? 1 : -1;
        int oh, om;
        if (pos + 6 != s.size() || !parse_int(s, pos + 1, 2, oh) || s[pos + 3] != ':' ||
            !parse_int(s, pos + 4, 2, om))
            return fail();
        off_min = sign * (oh * 60 + om);
    } else {
        return fail();
    }

    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) return fail();

    Instant t;
    t.offset_min = off_min;
    t.unix_sec = days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se -
                 static_cast<std::int64_t>(off_min) * 60;
    return t;
}

std::string format_iso8601(const Instant& t) {
    CivilDateTime c = t.local();
    char buf[40];
    int om = t.offset_min;
    char sign = om < 0 ? '-' : '+';
    if (om < 0) om = -om;
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", c.date.year,
                  c.date.month, c.date.day, c.hour, c.minute, c.second, sign, om / 60, om % 60);
    return buf;
}

} // namespace agripv
