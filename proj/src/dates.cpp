#include "trl/dates.hpp"

#include <cctype>
#include <cstdio>

#include "trl/errors.hpp"

namespace trl {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

int digits(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int lens[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lens[m - 1];
}

std::string contextualize(const std::string& what, const std::string& s, const std::string& where) {
    std::string msg = what + " '" + s + "'";
    if (!where.empty()) msg += " (" + where + ")";
    return msg;
}

}  // namespace

// Civil-from-days and days-from-civil follow the classic era decomposition
// of the proleptic Gregorian calendar (400-year eras of 146097 days).
CalDay make_day(int year, int month, int day) {
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_day(CalDay d, int& year, int& month, int& day) {
    d += 719468;
    const std::int64_t era = (d >= 0 ? d : d - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(d - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    year = static_cast<int>(y + (month <= 2));
}

CalDay parse_day(const std::string& s, const std::string& where) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !all_digits(s, 0, 4) ||
        !all_digits(s, 5, 2) || !all_digits(s, 8, 2))
        fail(ErrorCode::SchemaError, contextualize("bad date", s, where));
    const int y = digits(s, 0, 4), m = digits(s, 5, 2), d = digits(s, 8, 2);
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        fail(ErrorCode::SchemaError, contextualize("bad date", s, where));
    return make_day(y, m, d);
}

std::string format_day(CalDay d) {
    int y, m, dd;
    civil_from_day(d, y, m, dd);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, dd);
    return buf;
}

int parse_offset(const std::string& s, const std::string& where) {
    if (s == "Z" || s == "z") return 0;
    if (s.size() != 6 || (s[0] != '+' && s[0] != '-') || s[3] != ':' || !all_digits(s, 1, 2) ||
        !all_digits(s, 4, 2))
        fail(ErrorCode::SchemaError, contextualize("bad UTC offset", s, where));
    const int h = digits(s, 1, 2), m = digits(s, 4, 2);
    if (h > 18 || m > 59) fail(ErrorCode::SchemaError, contextualize("bad UTC offset", s, where));
    const int sec = h * 3600 + m * 60;
    return s[0] == '-' ? -sec : sec;
}

std::string format_offset(int offset_sec) {
    if (offset_sec == 0) return "+00:00";
    const char sign = offset_sec < 0 ? '-' : '+';
    const int a = offset_sec < 0 ? -offset_sec : offset_sec;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, a / 3600, (a % 3600) / 60);
    return buf;
}

Instant parse_instant(const std::string& s, const std::string& where) {
    if (s.size() < 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
        !all_digits(s, 11, 2) || !all_digits(s, 14, 2) || !all_digits(s, 17, 2))
        fail(ErrorCode::SchemaError, contextualize("bad timestamp", s, where));
    const CalDay day = parse_day(s.substr(0, 10), where);
    const int hh = digits(s, 11, 2), mi = digits(s, 14, 2), ss = digits(s, 17, 2);
    if (hh > 23 || mi > 59 || ss > 60)
        fail(ErrorCode::SchemaError, contextualize("bad timestamp", s, where));
    const int offset = parse_offset(s.substr(19), where);
    return day * 86400 + hh * 3600 + mi * 60 + ss - offset;
}

std::string format_instant(Instant t, int offset_sec) {
    const Instant local = t + offset_sec;
    CalDay day = local / 86400;
    Instant tod = local % 86400;
    if (tod < 0) {
        tod += 86400;
        day -= 1;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d%s", format_day(day).c_str(),
                  static_cast<int>(tod / 3600), static_cast<int>((tod % 3600) / 60),
                  static_cast<int>(tod % 60), format_offset(offset_sec).c_str());
    return buf;
}

Instant day_start(CalDay d, int offset_sec) { return d * 86400 - offset_sec; }

}  // namespace trl
