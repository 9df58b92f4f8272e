#pragma once

#include <cstdint>
#include <string>

namespace trl {

// Calendar day as a count of days since 1970-01-01 (proleptic Gregorian).
using CalDay = std::int64_t;

// Instant as seconds since 1970-01-01T00:00:00Z.
using Instant = std::int64_t;

CalDay make_day(int year, int month, int day);
void civil_from_day(CalDay d, int& year, int& month, int& day);

// "YYYY-MM-DD", strictly; raises SchemaError otherwise.
CalDay parse_day(const std::string& s, const std::string& where = "");
std::string format_day(CalDay d);

// Fixed UTC offset in seconds east of UTC: "Z", "+HH:MM" or "-HH:MM".
int parse_offset(const std::string& s, const std::string& where = "");
std::string format_offset(int offset_sec);

// "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM".
Instant parse_instant(const std::string& s, const std::string& where = "");
std::string format_instant(Instant t, int offset_sec);

// Local midnight opening calendar day d in a fixed-offset zone.
Instant day_start(CalDay d, int offset_sec);

// Inclusive span of calendar days.
struct DayRange {
    CalDay start = 0;
    CalDay end = 0;

    std::int64_t length() const { return end - start + 1; }
    bool contains(CalDay d) const { return d >= start && d <= end; }
};

}  // namespace trl
