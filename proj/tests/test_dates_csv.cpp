#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "trl/csv.hpp"
#include "trl/dates.hpp"
#include "trl/errors.hpp"
#include "trl/rng.hpp"

using namespace trl;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::BadParams;
}

}  // namespace

TEST_CASE("calendar day round trips") {
    CHECK(make_day(1970, 1, 1) == 0);
    CHECK(make_day(1970, 1, 2) == 1);
    CHECK(make_day(1969, 12, 31) == -1);
    CHECK(make_day(2021, 8, 29) == 18868);

    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const CalDay d = rng.uniform_int(-200000, 200000);
        int y, m, dd;
        civil_from_day(d, y, m, dd);
        CHECK(make_day(y, m, dd) == d);
        CHECK(parse_day(format_day(d)) == d);
    }
}

TEST_CASE("date parsing is strict") {
    CHECK(parse_day("2021-08-29") == 18868);
    CHECK(parse_day("2020-02-29") == make_day(2020, 2, 29));  // leap day
    CHECK(code_of([] { parse_day("2021-02-29"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("2021-13-01"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("2021-00-10"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("2021-04-31"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("21-04-30"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("2021/04/30"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day("2021-04-30 "); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_day(""); }) == ErrorCode::SchemaError);
}

TEST_CASE("utc offsets") {
    CHECK(parse_offset("Z") == 0);
    CHECK(parse_offset("+00:00") == 0);
    CHECK(parse_offset("-05:00") == -18000);
    CHECK(parse_offset("+05:30") == 19800);
    CHECK(format_offset(0) == "+00:00");
    CHECK(format_offset(-18000) == "-05:00");
    CHECK(format_offset(19800) == "+05:30");
    CHECK(code_of([] { parse_offset("-5:00"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_offset("+0500"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_offset("+19:00"); }) == ErrorCode::SchemaError);
}

TEST_CASE("instants") {
    CHECK(parse_instant("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_instant("1970-01-01T00:00:00+00:00") == 0);
    // Local wall time 00:00 in UTC-5 is 05:00 UTC.
    CHECK(parse_instant("1970-01-01T00:00:00-05:00") == 18000);
    CHECK(parse_instant("2021-08-29T12:30:45Z") ==
          18868 * 86400 + 12 * 3600 + 30 * 60 + 45);
    CHECK(format_instant(0, 0) == "1970-01-01T00:00:00+00:00");
    CHECK(format_instant(18000, -18000) == "1970-01-01T00:00:00-05:00");

    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const Instant t = rng.uniform_int(-4102444800LL, 4102444800LL);
        const int off = static_cast<int>(rng.uniform_int(-14, 14)) * 3600;
        CHECK(parse_instant(format_instant(t, off)) == t);
    }
    CHECK(code_of([] { parse_instant("2021-08-29T12:30:45"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_instant("2021-08-29 12:30:45Z"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_instant("2021-08-29T25:00:00Z"); }) == ErrorCode::SchemaError);
}

TEST_CASE("day_start applies the offset") {
    CHECK(day_start(0, 0) == 0);
    // Midnight local in UTC-5 happens 5 h after midnight UTC.
    CHECK(day_start(18868, -18000) == 18868 * 86400 + 18000);
    CHECK(day_start(18868, 3600) == 18868 * 86400 - 3600);
}

TEST_CASE("day range") {
    DayRange r{10, 12};
    CHECK(r.length() == 3);
    CHECK(r.contains(10));
    CHECK(r.contains(12));
    CHECK(!r.contains(13));
    CHECK(!r.contains(9));
}

TEST_CASE("csv parses quotes, commas and CRLF") {
    const auto t = parse_csv("a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\n2,,z\n", "mem");
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "x,y", "he said \"hi\""});
    CHECK(t.rows[1] == std::vector<std::string>{"2", "", "z"});
    CHECK(t.col("b") == 1);
    CHECK(t.col("missing") == -1);
    CHECK(t.require_col("c") == 2);
    CHECK(code_of([&] { t.require_col("missing"); }) == ErrorCode::SchemaError);
}

TEST_CASE("csv rejects ragged rows") {
    CHECK(code_of([] { parse_csv("a,b\n1\n", "mem"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_csv("a,b\n1,2,3\n", "mem"); }) == ErrorCode::SchemaError);
}

TEST_CASE("csv field escaping round trips") {
    Rng rng(13);
    const std::string alphabet = "ab,\"\n x";
    for (int i = 0; i < 500; ++i) {
        std::string field;
        const auto len = rng.uniform_int(0, 12);
        for (std::int64_t k = 0; k < len; ++k)
            field.push_back(alphabet[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size()) - 1))]);
        const auto t = parse_csv("h\n" + csv_escape(field) + "\n", "mem");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0][0] == field);
    }
}

TEST_CASE("doubles print shortest round-trip form") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "-0");
    CHECK(format_double(12.88) == "12.88");

    Rng rng(14);
    for (int i = 0; i < 5000; ++i) {
        const double v = rng.normal(0.0, 1e4);
        CHECK(parse_double(format_double(v), "t") == v);
    }
    CHECK(code_of([] { parse_double("1.2.3", "t"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_double("", "t"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_double("4x", "t"); }) == ErrorCode::SchemaError);
    CHECK(parse_int("-42", "t") == -42);
    CHECK(code_of([] { parse_int("4.2", "t"); }) == ErrorCode::SchemaError);
}

TEST_CASE("missing csv file") {
    CHECK(code_of([] { read_csv("/nonexistent/nope.csv"); }) == ErrorCode::MissingFile);
}
