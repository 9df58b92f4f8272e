#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "trl/errors.hpp"
#include "trl/resilience.hpp"
#include "trl/rng.hpp"
#include "trl/synth.hpp"

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

RegionSeries series_of(std::vector<double> rates) {
    RegionSeries s;
    s.polygon_id = "t";
    s.county = "t";
    s.start = make_day(2021, 8, 25);
    s.rates = std::move(rates);
    s.z_scores.assign(s.rates.size(), 0.0);
    return s;
}

Dataset two_region_dataset() {
    // p_deep dips to 0.5 for days 4..8 with strong z; p_flat stays at 1.
    Dataset ds;
    ds.horizon = {make_day(2021, 8, 25), make_day(2021, 8, 25) + 36};
    RegionId deep{"p_deep", "Deep", "county_a"};
    RegionId flat{"p_flat", "Flat", "county_b"};
    ds.regions = {deep, flat};
    for (int d = 0; d < 37; ++d) {
        ActivityObservation a;
        a.date = ds.horizon.start + d;
        a.baseline_users = 100.0;

        a.polygon_id = "p_deep";
        a.crisis_users = (d >= 4 && d <= 8) ? 50 : 100;
        a.z_score = (d >= 4 && d <= 8) ? -3.0 : 0.0;
        ds.activity.push_back(a);

        a.polygon_id = "p_flat";
        a.crisis_users = 100;
        a.z_score = 0.0;
        ds.activity.push_back(a);
    }
    std::sort(ds.activity.begin(), ds.activity.end(),
              [](const ActivityObservation& x, const ActivityObservation& y) {
                  if (x.polygon_id != y.polygon_id) return x.polygon_id < y.polygon_id;
                  return x.date < y.date;
              });
    return ds;
}

}  // namespace

TEST_CASE("activity rate") {
    CHECK(activity_rate(80, 100) == 0.8);
    CHECK(activity_rate(100, 100) == 1.0);
    CHECK(code_of([] { activity_rate(37, 0); }) == ErrorCode::ZeroBaseline);
}

TEST_CASE("no disruption earns no loss") {
    const auto r = transient_loss(series_of(std::vector<double>(37, 1.0)));
    CHECK(r.trl == 0.0);
    CHECK(r.max_possible == 37.0);
    CHECK(r.resilience == 37.0);
    CHECK(r.pct_loss == 0.0);
}

TEST_CASE("rectangle arithmetic") {
    std::vector<double> rates(37, 1.0);
    for (int d = 0; d < 10; ++d) rates[d] = 0.5;
    const auto r = transient_loss(series_of(rates));
    CHECK(r.trl == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.resilience == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("published row arithmetic") {
    const auto r = resilience_from_trl("x", 12.88, 37.0);
    CHECK(std::abs(r.resilience - 24.12) < 0.005);
    CHECK(std::abs(r.pct_loss - 34.81) < 0.005);
}

TEST_CASE("rates above one earn nothing back") {
    std::vector<double> rates(37, 1.3);
    rates[5] = 0.6;
    const auto r = transient_loss(series_of(rates));
    CHECK(r.trl == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("total blackout saturates at the horizon") {
    const auto r = transient_loss(series_of(std::vector<double>(37, 0.0)));
    CHECK(r.trl == doctest::Approx(37.0).epsilon(1e-12));
    CHECK(r.resilience == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.pct_loss == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("day-sum equals fine-grid integration on random step curves") {
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> rates(37);
        for (auto& q : rates) q = rng.uniform(0.0, 1.4);
        const auto s = series_of(rates);
        CHECK(std::abs(transient_loss(s).trl - oracle_trl_series(s)) < 1e-9);
    }
}

TEST_CASE("build_series pulls rates from the dataset") {
    const Dataset ds = two_region_dataset();
    const RegionSeries s = build_series(ds, "p_deep");
    REQUIRE(s.rates.size() == 37);
    CHECK(s.county == "county_a");
    CHECK(s.rates[0] == 1.0);
    CHECK(s.rates[4] == 0.5);
    CHECK(s.rates[8] == 0.5);
    CHECK(s.rates[9] == 1.0);
    CHECK(transient_loss(s).trl == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(code_of([&] { build_series(ds, "absent"); }) == ErrorCode::UnknownRegion);
}

TEST_CASE("selection applies both thresholds") {
    const Dataset ds = two_region_dataset();
    SelectionThresholds th;
    th.drop_window = {ds.horizon.start + 4, ds.horizon.start + 11};

    const auto report = selection_report(ds, th);
    REQUIRE(report.size() == 2);
    const auto& deep = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    const auto& flat = report[0].polygon_id == "p_flat" ? report[0] : report[1];
    CHECK(deep.included);
    CHECK(deep.min_rate_in_window == 0.5);
    CHECK(deep.days_below_z_floor == 5);
    CHECK(!flat.included);
    CHECK(flat.exclusion_reason == "rate+z_days");

    CHECK(select_affected(ds, th) == std::vector<std::string>{"p_deep"});
}

TEST_CASE("selection distinguishes failure reasons") {
    // Shallow dip: rate 0.95 stays above the floor even with strong z days.
    Dataset ds = two_region_dataset();
    for (auto& a : ds.activity)
        if (a.polygon_id == "p_deep" && a.crisis_users == 50) a.crisis_users = 95;
    SelectionThresholds th;
    th.drop_window = {ds.horizon.start + 4, ds.horizon.start + 11};
    auto report = selection_report(ds, th);
    const auto& deep = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(!deep.included);
    CHECK(deep.exclusion_reason == "rate");

    // Deep dip but calm z: only the z criterion fails.
    Dataset dz = two_region_dataset();
    for (auto& a : dz.activity)
        if (a.polygon_id == "p_deep") a.z_score = 0.0;
    report = selection_report(dz, th);
    const auto& deep2 = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(!deep2.included);
    CHECK(deep2.exclusion_reason == "z_days");

    // One strong-z day is not enough: the rule needs at least two.
    Dataset d1 = two_region_dataset();
    for (auto& a : d1.activity)
        if (a.polygon_id == "p_deep") a.z_score = (a.date == d1.horizon.start + 4) ? -3.0 : 0.0;
    report = selection_report(d1, th);
    const auto& deep3 = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(!deep3.included);
    CHECK(deep3.days_below_z_floor == 1);
}

TEST_CASE("z days count over the whole horizon, not just the window") {
    Dataset ds = two_region_dataset();
    // Move the strong-z days far past the drop window.
    for (auto& a : ds.activity)
        if (a.polygon_id == "p_deep")
            a.z_score = (a.date >= ds.horizon.start + 20 && a.date <= ds.horizon.start + 22)
                            ? -3.0
                            : 0.0;
    SelectionThresholds th;
    th.drop_window = {ds.horizon.start + 4, ds.horizon.start + 11};
    const auto report = selection_report(ds, th);
    const auto& deep = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(deep.included);
    CHECK(deep.days_below_z_floor == 3);
}

TEST_CASE("drop window must sit inside the horizon") {
    const Dataset ds = two_region_dataset();
    SelectionThresholds th;
    th.drop_window = {ds.horizon.start + 35, ds.horizon.start + 42};
    CHECK(code_of([&] { selection_report(ds, th); }) == ErrorCode::WindowOutOfRange);
    th.drop_window = {ds.horizon.start - 1, ds.horizon.start + 6};
    CHECK(code_of([&] { selection_report(ds, th); }) == ErrorCode::WindowOutOfRange);
}

TEST_CASE("boundary values of the thresholds") {
    // Rate exactly at the floor is not "below": excluded.
    Dataset ds = two_region_dataset();
    for (auto& a : ds.activity)
        if (a.polygon_id == "p_deep" && a.crisis_users == 50) a.crisis_users = 90;
    SelectionThresholds th;
    th.drop_window = {ds.horizon.start + 4, ds.horizon.start + 11};
    auto report = selection_report(ds, th);
    const auto& deep = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(!deep.included);

    // z exactly at the floor does not count either.
    Dataset dz = two_region_dataset();
    for (auto& a : dz.activity)
        if (a.polygon_id == "p_deep" && a.z_score == -3.0) a.z_score = -1.82;
    report = selection_report(dz, th);
    const auto& deep2 = report[0].polygon_id == "p_deep" ? report[0] : report[1];
    CHECK(deep2.days_below_z_floor == 0);
}
