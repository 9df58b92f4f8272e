#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "trl/errors.hpp"
#include "trl/geo.hpp"
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

TEST_CASE("frozen reference distances") {
    // One degree along the equator: 2*pi*r/360.
    CHECK(std::abs(haversine_km(0, 0, 0, 1) - 111.1949) < 1e-3);
    // Antipodal poles: pi*r.
    CHECK(std::abs(haversine_km(90, 0, -90, 0) - 20015.087) < 1e-2);
    // Half circumference between antipodes on the equator too.
    CHECK(std::abs(haversine_km(0, 0, 0, 180) - 20015.087) < 1e-2);
    CHECK(haversine_km(29.95, -90.07, 29.95, -90.07) == 0.0);
}

TEST_CASE("symmetry, zero and bounds on random pairs") {
    Rng rng(31);
    const double half_circumference = 20015.087;
    for (int i = 0; i < 10000; ++i) {
        const double la1 = rng.uniform(-90.0, 90.0), lo1 = rng.uniform(-180.0, 180.0);
        const double la2 = rng.uniform(-90.0, 90.0), lo2 = rng.uniform(-180.0, 180.0);
        const double d12 = haversine_km(la1, lo1, la2, lo2);
        const double d21 = haversine_km(la2, lo2, la1, lo1);
        CHECK(std::abs(d12 - d21) <= 1e-9);
        CHECK(d12 >= 0.0);
        CHECK(d12 <= half_circumference + 1e-6);
        CHECK(haversine_km(la1, lo1, la1, lo1) == 0.0);
    }
}

TEST_CASE("near-antipodal points stay finite") {
    // The haversine argument can round above 1 here without a clamp.
    for (double eps : {0.0, 1e-9, 1e-7, 1e-5}) {
        const double d = haversine_km(eps, 0.0, -eps, 180.0);
        CHECK(std::isfinite(d));
        CHECK(d <= 20015.087 + 1e-6);
        CHECK(d >= 20014.0);
    }
}

TEST_CASE("coordinate validation") {
    CHECK(code_of([] { haversine_km(91, 0, 0, 0); }) == ErrorCode::InvalidCoordinate);
    CHECK(code_of([] { haversine_km(0, 181, 0, 0); }) == ErrorCode::InvalidCoordinate);
    CHECK(code_of([] { haversine_km(0, 0, -91, 0); }) == ErrorCode::InvalidCoordinate);
    CHECK(code_of([] { haversine_km(0, 0, 0, -181); }) == ErrorCode::InvalidCoordinate);
    const double nan = std::nan("");
    CHECK(code_of([&] { haversine_km(nan, 0, 0, 0); }) == ErrorCode::InvalidCoordinate);
}

TEST_CASE("distance to a sampled path") {
    std::vector<HazardPathPoint> path{{0, 29.0, -90.0}, {1, 29.5, -90.3}, {2, 30.0, -90.6}};

    // A point on the path has distance zero.
    CHECK(distance_to_path_km(29.5, -90.3, path) == 0.0);

    // Single-point path degenerates to plain haversine.
    std::vector<HazardPathPoint> one{{0, 29.0, -90.0}};
    CHECK(distance_to_path_km(31.2, -92.1, one) == haversine_km(31.2, -92.1, 29.0, -90.0));

    // Multi-point path takes the brute-force minimum.
    const double lat = 29.9, lon = -89.7;
    double want = haversine_km(lat, lon, path[0].lat, path[0].lon);
    for (const auto& p : path) want = std::min(want, haversine_km(lat, lon, p.lat, p.lon));
    CHECK(distance_to_path_km(lat, lon, path) == want);

    CHECK(code_of([] { distance_to_path_km(29.0, -90.0, {}); }) == ErrorCode::EmptyPath);
}

TEST_CASE("randomized path minimum matches exhaustive search") {
    Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        std::vector<HazardPathPoint> path;
        const auto n = rng.uniform_int(1, 30);
        for (std::int64_t k = 0; k < n; ++k)
            path.push_back({k, rng.uniform(25.0, 35.0), rng.uniform(-95.0, -85.0)});
        const double lat = rng.uniform(25.0, 35.0), lon = rng.uniform(-95.0, -85.0);
        double want = std::numeric_limits<double>::infinity();
        for (const auto& p : path) want = std::min(want, haversine_km(lat, lon, p.lat, p.lon));
        CHECK(distance_to_path_km(lat, lon, path) == want);
    }
}
