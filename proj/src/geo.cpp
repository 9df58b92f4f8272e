#include "trl/geo.hpp"

#include <algorithm>
#include <cmath>

#include "trl/errors.hpp"

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

namespace trl {

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    for (const double lat : {lat1, lat2})
        if (!std::isfinite(lat) || std::abs(lat) > 90.0)
            fail(ErrorCode::InvalidCoordinate, "latitude out of range");
    for (const double lon : {lon1, lon2})
        if (!std::isfinite(lon) || std::abs(lon) > 180.0)
            fail(ErrorCode::InvalidCoordinate, "longitude out of range");

    const double phi1 = lat1 * kDegToRad;
    const double phi2 = lat2 * kDegToRad;
    const double dphi = (lat2 - lat1) * kDegToRad;
    const double dlambda = (lon2 - lon1) * kDegToRad;

    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlambda / 2.0);
    double a = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    a = std::clamp(a, 0.0, 1.0);  // rounding can push antipodal pairs past 1
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(a));
}

double distance_to_path_km(double lat, double lon, const std::vector<HazardPathPoint>& path) {
    if (path.empty()) fail(ErrorCode::EmptyPath, "hazard path has no points");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : path) best = std::min(best, haversine_km(lat, lon, p.lat, p.lon));
    return best;
}

}  // namespace trl
