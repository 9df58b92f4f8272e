#pragma once

#include <vector>

#include "trl/data_model.hpp"

namespace trl {

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance on the mean-radius sphere. InvalidCoordinate for
// non-finite input or latitudes/longitudes outside range.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

// Min distance from a point to the sampled track points. EmptyPath.
double distance_to_path_km(double lat, double lon, const std::vector<HazardPathPoint>& path);

}  // namespace trl
