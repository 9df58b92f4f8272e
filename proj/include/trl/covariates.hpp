#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trl/data_model.hpp"
#include "trl/resilience.hpp"

namespace trl {

// One modeling row per selected region; units are days (trl, restore_days),
// hours (road_hours), km (dist_km), USD (damage, income), percent (the rest).
struct CovariateRow {
    std::string polygon_id;
    std::string county;
    double trl = 0.0;  // > 0 for selected regions
    double road_hours = 0.0;
    double restore_days = 0.0;
    double damage = 0.0;
    double pct_pre2000 = 0.0;
    double dist_km = 0.0;
    double income = 0.0;
    double pct_black = 0.0;
    double pct_hispanic = 0.0;
};

// Maps an event coordinate to the polygon_id it falls in, or nothing.
using RegionLookup = std::function<std::optional<std::string>(double lat, double lon)>;

// Duration in days between the first sample with outage fraction >= threshold
// and the last sample above it; 0 when the threshold is never reached.
// EmptySeries when there are no observations.
double restoration_days(const std::vector<OutageObservation>& series, double threshold = 0.10);

struct RoadHoursResult {
    double hours = 0.0;
    std::int64_t skipped = 0;  // events the lookup could not place
};

// Sums disruption-category event durations clipped to the window for events
// mapping to the region. Open-ended events clamp to the window end.
RoadHoursResult road_hours(const std::vector<RoadEvent>& events, const std::string& polygon_id,
                           const DayRange& window, int utc_offset_sec,
                           const RegionLookup& lookup);

// Assigns coordinates to the nearest region center, or nothing when every
// center is farther than max_assign_km.
RegionLookup nearest_center_lookup(const Dataset& ds,
                                   double max_assign_km = std::numeric_limits<double>::infinity());

struct AssembleOptions {
    RegionLookup lookup;  // defaults to nearest_center_lookup(ds, max_assign_km)
    double max_assign_km = std::numeric_limits<double>::infinity();
};

struct AssembleReport {
    std::int64_t unmapped_road_events = 0;
};

// One CovariateRow per resilience result, in input order. MissingCounty when
// a region's county has no outage series.
std::vector<CovariateRow> assemble_rows(const Dataset& ds,
                                        const std::vector<ResilienceResult>& results,
                                        const AssembleOptions& opts = {},
                                        AssembleReport* report = nullptr);

struct Standardized {
    Eigen::MatrixXd values;
    Eigen::VectorXd means;
    Eigen::VectorXd stds;  // sample standard deviation, n - 1
};

// Columns to mean 0, sample sd 1. ConstantColumn names the offender.
Standardized standardize(const Eigen::MatrixXd& m,
                         const std::vector<std::string>* names = nullptr);

struct CollinearityDiagnostics {
    Eigen::MatrixXd pearson;  // correlation matrix, exact unit diagonal
    Eigen::VectorXd vif;
    double condition_number = 0.0;  // singular value ratio of standardized columns
};

// ConstantColumn, RankDeficient (names the most collinear columns).
CollinearityDiagnostics collinearity_diagnostics(const Eigen::MatrixXd& m,
                                                 const std::vector<std::string>* names = nullptr);

}  // namespace trl
