#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trl/dates.hpp"

namespace trl {

struct RegionId {
    std::string polygon_id;  // unique key
    std::string name;
    std::string county;
};

struct ActivityObservation {
    std::string polygon_id;
    CalDay date = 0;
    double baseline_users = 0.0;      // >= 0
    std::int64_t crisis_users = 0;    // >= 0
    double z_score = 0.0;             // clamped to [-4, 4] at load
    bool gap_filled = false;
};

struct OutageObservation {
    std::string county;
    Instant timestamp = 0;
    std::int64_t customers_total = 0;  // > 0
    std::int64_t customers_out = 0;    // in [0, customers_total]
};

enum class RoadEventCategory { closure, flooding, debris, signal_outage, damage, other };

const char* to_string(RoadEventCategory c);
RoadEventCategory road_event_category_from_string(const std::string& s, const std::string& where);

struct RoadEvent {
    std::string event_id;
    double lat = 0.0;
    double lon = 0.0;
    Instant start = 0;
    std::optional<Instant> end;  // when present, >= start
    RoadEventCategory category = RoadEventCategory::other;
};

struct HazardPathPoint {
    Instant timestamp = 0;
    double lat = 0.0;
    double lon = 0.0;
};

struct RegionAttributes {
    std::string polygon_id;
    double center_lat = 0.0;
    double center_lon = 0.0;
    double median_income = 0.0;
    double pct_black = 0.0;           // [0, 100]
    double pct_hispanic = 0.0;        // [0, 100]
    double pct_pre2000_houses = 0.0;  // [0, 100]
    double property_damage = 0.0;     // >= 0; empty cell means 0
};

struct RejectedRegion {
    std::string polygon_id;
    std::string reason;  // "leading_gap" or "too_many_gaps"
    std::int64_t missing_days = 0;
};

struct LoadReport {
    std::int64_t activity_rows_outside_horizon = 0;
    std::map<std::string, std::int64_t> gap_filled_days;  // polygon_id -> filled count
    std::vector<RejectedRegion> rejected_regions;
};

struct Manifest {
    std::string activity;
    std::string outages;
    std::string road_events;
    std::string hazard_path;
    std::string attributes;
    DayRange horizon;
    std::string timezone = "+00:00";  // fixed UTC offset
    int utc_offset_sec = 0;
};

// Validated, gap-filled, horizon-complete snapshot of one event's inputs.
// Immutable after load; downstream modules rely on the invariants instead of
// re-validating.
struct Dataset {
    DayRange horizon;
    int utc_offset_sec = 0;
    std::string timezone = "+00:00";
    std::vector<RegionId> regions;              // sorted by polygon_id
    std::vector<ActivityObservation> activity;  // sorted by (polygon_id, date), complete per region
    std::map<std::string, std::vector<OutageObservation>> outages_by_county;  // time-sorted
    std::vector<RoadEvent> road_events;         // file order
    std::vector<HazardPathPoint> hazard_path;   // time-sorted
    std::map<std::string, RegionAttributes> attributes;  // by polygon_id
    LoadReport report;

    const RegionId* find_region(const std::string& polygon_id) const;
    // Post-load every region has attributes; raises ReferentialError otherwise.
    const RegionAttributes& attributes_for(const std::string& polygon_id) const;
    // Pointers into `activity`, date-ascending, horizon-complete.
    std::vector<const ActivityObservation*> activity_for(const std::string& polygon_id) const;
};

Manifest read_manifest(const std::string& path);
Dataset load_inputs(const Manifest& manifest);
Dataset load_inputs(const std::string& manifest_path);

// Serializers; load_inputs on their output reproduces the dataset.
std::string activity_csv(const Dataset& ds);
std::string outages_csv(const Dataset& ds);
std::string road_events_csv(const Dataset& ds);
std::string hazard_path_csv(const Dataset& ds);
std::string attributes_csv(const Dataset& ds);
std::string manifest_json(const Manifest& m);

}  // namespace trl
