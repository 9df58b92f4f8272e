#pragma once

#include <string>
#include <vector>

#include "trl/data_model.hpp"

namespace trl {

// Daily activity rates for one region across the full horizon.
struct RegionSeries {
    std::string polygon_id;
    std::string county;
    CalDay start = 0;
    std::vector<double> rates;     // rates[i] belongs to day start + i
    std::vector<double> z_scores;  // same indexing
};

struct ResilienceResult {
    std::string polygon_id;
    double trl = 0.0;           // cumulative transient loss, day-units
    double max_possible = 0.0;  // horizon length in days
    double resilience = 0.0;    // max_possible - trl
    double pct_loss = 0.0;      // 100 * trl / max_possible
};

struct SelectionThresholds {
    double rate_floor = 0.90;  // region qualifies when min window rate < floor
    DayRange drop_window;      // inclusive, must lie within the horizon
    double z_floor = -1.82;    // days with z < floor count toward z_days_min
    int z_days_min = 2;
};

struct SelectionRecord {
    std::string polygon_id;
    bool included = false;
    double min_rate_in_window = 0.0;
    int days_below_z_floor = 0;
    std::string exclusion_reason;  // "", "rate", "z_days" or "rate+z_days"
};

// crisis_users / baseline_users; ZeroBaseline when baseline_users <= 0.
double activity_rate(double crisis_users, double baseline_users);

// UnknownRegion, IncompleteSeries, ZeroBaseline.
RegionSeries build_series(const Dataset& ds, const std::string& polygon_id);

// Loss is integrated with day-long left rectangles: each day contributes
// max(0, 1 - rate). Rates above 1 never earn credit back.
ResilienceResult transient_loss(const RegionSeries& series);

ResilienceResult resilience_from_trl(const std::string& polygon_id, double trl,
                                     double max_possible);

// One record per region in the dataset. WindowOutOfRange when the drop
// window is not fully inside the horizon.
std::vector<SelectionRecord> selection_report(const Dataset& ds, const SelectionThresholds& th);

// polygon_ids of included regions, sorted.
std::vector<std::string> select_affected(const Dataset& ds, const SelectionThresholds& th);

}  // namespace trl
