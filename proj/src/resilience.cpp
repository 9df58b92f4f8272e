#include "trl/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trl/errors.hpp"

namespace trl {

double activity_rate(double crisis_users, double baseline_users) {
    if (!(baseline_users > 0.0))
        fail(ErrorCode::ZeroBaseline, "baseline_users must be positive to form a rate");
    return crisis_users / baseline_users;
}

RegionSeries build_series(const Dataset& ds, const std::string& polygon_id) {
    const RegionId* region = ds.find_region(polygon_id);
    if (!region) fail(ErrorCode::UnknownRegion, "'" + polygon_id + "' is not in the dataset");

    const auto obs = ds.activity_for(polygon_id);
    if (static_cast<std::int64_t>(obs.size()) != ds.horizon.length())
        fail(ErrorCode::IncompleteSeries,
             "'" + polygon_id + "' has " + std::to_string(obs.size()) + " days, horizon needs " +
                 std::to_string(ds.horizon.length()));

    RegionSeries s;
    s.polygon_id = polygon_id;
    s.county = region->county;
    s.start = ds.horizon.start;
    s.rates.reserve(obs.size());
    s.z_scores.reserve(obs.size());
    for (const auto* o : obs) {
        s.rates.push_back(activity_rate(static_cast<double>(o->crisis_users), o->baseline_users));
        s.z_scores.push_back(o->z_score);
    }
    return s;
}

ResilienceResult resilience_from_trl(const std::string& polygon_id, double trl,
                                     double max_possible) {
    ResilienceResult r;
    r.polygon_id = polygon_id;
    r.trl = trl;
    r.max_possible = max_possible;
    r.resilience = max_possible - trl;
    r.pct_loss = max_possible > 0.0 ? 100.0 * trl / max_possible : 0.0;
    return r;
}

ResilienceResult transient_loss(const RegionSeries& series) {
    double trl = 0.0;
    for (const double rate : series.rates) trl += std::max(0.0, 1.0 - rate);
    return resilience_from_trl(series.polygon_id, trl,
                               static_cast<double>(series.rates.size()));
}

std::vector<SelectionRecord> selection_report(const Dataset& ds, const SelectionThresholds& th) {
    if (!ds.horizon.contains(th.drop_window.start) || !ds.horizon.contains(th.drop_window.end) ||
        th.drop_window.start > th.drop_window.end)
        fail(ErrorCode::WindowOutOfRange,
             "drop window " + format_day(th.drop_window.start) + ".." +
                 format_day(th.drop_window.end) + " not inside horizon " +
                 format_day(ds.horizon.start) + ".." + format_day(ds.horizon.end));

    std::vector<SelectionRecord> out;
    out.reserve(ds.regions.size());
    for (const auto& region : ds.regions) {
        const RegionSeries s = build_series(ds, region.polygon_id);

        SelectionRecord rec;
        rec.polygon_id = region.polygon_id;
        rec.min_rate_in_window = std::numeric_limits<double>::infinity();
        for (CalDay d = th.drop_window.start; d <= th.drop_window.end; ++d)
            rec.min_rate_in_window =
                std::min(rec.min_rate_in_window, s.rates[static_cast<std::size_t>(d - s.start)]);
        for (const double z : s.z_scores)
            if (z < th.z_floor) ++rec.days_below_z_floor;

        const bool rate_ok = rec.min_rate_in_window < th.rate_floor;
        const bool z_ok = rec.days_below_z_floor >= th.z_days_min;
        rec.included = rate_ok && z_ok;
        if (!rate_ok && !z_ok)
            rec.exclusion_reason = "rate+z_days";
        else if (!rate_ok)
            rec.exclusion_reason = "rate";
        else if (!z_ok)
            rec.exclusion_reason = "z_days";
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<std::string> select_affected(const Dataset& ds, const SelectionThresholds& th) {
    std::vector<std::string> ids;
    for (const auto& rec : selection_report(ds, th))
        if (rec.included) ids.push_back(rec.polygon_id);
    return ids;
}

}  // namespace trl
