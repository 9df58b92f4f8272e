#include "trl/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trl/csv.hpp"
#include "trl/errors.hpp"

namespace trl {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(RoadEventCategory c) {
    switch (c) {
        case RoadEventCategory::closure: return "closure";
        case RoadEventCategory::flooding: return "flooding";
        case RoadEventCategory::debris: return "debris";
        case RoadEventCategory::signal_outage: return "signal_outage";
        case RoadEventCategory::damage: return "damage";
        case RoadEventCategory::other: return "other";
    }
    return "other";
}

RoadEventCategory road_event_category_from_string(const std::string& s, const std::string& where) {
    if (s == "closure") return RoadEventCategory::closure;
    if (s == "flooding") return RoadEventCategory::flooding;
    if (s == "debris") return RoadEventCategory::debris;
    if (s == "signal_outage") return RoadEventCategory::signal_outage;
    if (s == "damage") return RoadEventCategory::damage;
    if (s == "other") return RoadEventCategory::other;
    fail(ErrorCode::SchemaError, where + ": unknown road event category '" + s + "'");
}

const RegionId* Dataset::find_region(const std::string& polygon_id) const {
    const auto it = std::lower_bound(
        regions.begin(), regions.end(), polygon_id,
        [](const RegionId& r, const std::string& key) { return r.polygon_id < key; });
    if (it == regions.end() || it->polygon_id != polygon_id) return nullptr;
    return &*it;
}

const RegionAttributes& Dataset::attributes_for(const std::string& polygon_id) const {
    const auto it = attributes.find(polygon_id);
    if (it == attributes.end())
        fail(ErrorCode::ReferentialError, "no attributes for region '" + polygon_id + "'");
    return it->second;
}

std::vector<const ActivityObservation*> Dataset::activity_for(const std::string& polygon_id) const {
    const auto lo = std::lower_bound(
        activity.begin(), activity.end(), polygon_id,
        [](const ActivityObservation& a, const std::string& key) { return a.polygon_id < key; });
    std::vector<const ActivityObservation*> out;
    for (auto it = lo; it != activity.end() && it->polygon_id == polygon_id; ++it)
        out.push_back(&*it);
    return out;
}

namespace {

std::string row_ctx(const std::string& file, std::size_t row_index) {
    return file + " row " + std::to_string(row_index + 2);  // header is line 1
}

double finite_double(const std::string& s, const std::string& where) {
    const double v = parse_double(s, where);
    if (!std::isfinite(v)) fail(ErrorCode::SchemaError, where + ": non-finite value '" + s + "'");
    return v;
}

std::string resolve(const fs::path& base_dir, const std::string& rel) {
    fs::path p(rel);
    if (p.is_absolute()) return p.string();
    return (base_dir / p).string();
}

std::string require_string(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        fail(ErrorCode::SchemaError, where + ": manifest needs string field '" + key + "'");
    return j[key].get<std::string>();
}

void load_activity(const Manifest& m, Dataset& ds, std::vector<std::string>& all_polys) {
    const CsvTable t = read_csv(m.activity);
    const int c_poly = t.require_col("polygon_id");
    const int c_name = t.require_col("name");
    const int c_county = t.require_col("county");
    const int c_date = t.require_col("date");
    const int c_base = t.require_col("baseline_users");
    const int c_crisis = t.require_col("crisis_users");
    const int c_z = t.require_col("z_score");

    std::map<std::string, RegionId> identities;
    std::set<std::pair<std::string, CalDay>> seen;
    std::vector<ActivityObservation> rows;
    rows.reserve(t.rows.size());

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string ctx = row_ctx(m.activity, i);
        ActivityObservation obs;
        obs.polygon_id = r[c_poly];
        if (obs.polygon_id.empty()) fail(ErrorCode::SchemaError, ctx + ": empty polygon_id");
        obs.date = parse_day(r[c_date], ctx);
        obs.baseline_users = finite_double(r[c_base], ctx);
        if (obs.baseline_users < 0.0)
            fail(ErrorCode::SchemaError, ctx + ": negative baseline_users");
        obs.crisis_users = parse_int(r[c_crisis], ctx);
        if (obs.crisis_users < 0) fail(ErrorCode::SchemaError, ctx + ": negative crisis_users");
        obs.z_score = std::clamp(finite_double(r[c_z], ctx), -4.0, 4.0);

        RegionId id{obs.polygon_id, r[c_name], r[c_county]};
        const auto [it, inserted] = identities.emplace(obs.polygon_id, id);
        if (!inserted && (it->second.name != id.name || it->second.county != id.county))
            fail(ErrorCode::SchemaError,
                 ctx + ": region '" + obs.polygon_id + "' changes name or county");

        if (!ds.horizon.contains(obs.date)) {
            ++ds.report.activity_rows_outside_horizon;
            continue;
        }
        if (!seen.emplace(obs.polygon_id, obs.date).second)
            fail(ErrorCode::DuplicateKey,
                 ctx + ": duplicate activity for '" + obs.polygon_id + "' on " +
                     format_day(obs.date));
        rows.push_back(std::move(obs));
    }

    std::sort(rows.begin(), rows.end(), [](const ActivityObservation& a, const ActivityObservation& b) {
        if (a.polygon_id != b.polygon_id) return a.polygon_id < b.polygon_id;
        return a.date < b.date;
    });

    // Forward-fill interior gaps; reject regions missing their first horizon
    // day (nothing to carry forward) or more than 20% of days.
    const std::int64_t horizon_len = ds.horizon.length();
    const auto max_missing = static_cast<std::int64_t>(0.2 * static_cast<double>(horizon_len));

    std::set<std::string> rejected;
    std::vector<ActivityObservation> filled;
    filled.reserve(rows.size());
    std::size_t i = 0;
    while (i < rows.size()) {
        const std::string& poly = rows[i].polygon_id;
        std::size_t j = i;
        while (j < rows.size() && rows[j].polygon_id == poly) ++j;

        const std::int64_t present = static_cast<std::int64_t>(j - i);
        const std::int64_t missing = horizon_len - present;
        const bool leading_gap = rows[i].date != ds.horizon.start;
        if (leading_gap || missing > max_missing) {
            ds.report.rejected_regions.push_back(
                {poly, leading_gap ? "leading_gap" : "too_many_gaps", missing});
            rejected.insert(poly);
            i = j;
            continue;
        }

        std::size_t k = i;
        ActivityObservation last = rows[i];
        for (CalDay d = ds.horizon.start; d <= ds.horizon.end; ++d) {
            if (k < j && rows[k].date == d) {
                filled.push_back(rows[k]);
                last = rows[k];
                ++k;
            } else {
                ActivityObservation copy = last;
                copy.date = d;
                copy.gap_filled = true;
                filled.push_back(copy);
                ++ds.report.gap_filled_days[poly];
            }
        }
        i = j;
    }

    // Regions whose rows all fell outside the horizon never reach the fill
    // loop; every horizon day is missing for them.
    std::set<std::string> covered;
    for (const auto& obs : filled) covered.insert(obs.polygon_id);
    for (const auto& [poly, id] : identities) {
        if (!covered.count(poly) && !rejected.count(poly)) {
            ds.report.rejected_regions.push_back({poly, "too_many_gaps", horizon_len});
            rejected.insert(poly);
        }
    }
    std::sort(ds.report.rejected_regions.begin(), ds.report.rejected_regions.end(),
              [](const RejectedRegion& a, const RejectedRegion& b) {
                  return a.polygon_id < b.polygon_id;
              });

    ds.activity = std::move(filled);
    ds.regions.reserve(identities.size());
    for (const auto& [poly, id] : identities) {
        all_polys.push_back(poly);
        if (!rejected.count(poly)) ds.regions.push_back(id);
    }
}

void load_outages(const Manifest& m, Dataset& ds) {
    const CsvTable t = read_csv(m.outages);
    const int c_county = t.require_col("county");
    const int c_ts = t.require_col("timestamp");
    const int c_total = t.require_col("customers_total");
    const int c_out = t.require_col("customers_out");

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string ctx = row_ctx(m.outages, i);
        OutageObservation obs;
        obs.county = r[c_county];
        if (obs.county.empty()) fail(ErrorCode::SchemaError, ctx + ": empty county");
        obs.timestamp = parse_instant(r[c_ts], ctx);
        obs.customers_total = parse_int(r[c_total], ctx);
        obs.customers_out = parse_int(r[c_out], ctx);
        if (obs.customers_total <= 0)
            fail(ErrorCode::SchemaError, ctx + ": customers_total must be positive");
        if (obs.customers_out < 0 || obs.customers_out > obs.customers_total)
            fail(ErrorCode::SchemaError, ctx + ": customers_out outside [0, customers_total]");
        ds.outages_by_county[obs.county].push_back(obs);
    }

    for (auto& [county, series] : ds.outages_by_county) {
        std::sort(series.begin(), series.end(),
                  [](const OutageObservation& a, const OutageObservation& b) {
                      return a.timestamp < b.timestamp;
                  });
        for (std::size_t i = 1; i < series.size(); ++i)
            if (series[i].timestamp == series[i - 1].timestamp)
                fail(ErrorCode::DuplicateKey,
                     m.outages + ": duplicate outage timestamp for county '" + county + "' at " +
                         format_instant(series[i].timestamp, ds.utc_offset_sec));
    }
}

void load_road_events(const Manifest& m, Dataset& ds) {
    const CsvTable t = read_csv(m.road_events);
    const int c_id = t.require_col("event_id");
    const int c_lat = t.require_col("lat");
    const int c_lon = t.require_col("lon");
    const int c_start = t.require_col("start");
    const int c_end = t.require_col("end");
    const int c_cat = t.require_col("category");

    std::set<std::string> ids;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string ctx = row_ctx(m.road_events, i);
        RoadEvent ev;
        ev.event_id = r[c_id];
        if (ev.event_id.empty()) fail(ErrorCode::SchemaError, ctx + ": empty event_id");
        if (!ids.insert(ev.event_id).second)
            fail(ErrorCode::DuplicateKey, ctx + ": duplicate event_id '" + ev.event_id + "'");
        ev.lat = finite_double(r[c_lat], ctx);
        ev.lon = finite_double(r[c_lon], ctx);
        if (std::abs(ev.lat) > 90.0 || std::abs(ev.lon) > 180.0)
            fail(ErrorCode::SchemaError, ctx + ": coordinate out of range");
        ev.start = parse_instant(r[c_start], ctx);
        if (!r[c_end].empty()) {
            ev.end = parse_instant(r[c_end], ctx);
            if (*ev.end < ev.start) fail(ErrorCode::SchemaError, ctx + ": end precedes start");
        }
        ev.category = road_event_category_from_string(r[c_cat], ctx);
        ds.road_events.push_back(std::move(ev));
    }
}

void load_hazard_path(const Manifest& m, Dataset& ds) {
    const CsvTable t = read_csv(m.hazard_path);
    const int c_ts = t.require_col("timestamp");
    const int c_lat = t.require_col("lat");
    const int c_lon = t.require_col("lon");

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string ctx = row_ctx(m.hazard_path, i);
        HazardPathPoint p;
        p.timestamp = parse_instant(r[c_ts], ctx);
        p.lat = finite_double(r[c_lat], ctx);
        p.lon = finite_double(r[c_lon], ctx);
        if (std::abs(p.lat) > 90.0 || std::abs(p.lon) > 180.0)
            fail(ErrorCode::SchemaError, ctx + ": coordinate out of range");
        ds.hazard_path.push_back(p);
    }
    std::sort(ds.hazard_path.begin(), ds.hazard_path.end(),
              [](const HazardPathPoint& a, const HazardPathPoint& b) {
                  return a.timestamp < b.timestamp;
              });
}

void load_attributes(const Manifest& m, Dataset& ds) {
    const CsvTable t = read_csv(m.attributes);
    const int c_poly = t.require_col("polygon_id");
    const int c_lat = t.require_col("center_lat");
    const int c_lon = t.require_col("center_lon");
    const int c_income = t.require_col("median_income");
    const int c_black = t.require_col("pct_black");
    const int c_hisp = t.require_col("pct_hispanic");
    const int c_pre = t.require_col("pct_pre2000_houses");
    const int c_damage = t.require_col("property_damage");

    auto pct = [&](const std::string& s, const std::string& ctx, const char* what) {
        const double v = finite_double(s, ctx);
        if (v < 0.0 || v > 100.0)
            fail(ErrorCode::SchemaError, ctx + ": " + what + " outside [0, 100]");
        return v;
    };

    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string ctx = row_ctx(m.attributes, i);
        RegionAttributes a;
        a.polygon_id = r[c_poly];
        if (a.polygon_id.empty()) fail(ErrorCode::SchemaError, ctx + ": empty polygon_id");
        a.center_lat = finite_double(r[c_lat], ctx);
        a.center_lon = finite_double(r[c_lon], ctx);
        if (std::abs(a.center_lat) > 90.0 || std::abs(a.center_lon) > 180.0)
            fail(ErrorCode::SchemaError, ctx + ": coordinate out of range");
        a.median_income = finite_double(r[c_income], ctx);
        a.pct_black = pct(r[c_black], ctx, "pct_black");
        a.pct_hispanic = pct(r[c_hisp], ctx, "pct_hispanic");
        a.pct_pre2000_houses = pct(r[c_pre], ctx, "pct_pre2000_houses");
        a.property_damage = r[c_damage].empty() ? 0.0 : finite_double(r[c_damage], ctx);
        if (a.property_damage < 0.0)
            fail(ErrorCode::SchemaError, ctx + ": negative property_damage");
        if (!ds.attributes.emplace(a.polygon_id, a).second)
            fail(ErrorCode::DuplicateKey, ctx + ": duplicate polygon_id '" + a.polygon_id + "'");
    }
}

}  // namespace

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::MissingFile, "cannot open manifest '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SchemaError, path + ": " + e.what());
    }

    const fs::path base = fs::path(path).parent_path();
    Manifest m;
    m.activity = resolve(base, require_string(j, "activity", path));
    m.outages = resolve(base, require_string(j, "outages", path));
    m.road_events = resolve(base, require_string(j, "road_events", path));
    m.hazard_path = resolve(base, require_string(j, "hazard_path", path));
    m.attributes = resolve(base, require_string(j, "attributes", path));

    if (!j.contains("horizon") || !j["horizon"].is_object())
        fail(ErrorCode::SchemaError, path + ": manifest needs object field 'horizon'");
    m.horizon.start = parse_day(require_string(j["horizon"], "start", path), path);
    m.horizon.end = parse_day(require_string(j["horizon"], "end", path), path);
    if (m.horizon.start > m.horizon.end)
        fail(ErrorCode::EmptyHorizon, path + ": horizon start after end");

    if (j.contains("timezone")) m.timezone = require_string(j, "timezone", path);
    m.utc_offset_sec = parse_offset(m.timezone, path);
    return m;
}

Dataset load_inputs(const Manifest& manifest) {
    Dataset ds;
    ds.horizon = manifest.horizon;
    ds.utc_offset_sec = manifest.utc_offset_sec;
    ds.timezone = manifest.timezone;

    std::vector<std::string> all_polys;
    load_activity(manifest, ds, all_polys);
    load_outages(manifest, ds);
    load_road_events(manifest, ds);
    load_hazard_path(manifest, ds);
    load_attributes(manifest, ds);

    // Every region the activity file references needs attributes, even ones
    // the gap policy rejected.
    for (const auto& poly : all_polys)
        if (!ds.attributes.count(poly))
            fail(ErrorCode::ReferentialError,
                 manifest.attributes + ": no attributes for region '" + poly + "'");
    return ds;
}

Dataset load_inputs(const std::string& manifest_path) {
    return load_inputs(read_manifest(manifest_path));
}

std::string activity_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "polygon_id,name,county,date,baseline_users,crisis_users,z_score\n";
    for (const auto& region : ds.regions) {
        for (const auto* obs : ds.activity_for(region.polygon_id)) {
            out << csv_escape(region.polygon_id) << ',' << csv_escape(region.name) << ','
                << csv_escape(region.county) << ',' << format_day(obs->date) << ','
                << format_double(obs->baseline_users) << ',' << obs->crisis_users << ','
                << format_double(obs->z_score) << '\n';
        }
    }
    return out.str();
}

std::string outages_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "county,timestamp,customers_total,customers_out\n";
    for (const auto& [county, series] : ds.outages_by_county) {
        for (const auto& obs : series) {
            out << csv_escape(county) << ',' << format_instant(obs.timestamp, ds.utc_offset_sec)
                << ',' << obs.customers_total << ',' << obs.customers_out << '\n';
        }
    }
    return out.str();
}

std::string road_events_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "event_id,lat,lon,start,end,category\n";
    for (const auto& ev : ds.road_events) {
        out << csv_escape(ev.event_id) << ',' << format_double(ev.lat) << ','
            << format_double(ev.lon) << ',' << format_instant(ev.start, ds.utc_offset_sec) << ',';
        if (ev.end) out << format_instant(*ev.end, ds.utc_offset_sec);
        out << ',' << to_string(ev.category) << '\n';
    }
    return out.str();
}

std::string hazard_path_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "timestamp,lat,lon\n";
    for (const auto& p : ds.hazard_path)
        out << format_instant(p.timestamp, ds.utc_offset_sec) << ',' << format_double(p.lat) << ','
            << format_double(p.lon) << '\n';
    return out.str();
}

std::string attributes_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "polygon_id,center_lat,center_lon,median_income,pct_black,pct_hispanic,"
           "pct_pre2000_houses,property_damage\n";
    for (const auto& [poly, a] : ds.attributes) {
        out << csv_escape(poly) << ',' << format_double(a.center_lat) << ','
            << format_double(a.center_lon) << ',' << format_double(a.median_income) << ','
            << format_double(a.pct_black) << ',' << format_double(a.pct_hispanic) << ','
            << format_double(a.pct_pre2000_houses) << ',' << format_double(a.property_damage)
            << '\n';
    }
    return out.str();
}

std::string manifest_json(const Manifest& m) {
    auto base_name = [](const std::string& p) { return fs::path(p).filename().string(); };
    ordered_json j;
    j["activity"] = base_name(m.activity);
    j["outages"] = base_name(m.outages);
    j["road_events"] = base_name(m.road_events);
    j["hazard_path"] = base_name(m.hazard_path);
    j["attributes"] = base_name(m.attributes);
    j["horizon"] = {{"start", format_day(m.horizon.start)}, {"end", format_day(m.horizon.end)}};
    j["timezone"] = m.timezone;
    return j.dump(2) + "\n";
}

}  // namespace trl
