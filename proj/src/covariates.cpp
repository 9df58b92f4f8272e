#include "trl/covariates.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "trl/errors.hpp"
#include "trl/geo.hpp"

namespace trl {

double restoration_days(const std::vector<OutageObservation>& series, double threshold) {
    if (series.empty()) fail(ErrorCode::EmptySeries, "outage series has no observations");

    std::optional<Instant> t_start, t_end;
    for (const auto& obs : series) {
        const double f =
            static_cast<double>(obs.customers_out) / static_cast<double>(obs.customers_total);
        if (!t_start && f >= threshold) t_start = obs.timestamp;
        if (f > threshold) t_end = obs.timestamp;
    }
    if (!t_start || !t_end || *t_end <= *t_start) return 0.0;
    return static_cast<double>(*t_end - *t_start) / 86400.0;
}

RoadHoursResult road_hours(const std::vector<RoadEvent>& events, const std::string& polygon_id,
                           const DayRange& window, int utc_offset_sec,
                           const RegionLookup& lookup) {
    const Instant w0 = day_start(window.start, utc_offset_sec);
    const Instant w1 = day_start(window.end + 1, utc_offset_sec);

    RoadHoursResult result;
    for (const auto& ev : events) {
        if (ev.category == RoadEventCategory::other) continue;
        const auto mapped = lookup(ev.lat, ev.lon);
        if (!mapped) {
            ++result.skipped;
            continue;
        }
        if (*mapped != polygon_id) continue;
        const Instant start = std::clamp(ev.start, w0, w1);
        const Instant end = std::clamp(ev.end.value_or(w1), w0, w1);
        if (end > start) result.hours += static_cast<double>(end - start) / 3600.0;
    }
    return result;
}

RegionLookup nearest_center_lookup(const Dataset& ds, double max_assign_km) {
    struct Center {
        std::string polygon_id;
        double lat, lon;
    };
    auto centers = std::make_shared<std::vector<Center>>();
    centers->reserve(ds.regions.size());
    for (const auto& region : ds.regions) {
        const auto& a = ds.attributes_for(region.polygon_id);
        centers->push_back({region.polygon_id, a.center_lat, a.center_lon});
    }
    return [centers, max_assign_km](double lat, double lon) -> std::optional<std::string> {
        const Center* best = nullptr;
        double best_km = max_assign_km;
        for (const auto& c : *centers) {
            const double d = haversine_km(lat, lon, c.lat, c.lon);
            if (d < best_km || (best == nullptr && d <= best_km)) {
                best = &c;
                best_km = d;
            }
        }
        if (!best) return std::nullopt;
        return best->polygon_id;
    };
}

std::vector<CovariateRow> assemble_rows(const Dataset& ds,
                                        const std::vector<ResilienceResult>& results,
                                        const AssembleOptions& opts, AssembleReport* report) {
    const RegionLookup lookup =
        opts.lookup ? opts.lookup : nearest_center_lookup(ds, opts.max_assign_km);

    if (report) {
        report->unmapped_road_events = 0;
        for (const auto& ev : ds.road_events) {
            if (ev.category == RoadEventCategory::other) continue;
            if (!lookup(ev.lat, ev.lon)) ++report->unmapped_road_events;
        }
    }

    std::vector<CovariateRow> rows;
    rows.reserve(results.size());
    for (const auto& res : results) {
        const RegionId* region = ds.find_region(res.polygon_id);
        if (!region)
            fail(ErrorCode::UnknownRegion, "'" + res.polygon_id + "' is not in the dataset");
        if (!(res.trl > 0.0))
            fail(ErrorCode::BadParams,
                 "'" + res.polygon_id + "' has non-positive loss; only affected regions model");

        const auto outages = ds.outages_by_county.find(region->county);
        if (outages == ds.outages_by_county.end())
            fail(ErrorCode::MissingCounty,
                 "no outage series for county '" + region->county + "'");

        const auto& attr = ds.attributes_for(res.polygon_id);

        CovariateRow row;
        row.polygon_id = res.polygon_id;
        row.county = region->county;
        row.trl = res.trl;
        row.road_hours =
            road_hours(ds.road_events, res.polygon_id, ds.horizon, ds.utc_offset_sec, lookup)
                .hours;
        row.restore_days = restoration_days(outages->second);
        row.damage = attr.property_damage;
        row.pct_pre2000 = attr.pct_pre2000_houses;
        row.dist_km = distance_to_path_km(attr.center_lat, attr.center_lon, ds.hazard_path);
        row.income = attr.median_income;
        row.pct_black = attr.pct_black;
        row.pct_hispanic = attr.pct_hispanic;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string column_label(const std::vector<std::string>* names, Eigen::Index j) {
    if (names && j < static_cast<Eigen::Index>(names->size()))
        return (*names)[static_cast<std::size_t>(j)];
    return "column " + std::to_string(j);
}

}  // namespace

Standardized standardize(const Eigen::MatrixXd& m, const std::vector<std::string>* names) {
    const Eigen::Index n = m.rows(), p = m.cols();
    if (n < 2) fail(ErrorCode::BadParams, "standardize needs at least 2 rows");

    Standardized out;
    out.values.resize(n, p);
    out.means.resize(p);
    out.stds.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = m.col(j).mean();
        const double ss = (m.col(j).array() - mean).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd < 1e-12 * (1.0 + std::abs(mean)))
            fail(ErrorCode::ConstantColumn,
                 column_label(names, j) + " is constant and cannot be standardized");
        out.means[j] = mean;
        out.stds[j] = sd;
        out.values.col(j) = (m.col(j).array() - mean) / sd;
    }
    return out;
}

CollinearityDiagnostics collinearity_diagnostics(const Eigen::MatrixXd& m,
                                                 const std::vector<std::string>* names) {
    const Standardized z = standardize(m, names);
    const Eigen::Index n = m.rows(), p = m.cols();

    CollinearityDiagnostics d;
    d.pearson = (z.values.transpose() * z.values) / static_cast<double>(n - 1);
    d.pearson.diagonal().setOnes();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z.values, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(p - 1);
    if (smin < 1e-10 * smax) {
        // the smallest right singular vector points at the collinear columns
        const Eigen::VectorXd v = svd.matrixV().col(p - 1).cwiseAbs();
        const double top = v.maxCoeff();
        std::string culprits;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (v(j) >= 0.5 * top) {
                if (!culprits.empty()) culprits += ", ";
                culprits += column_label(names, j);
            }
        }
        fail(ErrorCode::RankDeficient, "collinear columns: " + culprits);
    }
    d.condition_number = smax / smin;

    const Eigen::MatrixXd r_inv =
        d.pearson.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    d.vif = r_inv.diagonal();
    return d;
}

}  // namespace trl
