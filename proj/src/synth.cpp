#include "trl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "trl/errors.hpp"
#include "trl/geo.hpp"
#include "trl/rng.hpp"

namespace trl {

RegionSeries gen_curve(const CurveParams& params, int horizon_days, CalDay start_day,
                       const std::string& polygon_id) {
    if (horizon_days < 1) fail(ErrorCode::BadParams, "horizon must be at least one day");
    if (!(params.depth >= 0.0 && params.depth <= 1.0))
        fail(ErrorCode::BadParams, "depth must lie in [0, 1]");
    if (!(params.noise_sd >= 0.0)) fail(ErrorCode::BadParams, "noise_sd must be nonnegative");
    if (params.drop_day < 0 || params.recovery_days < 0 ||
        params.drop_day + params.recovery_days > horizon_days - 1)
        fail(ErrorCode::BadParams, "dip does not fit inside the horizon");

    Rng rng(params.seed);
    RegionSeries s;
    s.polygon_id = polygon_id;
    s.county = polygon_id;
    s.start = start_day;
    s.rates.reserve(static_cast<std::size_t>(horizon_days));
    s.z_scores.reserve(static_cast<std::size_t>(horizon_days));

    for (int d = 0; d < horizon_days; ++d) {
        double ramp;
        if (d < params.drop_day)
            ramp = static_cast<double>(d) / static_cast<double>(params.drop_day);
        else if (d == params.drop_day)
            ramp = 1.0;
        else if (d <= params.drop_day + params.recovery_days)
            ramp = 1.0 - static_cast<double>(d - params.drop_day) /
                             static_cast<double>(params.recovery_days);
        else
            ramp = 0.0;

        double rate = 1.0 - params.depth * ramp;
        if (params.noise_sd > 0.0) rate += rng.normal(0.0, params.noise_sd);
        rate = std::max(0.0, rate);
        s.rates.push_back(rate);
        s.z_scores.push_back(std::clamp(16.0 * (rate - 1.0), -4.0, 4.0));
    }
    return s;
}

double oracle_trl(const std::function<double(double)>& q_of_t, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) fail(ErrorCode::BadParams, "need dt > 0 and t_end >= 0");
    const auto n = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-12));

    double sum = 0.0, comp = 0.0;  // Kahan compensation
    for (std::int64_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t >= t_end) break;
        const double term = std::max(0.0, 1.0 - q_of_t(t)) * dt;
        const double yk = term - comp;
        const double next = sum + yk;
        comp = (next - sum) - yk;
        sum = next;
    }
    return sum;
}

double oracle_trl_series(const RegionSeries& series, double dt) {
    const auto days = static_cast<double>(series.rates.size());
    return oracle_trl(
        [&](double t) {
            auto idx = static_cast<std::size_t>(std::floor(t));
            if (idx >= series.rates.size()) idx = series.rates.size() - 1;
            return series.rates[idx];
        },
        days, dt);
}

GlmmSample gen_glmm_sample(const GlmmScenario& sc) {
    const auto p = static_cast<Eigen::Index>(sc.beta_true.size()) - 1;
    if (p < 1) fail(ErrorCode::BadParams, "beta_true needs an intercept and at least one slope");
    if (sc.n_groups < 1 || sc.n_per_group < 1)
        fail(ErrorCode::BadParams, "need at least one group and one row per group");
    if (!(sc.sigma_b_true >= 0.0)) fail(ErrorCode::BadParams, "sigma_b_true must be nonnegative");
    if (!(sc.shape_true > 0.0)) fail(ErrorCode::BadParams, "shape_true must be positive");

    Rng rng(sc.seed);
    const Eigen::Index n = static_cast<Eigen::Index>(sc.n_groups) * sc.n_per_group;

    GlmmSample sample;
    sample.b_true.resize(sc.n_groups);
    sample.group_names.reserve(static_cast<std::size_t>(sc.n_groups));
    for (int g = 0; g < sc.n_groups; ++g) {
        sample.b_true(g) = sc.sigma_b_true > 0.0 ? rng.normal(0.0, sc.sigma_b_true) : 0.0;
        char buf[16];
        std::snprintf(buf, sizeof buf, "g%03d", g);
        sample.group_names.emplace_back(buf);
    }

    sample.y.resize(n);
    sample.predictors.resize(n, p);
    sample.group_index.reserve(static_cast<std::size_t>(n));
    Eigen::Index row = 0;
    for (int g = 0; g < sc.n_groups; ++g) {
        for (int k = 0; k < sc.n_per_group; ++k, ++row) {
            double eta = sc.beta_true(0) + sample.b_true(g);
            for (Eigen::Index j = 0; j < p; ++j) {
                const double x = rng.normal();
                sample.predictors(row, j) = x;
                eta += sc.beta_true(j + 1) * x;
            }
            sample.y(row) = rng.gamma_mean(sc.shape_true, std::exp(eta));
            sample.group_index.push_back(g);
        }
    }
    return sample;
}

std::vector<CovariateRow> gen_glmm_data(const GlmmScenario& sc) {
    if (sc.beta_true.size() != 9)
        fail(ErrorCode::BadParams, "covariate rows need an intercept plus exactly 8 slopes");
    const GlmmSample sample = gen_glmm_sample(sc);

    std::vector<CovariateRow> rows;
    rows.reserve(static_cast<std::size_t>(sample.y.size()));
    for (Eigen::Index i = 0; i < sample.y.size(); ++i) {
        CovariateRow row;
        char buf[24];
        std::snprintf(buf, sizeof buf, "sim_%04d", static_cast<int>(i));
        row.polygon_id = buf;
        row.county = sample.group_names[static_cast<std::size_t>(sample.group_index[i])];
        row.trl = sample.y(i);
        row.road_hours = sample.predictors(i, 0);
        row.restore_days = sample.predictors(i, 1);
        row.damage = sample.predictors(i, 2);
        row.pct_pre2000 = sample.predictors(i, 3);
        row.dist_km = sample.predictors(i, 4);
        row.income = sample.predictors(i, 5);
        row.pct_black = sample.predictors(i, 6);
        row.pct_hispanic = sample.predictors(i, 7);
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd oracle_irls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int max_iter,
                            double tol) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (!(y(i) > 0.0))
            fail(ErrorCode::NonPositiveResponse, "oracle needs a positive response");
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        fail(ErrorCode::RankDeficientDesign, "oracle design is numerically rank deficient");

    const Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::VectorXd mu = y;
    Eigen::VectorXd eta = y.array().log().matrix();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::VectorXd z = (eta.array() + y.array() / mu.array() - 1.0).matrix();
        const Eigen::VectorXd beta_new = xtx.llt().solve(X.transpose() * z);
        const double delta = (beta_new - beta).norm() / (1.0 + beta_new.norm());
        beta = beta_new;
        eta = (X * beta).array().min(300.0).max(-300.0).matrix();
        mu = eta.array().exp().matrix();
        if (iter > 0 && delta < tol) return beta;
    }
    fail(ErrorCode::NoConvergence, "oracle IRLS did not converge");
}

Eigen::VectorXd oracle_vif(const Eigen::MatrixXd& columns) {
    const Eigen::Index n = columns.rows(), p = columns.cols();
    Eigen::VectorXd vif(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::MatrixXd W(n, p);  // intercept plus the other columns
        W.col(0).setOnes();
        Eigen::Index c = 1;
        for (Eigen::Index k = 0; k < p; ++k)
            if (k != j) W.col(c++) = columns.col(k);

        const Eigen::VectorXd target = columns.col(j);
        const Eigen::VectorXd coef =
            (W.transpose() * W).ldlt().solve(W.transpose() * target);
        const double ss_res = (target - W * coef).squaredNorm();
        const double mean = target.mean();
        const double ss_tot = (target.array() - mean).square().sum();
        const double r2 = 1.0 - ss_res / ss_tot;
        vif(j) = 1.0 / (1.0 - r2);
    }
    return vif;
}

namespace {

std::string zero_pad(const char* prefix, int value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02d", prefix, value);
    return buf;
}

}  // namespace

SimulatedData gen_dataset(const SimulateParams& params) {
    if (params.groups < 1 || params.groups > 99 || params.per_group < 1 || params.per_group > 99)
        fail(ErrorCode::BadParams, "groups and per_group must lie in [1, 99]");
    if (params.horizon.start > params.horizon.end)
        fail(ErrorCode::BadParams, "horizon start after end");
    if (!params.horizon.contains(params.landfall))
        fail(ErrorCode::BadParams, "landfall must fall inside the horizon");

    const int offset = parse_offset(params.timezone);
    const auto horizon_days = static_cast<int>(params.horizon.length());
    const int landfall_idx = static_cast<int>(params.landfall - params.horizon.start);
    const Instant landfall_instant = day_start(params.landfall, offset) + 12 * 3600;

    Rng rng(params.seed);
    SimulatedData out;
    Dataset& ds = out.dataset;
    ds.horizon = params.horizon;
    ds.utc_offset_sec = offset;
    ds.timezone = params.timezone;

    // Storm track: 6-hourly points marching north through the county grid.
    {
        double lat = 28.1 + rng.uniform(-0.2, 0.2);
        double lon = -90.6 + rng.uniform(-0.3, 0.3);
        Instant t = day_start(params.landfall, offset) - 36 * 3600;
        for (int i = 0; i < 28; ++i) {
            ds.hazard_path.push_back({t, lat, lon});
            lat += 0.45 + rng.uniform(0.0, 0.15);
            lon += rng.uniform(-0.10, 0.06);
            t += 6 * 3600;
        }
    }

    struct County {
        std::string name;
        double lat, lon;
        double severity;
    };
    std::vector<County> counties;
    counties.reserve(static_cast<std::size_t>(params.groups));
    for (int g = 0; g < params.groups; ++g) {
        County c;
        c.name = zero_pad("parish_", g);
        c.lat = 29.0 + 0.34 * (g % 6) + rng.uniform(-0.05, 0.05);
        c.lon = -91.6 + 0.42 * (g / 6) + rng.uniform(-0.05, 0.05);
        const double d = distance_to_path_km(c.lat, c.lon, ds.hazard_path);
        c.severity = std::clamp(1.25 * std::exp(-d / 90.0) + rng.uniform(-0.15, 0.25), 0.0, 1.0);
        counties.push_back(std::move(c));
    }

    std::ostringstream boundaries;
    boundaries << "{\"type\":\"FeatureCollection\",\"features\":[";
    bool first_feature = true;

    for (int g = 0; g < params.groups; ++g) {
        const County& county = counties[static_cast<std::size_t>(g)];
        for (int k = 1; k <= params.per_group; ++k) {
            const std::string poly = zero_pad("pg", g) + "_" + zero_pad("d", k);
            const std::string name = "District " + std::to_string(k);
            ds.regions.push_back({poly, name, county.name});

            RegionAttributes attr;
            attr.polygon_id = poly;
            attr.center_lat = county.lat + rng.uniform(-0.09, 0.09);
            attr.center_lon = county.lon + rng.uniform(-0.09, 0.09);
            const double severity = std::clamp(county.severity + rng.uniform(-0.12, 0.12), 0.0, 1.0);

            // activity curve tied to severity
            CurveParams cp;
            cp.depth = severity * rng.uniform(0.55, 0.95);
            cp.drop_day = landfall_idx + static_cast<int>(rng.uniform_int(0, 1));
            cp.recovery_days = static_cast<int>(std::lround(severity * rng.uniform(8.0, 26.0)));
            cp.recovery_days =
                std::min(cp.recovery_days, horizon_days - 1 - cp.drop_day);
            cp.noise_sd = 0.01;
            cp.seed = rng.uniform_int(0, static_cast<std::int64_t>(1) << 62);
            const RegionSeries curve = gen_curve(cp, horizon_days, params.horizon.start, poly);

            const double base = std::exp(rng.uniform(std::log(800.0), std::log(30000.0)));
            for (int d = 0; d < horizon_days; ++d) {
                ActivityObservation obs;
                obs.polygon_id = poly;
                obs.date = params.horizon.start + d;
                obs.baseline_users =
                    std::max(1.0, std::round(base * (1.0 + rng.uniform(-0.03, 0.03))));
                obs.crisis_users = std::max<std::int64_t>(
                    0, std::llround(curve.rates[static_cast<std::size_t>(d)] * obs.baseline_users));
                const double rate = static_cast<double>(obs.crisis_users) / obs.baseline_users;
                obs.z_score =
                    std::clamp(16.0 * (rate - 1.0) + rng.normal(0.0, 0.15), -4.0, 4.0);
                ds.activity.push_back(std::move(obs));
            }

            attr.median_income =
                std::round(std::exp(rng.uniform(std::log(28000.0), std::log(95000.0))));
            attr.pct_black = rng.uniform(2.0, 85.0);
            attr.pct_hispanic = rng.uniform(1.0, 40.0);
            attr.pct_pre2000_houses = rng.uniform(35.0, 95.0);
            attr.property_damage = std::round(severity * rng.uniform(0.5, 1.5) * 30000.0);
            ds.attributes.emplace(poly, attr);

            if (!first_feature) boundaries << ',';
            first_feature = false;
            const double la = attr.center_lat, lo = attr.center_lon;
            boundaries << "{\"type\":\"Feature\",\"properties\":{\"polygon_id\":\"" << poly
                       << "\",\"name\":\"" << name << "\",\"county\":\"" << county.name
                       << "\"},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[[";
            const double half = 0.04;
            boundaries << '[' << lo - half << ',' << la - half << "],[" << lo + half << ','
                       << la - half << "],[" << lo + half << ',' << la + half << "],[" << lo - half
                       << ',' << la + half << "],[" << lo - half << ',' << la - half << "]]]}}";
        }

        // hourly outage trapezoid per county
        {
            const std::int64_t total = 2000 + rng.uniform_int(0, 48000);
            const double t_up = static_cast<double>(landfall_instant) -
                                rng.uniform(6.0, 18.0) * 3600.0;
            const double ramp_s = rng.uniform(6.0, 24.0) * 3600.0;
            const double peak = std::clamp(county.severity * rng.uniform(0.75, 1.0), 0.0, 1.0);
            const double hold_s = rng.uniform(12.0, 72.0) * 3600.0;
            const double decay_s = std::max(3600.0, county.severity * rng.uniform(200.0, 500.0) * 3600.0);
            const Instant first = day_start(params.horizon.start, offset);
            const Instant last = day_start(params.horizon.end + 1, offset);
            for (Instant t = first; t < last; t += 3600) {
                const auto x = static_cast<double>(t);
                double frac = 0.0;
                if (x >= t_up && x < t_up + ramp_s)
                    frac = peak * (x - t_up) / ramp_s;
                else if (x >= t_up + ramp_s && x < t_up + ramp_s + hold_s)
                    frac = peak;
                else if (x >= t_up + ramp_s + hold_s)
                    frac = std::max(0.0, peak * (1.0 - (x - t_up - ramp_s - hold_s) / decay_s));
                OutageObservation obs;
                obs.county = county.name;
                obs.timestamp = t;
                obs.customers_total = total;
                obs.customers_out =
                    std::clamp<std::int64_t>(std::llround(frac * static_cast<double>(total)), 0, total);
                ds.outages_by_county[county.name].push_back(obs);
            }
        }

        // road events pinned to region centers
        {
            const auto n_events =
                rng.uniform_int(0, 3) + static_cast<std::int64_t>(county.severity * 10.0);
            for (std::int64_t e = 0; e < n_events; ++e) {
                RoadEvent ev;
                ev.event_id = county.name + "_ev" + std::to_string(e);
                const auto r = rng.uniform_int(1, params.per_group);
                const auto& attr =
                    ds.attributes.at(zero_pad("pg", g) + "_" + zero_pad("d", static_cast<int>(r)));
                ev.lat = attr.center_lat;
                ev.lon = attr.center_lon;
                ev.start = landfall_instant +
                           static_cast<Instant>(std::llround(rng.uniform(-24.0, 96.0))) * 3600;
                const double dur_h = rng.uniform(4.0, 240.0);
                const bool open_ended = rng.uniform() < 0.1;
                if (!open_ended)
                    ev.end = ev.start + static_cast<Instant>(std::llround(dur_h * 3600.0));
                static const RoadEventCategory cats[7] = {
                    RoadEventCategory::closure,       RoadEventCategory::flooding,
                    RoadEventCategory::debris,        RoadEventCategory::signal_outage,
                    RoadEventCategory::damage,        RoadEventCategory::other,
                    RoadEventCategory::closure,
                };
                ev.category = cats[rng.uniform_int(0, 6)];
                ds.road_events.push_back(std::move(ev));
            }
        }
    }
    boundaries << "]}";
    out.boundaries_geojson = boundaries.str();

    out.manifest.activity = "activity.csv";
    out.manifest.outages = "outages.csv";
    out.manifest.road_events = "road_events.csv";
    out.manifest.hazard_path = "hazard_path.csv";
    out.manifest.attributes = "attributes.csv";
    out.manifest.horizon = params.horizon;
    out.manifest.timezone = params.timezone;
    out.manifest.utc_offset_sec = offset;
    return out;
}

R2 oracle_r2(const Eigen::VectorXd& linpred, double sigma2_group, double shape) {
    const auto n = static_cast<std::size_t>(linpred.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += linpred(static_cast<Eigen::Index>(i));
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = linpred(static_cast<Eigen::Index>(i)) - mean;
        ss += d * d;
    }
    const double var_f = ss / static_cast<double>(n - 1);
    const double var_d = std::log(1.0 + 1.0 / shape);
    R2 r2;
    r2.marginal = var_f / (var_f + sigma2_group + var_d);
    r2.conditional = (var_f + sigma2_group) / (var_f + sigma2_group + var_d);
    return r2;
}

}  // namespace trl
