#include "trl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trl/covariates.hpp"
#include "trl/csv.hpp"
#include "trl/data_model.hpp"
#include "trl/synth.hpp"

namespace trl {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::MissingFile:
        case ErrorCode::SchemaError:
        case ErrorCode::DuplicateKey:
        case ErrorCode::ReferentialError:
        case ErrorCode::EmptyHorizon:
            return 3;
        case ErrorCode::ZeroBaseline:
        case ErrorCode::UnknownRegion:
        case ErrorCode::IncompleteSeries:
        case ErrorCode::WindowOutOfRange:
        case ErrorCode::InvalidCoordinate:
        case ErrorCode::EmptyPath:
        case ErrorCode::EmptySeries:
        case ErrorCode::MissingCounty:
        case ErrorCode::ConstantColumn:
        case ErrorCode::RankDeficient:
        case ErrorCode::ZeroTotalVariance:
        case ErrorCode::BadParams:
            return 4;
        case ErrorCode::SingleGroup:
            return 5;
        case ErrorCode::NonPositiveResponse:
        case ErrorCode::RankDeficientDesign:
        case ErrorCode::NoConvergence:
            return 6;
    }
    return 1;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::MissingFile, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::MissingFile, "short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

namespace {

std::string two_dp(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string out_path(const RunConfig& cfg, const char* name) {
    return (fs::path(cfg.out_dir) / name).string();
}

struct Pipeline {
    Dataset ds;
    SelectionThresholds thresholds;
    std::vector<SelectionRecord> selection;
    std::vector<ResilienceResult> results;  // included regions, highest loss first
};

Pipeline run_pipeline(const RunConfig& cfg) {
    Pipeline p;
    p.ds = load_inputs(cfg.manifest_path);

    const CalDay landfall = parse_day(cfg.landfall, "landfall");
    p.thresholds.rate_floor = cfg.rate_floor;
    p.thresholds.z_floor = cfg.z_floor;
    p.thresholds.z_days_min = cfg.z_days_min;
    p.thresholds.drop_window = {landfall, landfall + cfg.drop_window_days};

    p.selection = selection_report(p.ds, p.thresholds);
    for (const auto& rec : p.selection) {
        if (!rec.included) continue;
        p.results.push_back(transient_loss(build_series(p.ds, rec.polygon_id)));
    }
    std::sort(p.results.begin(), p.results.end(),
              [](const ResilienceResult& a, const ResilienceResult& b) {
                  if (a.trl != b.trl) return a.trl > b.trl;
                  return a.polygon_id < b.polygon_id;
              });
    return p;
}

void note_load_warnings(const Pipeline& p, CommandOutcome& outcome) {
    const LoadReport& rep = p.ds.report;
    if (rep.activity_rows_outside_horizon > 0)
        outcome.warnings.push_back(std::to_string(rep.activity_rows_outside_horizon) +
                                   " activity rows outside the horizon were dropped");
    std::int64_t filled = 0;
    for (const auto& [poly, n] : rep.gap_filled_days) filled += n;
    if (filled > 0)
        outcome.warnings.push_back(std::to_string(filled) + " gap days forward-filled across " +
                                   std::to_string(rep.gap_filled_days.size()) + " regions");
    for (const auto& rej : rep.rejected_regions)
        outcome.warnings.push_back("region " + rej.polygon_id + " rejected (" + rej.reason + ", " +
                                   std::to_string(rej.missing_days) + " days missing)");
    if (p.results.empty())
        outcome.warnings.push_back("no regions met the selection thresholds");
}

void write_regions_csv(const RunConfig& cfg, const Pipeline& p,
                       std::vector<std::string>& outputs) {
    std::ostringstream out;
    out << "polygon_id,name,county,trl,resilience,pct_loss,trl_2dp,pct_loss_2dp\n";
    for (const auto& r : p.results) {
        const RegionId* region = p.ds.find_region(r.polygon_id);
        out << csv_escape(r.polygon_id) << ',' << csv_escape(region->name) << ','
            << csv_escape(region->county) << ',' << format_double(r.trl) << ','
            << format_double(r.resilience) << ',' << format_double(r.pct_loss) << ','
            << two_dp(r.trl) << ',' << two_dp(r.pct_loss) << '\n';
    }
    write_file_atomic(out_path(cfg, "regions.csv"), out.str());
    outputs.push_back("regions.csv");
}

void write_selection_json(const RunConfig& cfg, const Pipeline& p,
                          std::vector<std::string>& outputs) {
    ordered_json j;
    j["thresholds"] = {
        {"rate_floor", p.thresholds.rate_floor},
        {"drop_window",
         {{"start", format_day(p.thresholds.drop_window.start)},
          {"end", format_day(p.thresholds.drop_window.end)}}},
        {"z_floor", p.thresholds.z_floor},
        {"z_days_min", p.thresholds.z_days_min},
    };
    j["n_regions"] = p.selection.size();
    std::size_t n_included = 0;
    auto included = ordered_json::array();
    auto excluded = ordered_json::array();
    for (const auto& rec : p.selection) {
        if (rec.included) {
            ++n_included;
            included.push_back(rec.polygon_id);
        } else {
            excluded.push_back({{"polygon_id", rec.polygon_id},
                                {"reason", rec.exclusion_reason},
                                {"min_rate_in_window", rec.min_rate_in_window},
                                {"days_below_z_floor", rec.days_below_z_floor}});
        }
    }
    j["n_included"] = n_included;
    j["included"] = std::move(included);
    j["excluded"] = std::move(excluded);
    auto rejected = ordered_json::array();
    for (const auto& rej : p.ds.report.rejected_regions)
        rejected.push_back({{"polygon_id", rej.polygon_id},
                            {"reason", rej.reason},
                            {"missing_days", rej.missing_days}});
    j["rejected_at_load"] = std::move(rejected);
    write_file_atomic(out_path(cfg, "selection.json"), j.dump(2) + "\n");
    outputs.push_back("selection.json");
}

void write_covariates_csv(const RunConfig& cfg, const std::vector<CovariateRow>& rows,
                          std::vector<std::string>& outputs) {
    std::ostringstream out;
    out << "polygon_id,county,trl,road_hours,restore_days,damage,pct_pre2000,dist_km,income,"
           "pct_black,pct_hispanic\n";
    for (const auto& r : rows) {
        out << csv_escape(r.polygon_id) << ',' << csv_escape(r.county) << ','
            << format_double(r.trl) << ',' << format_double(r.road_hours) << ','
            << format_double(r.restore_days) << ',' << format_double(r.damage) << ','
            << format_double(r.pct_pre2000) << ',' << format_double(r.dist_km) << ','
            << format_double(r.income) << ',' << format_double(r.pct_black) << ','
            << format_double(r.pct_hispanic) << '\n';
    }
    write_file_atomic(out_path(cfg, "covariates.csv"), out.str());
    outputs.push_back("covariates.csv");
}

void write_model_json(const RunConfig& cfg, const GlmmFit& fit,
                      const std::vector<std::string>& warnings,
                      std::vector<std::string>& outputs) {
    ordered_json j;
    j["model"] = {{"family", "gamma"},
                  {"link", "log"},
                  {"response", "trl"},
                  {"group", "county"},
                  {"predictors", ModelSpec::defaults().predictors}};
    j["controls"] = {{"max_outer_iter", cfg.controls.max_outer_iter},
                     {"max_inner_iter", cfg.controls.max_inner_iter},
                     {"tol_inner", cfg.controls.tol_inner},
                     {"tol_outer", cfg.controls.tol_outer},
                     {"variance_floor", cfg.controls.variance_floor}};
    j["n_obs"] = fit.n_obs;
    j["n_groups"] = fit.n_groups;
    j["k_params"] = fit.k_params;

    auto coefficients = ordered_json::array();
    for (const auto& row : wald_table(fit))
        coefficients.push_back({{"name", row.name},
                                {"estimate", row.estimate},
                                {"se", row.se},
                                {"t", row.t},
                                {"p", row.p},
                                {"exp_estimate", row.exp_estimate},
                                {"stars", row.stars}});
    j["coefficients"] = std::move(coefficients);

    j["sigma2_group"] = fit.sigma2_group;
    j["sigma2_resid"] = fit.sigma2_resid;
    j["shape"] = fit.shape;
    j["variance_partition"] =
        fit.sigma2_group + fit.sigma2_resid > 0.0
            ? variance_partition(fit.sigma2_group, fit.sigma2_resid)
            : 0.0;
    j["loglik"] = fit.loglik;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["r2_marginal"] = fit.r2_marginal;
    j["r2_conditional"] = fit.r2_conditional;
    j["converged"] = fit.converged;
    j["boundary_variance"] = fit.boundary_variance;
    j["single_group_fallback"] = fit.single_group_fallback;
    j["outer_iterations"] = fit.outer_iterations;

    ordered_json std_block;
    auto names = fit.coef_names;
    std_block["predictors"] = std::vector<std::string>(names.begin() + 1, names.end());
    std_block["means"] = std::vector<double>(fit.pred_means.data(),
                                             fit.pred_means.data() + fit.pred_means.size());
    std_block["stds"] =
        std::vector<double>(fit.pred_stds.data(), fit.pred_stds.data() + fit.pred_stds.size());
    j["standardization"] = std::move(std_block);

    auto modes = ordered_json::array();
    for (const auto& [group, mode] : fit.group_modes)
        modes.push_back({{"group", group}, {"mode", mode}});
    j["group_modes"] = std::move(modes);
    j["warnings"] = warnings;

    write_file_atomic(out_path(cfg, "model.json"), j.dump(2) + "\n");
    outputs.push_back("model.json");
}

void write_histogram_csv(const RunConfig& cfg, const Pipeline& p,
                         std::vector<std::string>& outputs) {
    std::ostringstream out;
    out << "bin_start,bin_end,count\n";
    if (!p.results.empty()) {
        double max_trl = 0.0;
        for (const auto& r : p.results) max_trl = std::max(max_trl, r.trl);
        const int bins = static_cast<int>(std::floor(max_trl)) + 1;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
        for (const auto& r : p.results) {
            auto b = static_cast<std::size_t>(std::floor(r.trl));
            ++counts[b];
        }
        for (int b = 0; b < bins; ++b)
            out << b << ',' << b + 1 << ',' << counts[static_cast<std::size_t>(b)] << '\n';
    }
    write_file_atomic(out_path(cfg, "histogram.csv"), out.str());
    outputs.push_back("histogram.csv");
}

void write_curves_csv(const RunConfig& cfg, const Pipeline& p,
                      std::vector<std::string>& outputs) {
    std::vector<std::string> ids;
    for (const auto& r : p.results) ids.push_back(r.polygon_id);
    std::sort(ids.begin(), ids.end());

    std::ostringstream out;
    out << "polygon_id,date,rate\n";
    for (const auto& id : ids) {
        const RegionSeries s = build_series(p.ds, id);
        for (std::size_t d = 0; d < s.rates.size(); ++d)
            out << csv_escape(id) << ',' << format_day(s.start + static_cast<CalDay>(d)) << ','
                << format_double(s.rates[d]) << '\n';
    }
    write_file_atomic(out_path(cfg, "curves.csv"), out.str());
    outputs.push_back("curves.csv");
}

void write_choropleth(const RunConfig& cfg, const Pipeline& p, CommandOutcome& outcome,
                      std::vector<std::string>& outputs) {
    std::ifstream in(*cfg.boundaries_path, std::ios::binary);
    if (!in) fail(ErrorCode::MissingFile, "cannot open '" + *cfg.boundaries_path + "'");
    ordered_json boundaries;
    try {
        boundaries = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SchemaError, *cfg.boundaries_path + ": " + e.what());
    }
    if (!boundaries.contains("features") || !boundaries["features"].is_array())
        fail(ErrorCode::SchemaError, *cfg.boundaries_path + ": not a FeatureCollection");

    std::map<std::string, const ordered_json*> by_id;
    for (const auto& f : boundaries["features"]) {
        if (f.contains("properties") && f["properties"].contains("polygon_id"))
            by_id.emplace(f["properties"]["polygon_id"].get<std::string>(), &f);
    }

    ordered_json out;
    out["type"] = "FeatureCollection";
    auto features = ordered_json::array();
    std::int64_t missing = 0;
    for (const auto& r : p.results) {
        const auto it = by_id.find(r.polygon_id);
        if (it == by_id.end()) {
            ++missing;
            continue;
        }
        ordered_json f = *it->second;
        f["properties"]["trl"] = r.trl;
        f["properties"]["resilience"] = r.resilience;
        f["properties"]["pct_loss"] = r.pct_loss;
        features.push_back(std::move(f));
    }
    out["features"] = std::move(features);
    if (missing > 0)
        outcome.warnings.push_back(std::to_string(missing) +
                                   " selected regions have no boundary feature");
    write_file_atomic(out_path(cfg, "choropleth.geojson"), out.dump(2) + "\n");
    outputs.push_back("choropleth.geojson");
}

void write_run_json(const RunConfig& cfg, const char* command, const CommandOutcome& outcome,
                    const std::vector<std::string>& outputs) {
    ordered_json j;
    j["command"] = command;
    if (!cfg.manifest_path.empty()) j["manifest"] = cfg.manifest_path;
    j["out_dir"] = cfg.out_dir;
    if (std::string(command) == "simulate") {
        j["seed"] = cfg.seed;
        j["groups"] = cfg.groups;
        j["per_group"] = cfg.per_group;
    } else {
        j["landfall"] = cfg.landfall;
        j["drop_window_days"] = cfg.drop_window_days;
        j["rate_floor"] = cfg.rate_floor;
        j["z_floor"] = cfg.z_floor;
        j["z_days_min"] = cfg.z_days_min;
        if (cfg.boundaries_path) j["boundaries"] = *cfg.boundaries_path;
        if (std::isfinite(cfg.max_assign_km)) j["max_assign_km"] = cfg.max_assign_km;
        j["controls"] = {{"max_outer_iter", cfg.controls.max_outer_iter},
                         {"max_inner_iter", cfg.controls.max_inner_iter},
                         {"tol_inner", cfg.controls.tol_inner},
                         {"tol_outer", cfg.controls.tol_outer},
                         {"variance_floor", cfg.controls.variance_floor}};
    }
    j["warnings"] = outcome.warnings;
    j["outputs"] = outputs;
    write_file_atomic(out_path(cfg, "run.json"), j.dump(2) + "\n");
}

std::vector<CovariateRow> fit_rows(const RunConfig& cfg, const Pipeline& p,
                                   CommandOutcome& outcome) {
    AssembleOptions opts;
    opts.max_assign_km = cfg.max_assign_km;
    AssembleReport rep;
    auto rows = assemble_rows(p.ds, p.results, opts, &rep);
    if (rep.unmapped_road_events > 0)
        outcome.warnings.push_back(std::to_string(rep.unmapped_road_events) +
                                   " road events could not be mapped to a region");
    return rows;
}

GlmmFit run_fit(const RunConfig& cfg, const Pipeline& p, CommandOutcome& outcome,
                std::vector<std::string>& outputs) {
    const auto rows = fit_rows(cfg, p, outcome);
    write_covariates_csv(cfg, rows, outputs);
    const GlmmFit fit = fit_glmm(rows, ModelSpec::defaults(), cfg.controls);
    if (fit.single_group_fallback) {
        outcome.warnings.push_back(
            "single county in the selection: fixed-effects fit, no variance component");
        outcome.exit_code = 5;
    }
    if (fit.boundary_variance)
        outcome.warnings.push_back("county variance pinned at the floor");
    write_model_json(cfg, fit, outcome.warnings, outputs);
    return fit;
}

}  // namespace

CommandOutcome cmd_simulate(const RunConfig& cfg) {
    CommandOutcome outcome;
    SimulateParams params;
    params.seed = cfg.seed;
    params.groups = cfg.groups;
    params.per_group = cfg.per_group;
    const SimulatedData sim = gen_dataset(params);

    std::vector<std::string> outputs;
    auto emit = [&](const char* name, const std::string& content) {
        write_file_atomic(out_path(cfg, name), content);
        outputs.push_back(name);
    };
    emit("activity.csv", activity_csv(sim.dataset));
    emit("outages.csv", outages_csv(sim.dataset));
    emit("road_events.csv", road_events_csv(sim.dataset));
    emit("hazard_path.csv", hazard_path_csv(sim.dataset));
    emit("attributes.csv", attributes_csv(sim.dataset));
    emit("manifest.json", manifest_json(sim.manifest));
    emit("boundaries.geojson", sim.boundaries_geojson + "\n");
    write_run_json(cfg, "simulate", outcome, outputs);
    return outcome;
}

CommandOutcome cmd_quantify(const RunConfig& cfg) {
    CommandOutcome outcome;
    const Pipeline p = run_pipeline(cfg);
    note_load_warnings(p, outcome);
    std::vector<std::string> outputs;
    write_regions_csv(cfg, p, outputs);
    write_selection_json(cfg, p, outputs);
    write_run_json(cfg, "quantify", outcome, outputs);
    return outcome;
}

CommandOutcome cmd_fit(const RunConfig& cfg) {
    CommandOutcome outcome;
    const Pipeline p = run_pipeline(cfg);
    note_load_warnings(p, outcome);
    std::vector<std::string> outputs;
    run_fit(cfg, p, outcome, outputs);
    write_run_json(cfg, "fit", outcome, outputs);
    return outcome;
}

CommandOutcome cmd_report(const RunConfig& cfg) {
    CommandOutcome outcome;
    const Pipeline p = run_pipeline(cfg);
    note_load_warnings(p, outcome);
    std::vector<std::string> outputs;
    write_histogram_csv(cfg, p, outputs);
    write_curves_csv(cfg, p, outputs);
    if (cfg.boundaries_path) write_choropleth(cfg, p, outcome, outputs);
    write_run_json(cfg, "report", outcome, outputs);
    return outcome;
}

CommandOutcome cmd_run_all(const RunConfig& cfg) {
    CommandOutcome outcome;
    const Pipeline p = run_pipeline(cfg);
    note_load_warnings(p, outcome);
    std::vector<std::string> outputs;
    write_regions_csv(cfg, p, outputs);
    write_selection_json(cfg, p, outputs);
    run_fit(cfg, p, outcome, outputs);
    write_histogram_csv(cfg, p, outputs);
    write_curves_csv(cfg, p, outputs);
    if (cfg.boundaries_path) write_choropleth(cfg, p, outcome, outputs);
    write_run_json(cfg, "run-all", outcome, outputs);
    return outcome;
}

}  // namespace trl
