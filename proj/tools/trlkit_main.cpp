#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "trl/report.hpp"

namespace {

void add_pipeline_options(CLI::App* cmd, trl::RunConfig& cfg, bool fit_options) {
    cmd->add_option("-m,--manifest", cfg.manifest_path, "Input manifest (json)")
        ->required();
    cmd->add_option("-o,--out", cfg.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--landfall", cfg.landfall, "Landfall date, YYYY-MM-DD")
        ->capture_default_str();
    cmd->add_option("--drop-window-days", cfg.drop_window_days,
                    "Days after landfall scanned for the activity drop")
        ->capture_default_str();
    cmd->add_option("--rate-floor", cfg.rate_floor,
                    "Activity-rate threshold for inclusion")
        ->capture_default_str();
    cmd->add_option("--z-floor", cfg.z_floor, "Z-score threshold for inclusion")
        ->capture_default_str();
    cmd->add_option("--z-days", cfg.z_days_min,
                    "Minimum days below the z threshold")
        ->capture_default_str();
    if (fit_options) {
        cmd->add_option("--max-assign-km", cfg.max_assign_km,
                        "Drop road events farther than this from every region center");
        cmd->add_option("--max-outer-iter", cfg.controls.max_outer_iter,
                        "Variance/shape search iteration cap")
            ->capture_default_str();
        cmd->add_option("--max-inner-iter", cfg.controls.max_inner_iter,
                        "Penalized IRLS iteration cap")
            ->capture_default_str();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient resilience loss from population-activity time series"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    trl::RunConfig cfg;

    auto* simulate = app.add_subcommand(
        "simulate", "Generate a synthetic storm dataset with a manifest");
    simulate->add_option("-o,--out", cfg.out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
    simulate->add_option("--groups", cfg.groups, "Counties to generate")
        ->capture_default_str();
    simulate->add_option("--per-group", cfg.per_group, "Regions per county")
        ->capture_default_str();

    auto* quantify = app.add_subcommand(
        "quantify", "Select affected regions and compute per-region loss");
    add_pipeline_options(quantify, cfg, false);

    auto* fit = app.add_subcommand(
        "fit", "Assemble covariates and fit the county random-intercept model");
    add_pipeline_options(fit, cfg, true);

    auto* report = app.add_subcommand(
        "report", "Write histogram, recovery curves and optional choropleth");
    add_pipeline_options(report, cfg, false);
    report->add_option("--boundaries", cfg.boundaries_path,
                       "Region boundaries (GeoJSON FeatureCollection)");

    auto* run_all = app.add_subcommand("run-all", "quantify + fit + report in one pass");
    add_pipeline_options(run_all, cfg, true);
    run_all->add_option("--boundaries", cfg.boundaries_path,
                        "Region boundaries (GeoJSON FeatureCollection)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        trl::CommandOutcome outcome;
        if (simulate->parsed()) outcome = trl::cmd_simulate(cfg);
        else if (quantify->parsed()) outcome = trl::cmd_quantify(cfg);
        else if (fit->parsed()) outcome = trl::cmd_fit(cfg);
        else if (report->parsed()) outcome = trl::cmd_report(cfg);
        else outcome = trl::cmd_run_all(cfg);
        for (const auto& w : outcome.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        return outcome.exit_code;
    } catch (const trl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return trl::exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
