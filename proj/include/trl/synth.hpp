#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trl/covariates.hpp"
#include "trl/data_model.hpp"
#include "trl/glmm.hpp"
#include "trl/resilience.hpp"

namespace trl {

// Piecewise-linear dip: rate falls 0 -> depth over [0, drop_day]
// (instantaneous when drop_day = 0), recovers over the next recovery_days,
// then holds at 1. Optional truncated-at-zero Gaussian noise.
struct CurveParams {
    double depth = 0.5;  // in [0, 1]
    int drop_day = 4;
    int recovery_days = 10;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
};

// BadParams when the dip does not fit the horizon or params are out of range.
RegionSeries gen_curve(const CurveParams& params, int horizon_days,
                       CalDay start_day = make_day(2021, 8, 25),
                       const std::string& polygon_id = "synthetic");

// Brute-force loss integral: left rectangles of width dt over [0, t_end),
// compensated summation. Step-function inputs are exact up to rounding, so
// this cross-checks the day-sum route to ~1e-12.
double oracle_trl(const std::function<double(double)>& q_of_t, double t_end, double dt = 1e-3);
double oracle_trl_series(const RegionSeries& series, double dt = 1e-3);

// Gamma/log random-intercept generator for recovery studies. beta_true is
// intercept-first; predictors are raw iid standard normals.
struct GlmmScenario {
    Eigen::VectorXd beta_true;
    double sigma_b_true = 0.35;
    double shape_true = 3.0;
    int n_groups = 36;
    int n_per_group = 5;
    std::uint64_t seed = 0;
};

struct GlmmSample {
    Eigen::VectorXd y;
    Eigen::MatrixXd predictors;  // n x p, raw scale
    std::vector<int> group_index;
    std::vector<std::string> group_names;
    Eigen::VectorXd b_true;
};

GlmmSample gen_glmm_sample(const GlmmScenario& scenario);  // BadParams

// Same draws packaged as covariate rows; needs exactly 8 slopes so the
// columns map onto the standard model spec.
std::vector<CovariateRow> gen_glmm_data(const GlmmScenario& scenario);

// Independent Gamma/log IRLS on explicit normal equations (LLT), L2
// convergence metric; a deliberately different route from fit_glm.
Eigen::VectorXd oracle_irls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                            int max_iter = 100, double tol = 1e-10);

// VIFs by brute force: each column regressed on the others with intercept.
Eigen::VectorXd oracle_vif(const Eigen::MatrixXd& columns);

// Variance decomposition computed with plain two-pass loops.
R2 oracle_r2(const Eigen::VectorXd& linpred, double sigma2_group, double shape);

// Full synthetic event: regions on a county grid, a storm track, activity
// dips tied to track distance, outage trapezoids, road events at region
// centers, demographic attributes, square region boundaries.
struct SimulateParams {
    std::uint64_t seed = 1;
    int groups = 36;
    int per_group = 5;
    DayRange horizon{make_day(2021, 8, 25), make_day(2021, 9, 30)};
    CalDay landfall = make_day(2021, 8, 29);
    std::string timezone = "-05:00";
};

struct SimulatedData {
    Dataset dataset;
    Manifest manifest;  // file basenames, horizon and timezone filled in
    std::string boundaries_geojson;
};

SimulatedData gen_dataset(const SimulateParams& params);  // BadParams

}  // namespace trl
