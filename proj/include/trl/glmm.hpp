#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trl/covariates.hpp"

namespace trl {

struct FitControls {
    int max_outer_iter = 200;       // variance/shape search iterations
    int max_inner_iter = 100;       // penalized IRLS iterations per evaluation
    double tol_inner = 1e-10;       // relative coefficient change
    double tol_outer = 1e-8;        // objective spread at the outer optimum
    double variance_floor = 1e-12;  // random-intercept variance is clamped here
};

struct ModelSpec {
    std::string response = "trl";
    std::string group = "county";
    std::vector<std::string> predictors;  // covariate columns, model order

    static ModelSpec defaults();
};

// Fit summary for both the mixed model and the fixed-effects fallback.
// Slopes are on the standardized-predictor scale; pred_means/pred_stds record
// the transform so callers can move back to raw units.
struct GlmmFit {
    std::vector<std::string> coef_names;  // "(Intercept)" first
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    Eigen::VectorXd t_stats;
    Eigen::VectorXd p_values;

    double sigma2_group = 0.0;  // random-intercept variance
    double sigma2_resid = 0.0;  // distribution-level variance ln(1 + 1/shape)
    double shape = 0.0;         // Gamma shape
    double loglik = 0.0;
    double aic = 0.0, bic = 0.0;
    double r2_marginal = 0.0, r2_conditional = 0.0;
    double linpred_variance = 0.0;  // sample variance of X * beta

    std::vector<std::pair<std::string, double>> group_modes;  // sorted by group
    Eigen::VectorXd pred_means, pred_stds;  // empty when no standardization applied

    int n_obs = 0;
    int n_groups = 0;
    int k_params = 0;
    int outer_iterations = 0;
    bool converged = false;
    bool boundary_variance = false;      // variance pinned at the floor
    bool single_group_fallback = false;  // one group only: fixed-effects fit
};

// Gamma/log fit by iteratively reweighted least squares on the design X as
// given (include an intercept column yourself). Shape is the Pearson moment
// estimate. NonPositiveResponse, RankDeficientDesign, NoConvergence.
GlmmFit fit_glm(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                const std::vector<std::string>& coef_names, const FitControls& controls = {});

// Gamma/log random-intercept fit by Laplace approximation: penalized IRLS in
// the inner loop, derivative-free search over (log variance, log shape)
// outside. Predictors standardize internally. With a single group the fit
// falls back to fit_glm and flags it. NonPositiveResponse,
// RankDeficientDesign, ConstantColumn, NoConvergence.
GlmmFit fit_glmm(const std::vector<CovariateRow>& rows, const ModelSpec& spec = ModelSpec::defaults(),
                 const FitControls& controls = {});

// Matrix-level entry behind fit_glmm: raw (unstandardized) predictors without
// an intercept column, plus a group index per row.
GlmmFit fit_glmm_matrices(const Eigen::VectorXd& y, const Eigen::MatrixXd& predictors,
                          const std::vector<int>& group_index,
                          const std::vector<std::string>& group_names,
                          const std::vector<std::string>& predictor_names,
                          const FitControls& controls = {});

// The profiled objective fit_glmm_matrices maximizes: the Laplace marginal
// log-likelihood at fixed (variance, shape) with (beta, b) solved out by the
// penalized inner loop. Same standardization, same inner controls, so the
// value at a fit's (sigma2_group, shape) reproduces its loglik. Exposed for
// profiling and optimality checks. Needs at least two groups.
double laplace_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& predictors,
                      const std::vector<int>& group_index, int n_groups, double sigma2_group,
                      double shape, const FitControls& controls = {});

struct WaldRow {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 0.0;
    double exp_estimate = 0.0;
    std::string stars;
};

std::vector<WaldRow> wald_table(const GlmmFit& fit);

struct R2 {
    double marginal = 0.0;
    double conditional = 0.0;
};

// Nakagawa-style pseudo-R2 with the log-normal distribution variance
// ln(1 + 1/shape) on the log-link scale.
R2 r2_nakagawa(const GlmmFit& fit);

double exp_coefficient(double beta);

// share of group-level variance in (group + distribution) variance;
// ZeroTotalVariance when the total is zero.
double variance_partition(double sigma2_group, double sigma2_resid);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
};

InformationCriteria information_criteria(double loglik, int k_params, int n_obs);

double normal_cdf(double x);

// Two-sided p-value stars: <0.0001 "***", <0.001 "**", <0.05 "*", <0.1 ".".
std::string significance_stars(double p);

}  // namespace trl
