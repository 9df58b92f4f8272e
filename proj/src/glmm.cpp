#include "trl/glmm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "trl/errors.hpp"

// ---------------------------------------------------------------------------
// Model
//
//   y_ij ~ Gamma(shape nu, mean mu_ij),  Var = mu^2 / nu
//   log mu_ij = x_ij' beta + b_i,        b_i ~ N(0, sigma2)
//
// The marginal likelihood integrates the b_i out; with a Laplace
// approximation around the joint mode (beta-hat, b-hat) and expected (Fisher)
// curvature nu per observation it collapses, for a single random intercept,
// to the closed form
//
//   l(sigma2, nu) = sum_ij [ nu log nu - lgamma(nu) + (nu-1) log y_ij
//                            - nu log mu-hat_ij - nu y_ij / mu-hat_ij ]
//                   - |b-hat|^2 / (2 sigma2)
//                   - 1/2 sum_i log(1 + nu n_i sigma2),
//
// whose sigma2 -> 0 limit is exactly the fixed-effects Gamma log-likelihood,
// so the mixed fit can never fall below the nested fixed fit.
//
// The joint mode solves the penalized score equations. Because the Fisher
// weight for the Gamma/log pair is the constant nu, the penalized IRLS system
//
//   [ nu X'X        nu X'Z       ] [beta]   [ nu X'z ]
//   [ nu Z'X   nu Z'Z + I/sigma2 ] [ b  ] = [ nu Z'z ]
//
// has a coefficient matrix that is fixed while (sigma2, nu) are held, so it
// is factored once per outer evaluation and only the working response
// z = eta + (y - mu)/mu is refreshed. Z'Z is diagonal (group sizes), which
// makes the Schur complement against the b block cheap:
//
//   S = nu X'X - nu^2 G D^-1 G',   G = X'Z,  D = diag(nu n_i + 1/sigma2).
//
// S^-1 is also the reported covariance of beta-hat (fixed-effects block of
// the inverse penalized information). The outer pair (log sigma2, log nu) is
// maximized by Nelder-Mead; a safeguard evaluation pinned at the variance
// floor keeps boundary cases honest.
// ---------------------------------------------------------------------------

namespace trl {

ModelSpec ModelSpec::defaults() {
    ModelSpec spec;
    spec.predictors = {"road_hours", "restore_days", "damage",    "pct_pre2000",
                       "dist_km",    "income",       "pct_black", "pct_hispanic"};
    return spec;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string significance_stars(double p) {
    if (p < 0.0001) return "***";
    if (p < 0.001) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

double exp_coefficient(double beta) { return std::exp(beta); }

double variance_partition(double sigma2_group, double sigma2_resid) {
    const double total = sigma2_group + sigma2_resid;
    if (!(total > 0.0))
        fail(ErrorCode::ZeroTotalVariance, "variance components sum to zero");
    return sigma2_group / total;
}

InformationCriteria information_criteria(double loglik, int k_params, int n_obs) {
    if (n_obs <= 0) fail(ErrorCode::BadParams, "information criteria need n_obs > 0");
    InformationCriteria ic;
    ic.aic = -2.0 * loglik + 2.0 * k_params;
    ic.bic = -2.0 * loglik + k_params * std::log(static_cast<double>(n_obs));
    return ic;
}

R2 r2_nakagawa(const GlmmFit& fit) {
    const double sigma2_dist = std::log1p(1.0 / fit.shape);
    const double total = fit.linpred_variance + fit.sigma2_group + sigma2_dist;
    R2 r2;
    r2.marginal = fit.linpred_variance / total;
    r2.conditional = (fit.linpred_variance + fit.sigma2_group) / total;
    return r2;
}

namespace {

constexpr double kEtaClamp = 300.0;  // keeps exp(eta) finite while iterating

void check_response(const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (!(y(i) > 0.0) || !std::isfinite(y(i)))
            fail(ErrorCode::NonPositiveResponse,
                 "response " + std::to_string(i) + " is not a positive real");
}

void check_design(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    if (X.rows() != y.size())
        fail(ErrorCode::BadParams, "design rows do not match response length");
    if (y.size() <= X.cols())
        fail(ErrorCode::RankDeficientDesign,
             "need more observations than design columns");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        fail(ErrorCode::RankDeficientDesign, "design matrix is numerically rank deficient");
}

double gamma_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double nu) {
    const double n = static_cast<double>(y.size());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        sum += (nu - 1.0) * std::log(y(i)) - nu * std::log(mu(i)) - nu * y(i) / mu(i);
    return sum + n * (nu * std::log(nu) - std::lgamma(nu));
}

double sample_variance(const Eigen::VectorXd& v) {
    if (v.size() < 2) return 0.0;
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

void fill_wald(GlmmFit& fit) {
    const Eigen::Index p = fit.beta.size();
    fit.t_stats.resize(p);
    fit.p_values.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        fit.t_stats(j) = fit.beta(j) / fit.se(j);
        fit.p_values(j) = 2.0 * normal_cdf(-std::abs(fit.t_stats(j)));
    }
}

void fill_summary(GlmmFit& fit, const Eigen::VectorXd& linpred) {
    fit.linpred_variance = sample_variance(linpred);
    fit.sigma2_resid = std::log1p(1.0 / fit.shape);
    const R2 r2 = r2_nakagawa(fit);
    fit.r2_marginal = r2.marginal;
    fit.r2_conditional = r2.conditional;
    const InformationCriteria ic = information_criteria(fit.loglik, fit.k_params, fit.n_obs);
    fit.aic = ic.aic;
    fit.bic = ic.bic;
}

// --- penalized IRLS ---------------------------------------------------------

struct GlmmWork {
    const Eigen::VectorXd* y = nullptr;
    const Eigen::MatrixXd* X = nullptr;
    const std::vector<int>* group = nullptr;
    Eigen::MatrixXd XtX;
    Eigen::MatrixXd G;          // X'Z, p x q
    Eigen::VectorXd group_size; // n_i
    Eigen::VectorXd beta_start;
    int q = 0;
};

struct InnerSolve {
    Eigen::VectorXd beta;
    Eigen::VectorXd b;
    Eigen::VectorXd mu;
    double loglik = -std::numeric_limits<double>::infinity();
    bool converged = false;
};

InnerSolve pirls(const GlmmWork& w, double sigma2, double nu, const FitControls& c) {
    const Eigen::VectorXd& y = *w.y;
    const Eigen::MatrixXd& X = *w.X;
    const std::vector<int>& group = *w.group;
    const Eigen::Index n = y.size();
    const int q = w.q;

    const Eigen::VectorXd dinv =
        (nu * w.group_size.array() + 1.0 / sigma2).inverse().matrix();
    const Eigen::MatrixXd S =
        nu * w.XtX - nu * nu * (w.G * dinv.asDiagonal() * w.G.transpose());
    const Eigen::LDLT<Eigen::MatrixXd> solver(S);

    InnerSolve s;
    s.beta = w.beta_start;
    s.b = Eigen::VectorXd::Zero(q);

    Eigen::VectorXd eta(n), z(n), ztz(q);
    auto refresh_eta = [&] {
        eta = X * s.beta;
        for (Eigen::Index i = 0; i < n; ++i) eta(i) += s.b[group[static_cast<std::size_t>(i)]];
        eta = eta.array().min(kEtaClamp).max(-kEtaClamp).matrix();
        s.mu = eta.array().exp().matrix();
    };
    refresh_eta();

    for (int iter = 0; iter < c.max_inner_iter; ++iter) {
        z = eta.array() + y.array() / s.mu.array() - 1.0;
        ztz.setZero();
        for (Eigen::Index i = 0; i < n; ++i) ztz[group[static_cast<std::size_t>(i)]] += z(i);

        const Eigen::VectorXd rhs =
            nu * (X.transpose() * z) - nu * nu * (w.G * (dinv.array() * ztz.array()).matrix());
        const Eigen::VectorXd beta_new = solver.solve(rhs);
        const Eigen::VectorXd b_new =
            (dinv.array() * (nu * ztz - nu * (w.G.transpose() * beta_new)).array()).matrix();

        const double scale =
            1.0 + std::max(beta_new.lpNorm<Eigen::Infinity>(), b_new.lpNorm<Eigen::Infinity>());
        const double delta = std::max((beta_new - s.beta).lpNorm<Eigen::Infinity>(),
                                      (b_new - s.b).lpNorm<Eigen::Infinity>());
        s.beta = beta_new;
        s.b = b_new;
        refresh_eta();
        if (delta / scale < c.tol_inner) {
            s.converged = true;
            break;
        }
    }

    double ll = gamma_loglik(y, s.mu, nu);
    ll -= s.b.squaredNorm() / (2.0 * sigma2);
    for (int g = 0; g < q; ++g) ll -= 0.5 * std::log1p(nu * w.group_size(g) * sigma2);
    s.loglik = std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
    return s;
}

// --- Nelder-Mead on (log sigma2, log nu) ------------------------------------

using Point2 = std::array<double, 2>;

struct NmOutcome {
    Point2 x{};
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

template <typename F>
NmOutcome nelder_mead(F&& f, Point2 start, double step, int max_iter, double tol_f,
                      double tol_x) {
    struct Vertex {
        Point2 x;
        double f;
    };
    std::array<Vertex, 3> v;
    v[0] = {start, f(start)};
    v[1] = {{start[0] + step, start[1]}, 0.0};
    v[2] = {{start[0], start[1] + step}, 0.0};
    v[1].f = f(v[1].x);
    v[2].f = f(v[2].x);

    auto order = [&] {
        std::stable_sort(v.begin(), v.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    auto diameter = [&] {
        double d = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                d = std::max({d, std::abs(v[i].x[0] - v[j].x[0]),
                              std::abs(v[i].x[1] - v[j].x[1])});
        return d;
    };

    NmOutcome out;
    order();
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        if (v[2].f - v[0].f <= tol_f && diameter() <= tol_x) {
            out.converged = true;
            break;
        }
        const Point2 centroid{(v[0].x[0] + v[1].x[0]) / 2.0, (v[0].x[1] + v[1].x[1]) / 2.0};
        auto at = [&](double coef) {
            return Point2{centroid[0] + coef * (centroid[0] - v[2].x[0]),
                          centroid[1] + coef * (centroid[1] - v[2].x[1])};
        };

        const Point2 xr = at(1.0);
        const double fr = f(xr);
        if (fr < v[0].f) {
            const Point2 xe = at(2.0);
            const double fe = f(xe);
            v[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < v[1].f) {
            v[2] = {xr, fr};
        } else {
            const bool outside = fr < v[2].f;
            const Point2 xc = outside ? at(0.5) : at(-0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : v[2].f)) {
                v[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    v[i].x = {v[0].x[0] + 0.5 * (v[i].x[0] - v[0].x[0]),
                              v[0].x[1] + 0.5 * (v[i].x[1] - v[0].x[1])};
                    v[i].f = f(v[i].x);
                }
            }
        }
        order();
    }
    out.x = v[0].x;
    out.f = v[0].f;
    out.converged = out.converged || (v[2].f - v[0].f <= tol_f);
    return out;
}

std::vector<std::string> with_intercept(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    out.reserve(names.size() + 1);
    out.push_back("(Intercept)");
    out.insert(out.end(), names.begin(), names.end());
    return out;
}

}  // namespace

GlmmFit fit_glm(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                const std::vector<std::string>& coef_names, const FitControls& controls) {
    check_response(y);
    check_design(y, X);
    const Eigen::Index n = y.size(), p = X.cols();
    if (static_cast<Eigen::Index>(coef_names.size()) != p)
        fail(ErrorCode::BadParams, "coefficient names do not match design columns");

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);

    // mu = y start makes the first step an ordinary regression of log y
    Eigen::VectorXd mu = y;
    Eigen::VectorXd eta = y.array().log().matrix();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    bool converged = false;
    for (int iter = 0; iter < controls.max_inner_iter; ++iter) {
        const Eigen::VectorXd z =
            (eta.array() + y.array() / mu.array() - 1.0).matrix();
        const Eigen::VectorXd beta_new = qr.solve(z);
        const double delta = (beta_new - beta).lpNorm<Eigen::Infinity>() /
                             (1.0 + beta_new.lpNorm<Eigen::Infinity>());
        beta = beta_new;
        eta = (X * beta).array().min(kEtaClamp).max(-kEtaClamp).matrix();
        mu = eta.array().exp().matrix();
        if (iter > 0 && delta < controls.tol_inner) {
            converged = true;
            break;
        }
    }
    if (!converged)
        fail(ErrorCode::NoConvergence,
             "IRLS did not converge in " + std::to_string(controls.max_inner_iter) +
                 " iterations");

    const double pearson = ((y - mu).array() / mu.array()).square().sum();
    const double dof = static_cast<double>(n - p);
    const double nu = pearson > 0.0 ? std::min(dof / pearson, 1e12) : 1e12;

    GlmmFit fit;
    fit.coef_names = coef_names;
    fit.beta = beta;
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.se = (xtx_inv.diagonal() / nu).cwiseSqrt();
    fill_wald(fit);

    fit.shape = nu;
    fit.sigma2_group = 0.0;
    fit.loglik = gamma_loglik(y, mu, nu);
    fit.n_obs = static_cast<int>(n);
    fit.n_groups = 0;
    fit.k_params = static_cast<int>(p) + 1;  // coefficients + shape
    fit.converged = true;
    fill_summary(fit, X * beta);
    return fit;
}

GlmmFit fit_glmm_matrices(const Eigen::VectorXd& y, const Eigen::MatrixXd& predictors,
                          const std::vector<int>& group_index,
                          const std::vector<std::string>& group_names,
                          const std::vector<std::string>& predictor_names,
                          const FitControls& controls) {
    const Eigen::Index n = y.size(), p = predictors.cols();
    if (predictors.rows() != n || static_cast<Eigen::Index>(group_index.size()) != n)
        fail(ErrorCode::BadParams, "rows of response, predictors and groups differ");
    if (static_cast<Eigen::Index>(predictor_names.size()) != p)
        fail(ErrorCode::BadParams, "predictor names do not match predictor columns");
    const int q = static_cast<int>(group_names.size());
    if (q < 1) fail(ErrorCode::BadParams, "need at least one group");
    for (const int g : group_index)
        if (g < 0 || g >= q) fail(ErrorCode::BadParams, "group index out of range");
    check_response(y);

    const Standardized std_pred = standardize(predictors, &predictor_names);
    Eigen::MatrixXd X(n, p + 1);
    X.col(0).setOnes();
    X.rightCols(p) = std_pred.values;
    const std::vector<std::string> names = with_intercept(predictor_names);

    if (q == 1) {
        GlmmFit fit = fit_glm(y, X, names, controls);
        fit.single_group_fallback = true;
        fit.n_groups = 1;
        fit.group_modes = {{group_names[0], 0.0}};
        fit.pred_means = std_pred.means;
        fit.pred_stds = std_pred.stds;
        return fit;
    }

    const GlmmFit glm = fit_glm(y, X, names, controls);

    GlmmWork work;
    work.y = &y;
    work.X = &X;
    work.group = &group_index;
    work.XtX = X.transpose() * X;
    work.q = q;
    work.G.setZero(p + 1, q);
    work.group_size.setZero(q);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int g = group_index[static_cast<std::size_t>(i)];
        work.G.col(g) += X.row(i).transpose();
        work.group_size(g) += 1.0;
    }
    work.beta_start = glm.beta;

    const double floor = controls.variance_floor;
    auto clamp_params = [&](const Point2& t) {
        return std::pair<double, double>{std::clamp(std::exp(t[0]), floor, 1e8),
                                         std::clamp(std::exp(t[1]), 1e-8, 1e8)};
    };
    auto objective = [&](const Point2& t) {
        const auto [sigma2, nu] = clamp_params(t);
        return -pirls(work, sigma2, nu, controls).loglik;
    };

    const Point2 start{std::log(0.1), 0.0};
    const NmOutcome nm =
        nelder_mead(objective, start, 0.5, controls.max_outer_iter, controls.tol_outer, 1e-6);

    // Safeguard candidates pinned at the variance floor: the mixed fit must
    // never score below the nested fixed-effects fit.
    auto [nm_sigma2, nm_nu] = clamp_params(nm.x);
    const std::array<std::pair<double, double>, 3> candidates{
        std::pair<double, double>{nm_sigma2, nm_nu},
        {floor, glm.shape},
        {floor, nm_nu},
    };
    double best_ll = -std::numeric_limits<double>::infinity();
    std::pair<double, double> best{nm_sigma2, nm_nu};
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double ll = pirls(work, candidates[i].first, candidates[i].second, controls).loglik;
        if (ll > best_ll) {
            best_ll = ll;
            best = candidates[i];
            best_idx = i;
        }
    }
    if (!nm.converged && best_idx == 0)
        fail(ErrorCode::NoConvergence,
             "variance/shape search did not converge in " +
                 std::to_string(controls.max_outer_iter) + " iterations");

    const auto [sigma2, nu] = best;
    const InnerSolve inner = pirls(work, sigma2, nu, controls);
    if (!inner.converged)
        fail(ErrorCode::NoConvergence, "penalized IRLS did not converge at the optimum");

    GlmmFit fit;
    fit.coef_names = names;
    fit.beta = inner.beta;

    const Eigen::VectorXd dinv =
        (nu * work.group_size.array() + 1.0 / sigma2).inverse().matrix();
    const Eigen::MatrixXd S =
        nu * work.XtX - nu * nu * (work.G * dinv.asDiagonal() * work.G.transpose());
    const Eigen::MatrixXd cov = S.ldlt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
    fit.se = cov.diagonal().cwiseSqrt();
    fill_wald(fit);

    fit.sigma2_group = sigma2;
    fit.shape = nu;
    fit.loglik = inner.loglik;
    fit.n_obs = static_cast<int>(n);
    fit.n_groups = q;
    fit.k_params = static_cast<int>(p) + 1 + 2;  // coefficients + variance + shape
    fit.outer_iterations = nm.iterations;
    fit.converged = true;
    fit.boundary_variance = sigma2 <= floor * (1.0 + 1e-9);
    fit.pred_means = std_pred.means;
    fit.pred_stds = std_pred.stds;

    fit.group_modes.reserve(static_cast<std::size_t>(q));
    for (int g = 0; g < q; ++g) fit.group_modes.emplace_back(group_names[g], inner.b(g));
    std::sort(fit.group_modes.begin(), fit.group_modes.end());

    fill_summary(fit, X * inner.beta);
    return fit;
}

double laplace_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& predictors,
                      const std::vector<int>& group_index, int n_groups, double sigma2_group,
                      double shape, const FitControls& controls) {
    const Eigen::Index n = y.size(), p = predictors.cols();
    if (predictors.rows() != n || static_cast<Eigen::Index>(group_index.size()) != n)
        fail(ErrorCode::BadParams, "rows of response, predictors and groups differ");
    if (n_groups < 2) fail(ErrorCode::BadParams, "profiled objective needs at least two groups");
    if (!(sigma2_group > 0.0) || !(shape > 0.0))
        fail(ErrorCode::BadParams, "variance and shape must be positive");
    for (const int g : group_index)
        if (g < 0 || g >= n_groups) fail(ErrorCode::BadParams, "group index out of range");
    check_response(y);

    const Standardized std_pred = standardize(predictors);
    Eigen::MatrixXd X(n, p + 1);
    X.col(0).setOnes();
    X.rightCols(p) = std_pred.values;
    std::vector<std::string> names(static_cast<std::size_t>(p), "x");
    const GlmmFit glm = fit_glm(y, X, with_intercept(names), controls);

    GlmmWork work;
    work.y = &y;
    work.X = &X;
    work.group = &group_index;
    work.XtX = X.transpose() * X;
    work.q = n_groups;
    work.G.setZero(p + 1, n_groups);
    work.group_size.setZero(n_groups);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int g = group_index[static_cast<std::size_t>(i)];
        work.G.col(g) += X.row(i).transpose();
        work.group_size(g) += 1.0;
    }
    work.beta_start = glm.beta;
    return pirls(work, sigma2_group, shape, controls).loglik;
}

namespace {

double covariate_field(const CovariateRow& row, const std::string& name) {
    if (name == "trl") return row.trl;
    if (name == "road_hours") return row.road_hours;
    if (name == "restore_days") return row.restore_days;
    if (name == "damage") return row.damage;
    if (name == "pct_pre2000") return row.pct_pre2000;
    if (name == "dist_km") return row.dist_km;
    if (name == "income") return row.income;
    if (name == "pct_black") return row.pct_black;
    if (name == "pct_hispanic") return row.pct_hispanic;
    fail(ErrorCode::BadParams, "unknown covariate column '" + name + "'");
}

}  // namespace

GlmmFit fit_glmm(const std::vector<CovariateRow>& rows, const ModelSpec& spec,
                 const FitControls& controls) {
    if (rows.empty()) fail(ErrorCode::BadParams, "no covariate rows to fit");
    if (spec.group != "county")
        fail(ErrorCode::BadParams, "grouping column must be 'county'");

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = static_cast<Eigen::Index>(spec.predictors.size());

    Eigen::VectorXd y(n);
    Eigen::MatrixXd P(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        y(i) = covariate_field(row, spec.response);
        for (Eigen::Index j = 0; j < p; ++j)
            P(i, j) = covariate_field(row, spec.predictors[static_cast<std::size_t>(j)]);
    }

    std::map<std::string, int> group_ids;
    for (const auto& row : rows) group_ids.emplace(row.county, 0);
    std::vector<std::string> group_names;
    group_names.reserve(group_ids.size());
    for (auto& [name, id] : group_ids) {
        id = static_cast<int>(group_names.size());
        group_names.push_back(name);
    }
    std::vector<int> group_index;
    group_index.reserve(rows.size());
    for (const auto& row : rows) group_index.push_back(group_ids.at(row.county));

    return fit_glmm_matrices(y, P, group_index, group_names, spec.predictors, controls);
}

std::vector<WaldRow> wald_table(const GlmmFit& fit) {
    std::vector<WaldRow> rows;
    rows.reserve(fit.coef_names.size());
    for (std::size_t j = 0; j < fit.coef_names.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        WaldRow row;
        row.name = fit.coef_names[j];
        row.estimate = fit.beta(i);
        row.se = fit.se(i);
        row.t = fit.t_stats(i);
        row.p = fit.p_values(i);
        row.exp_estimate = exp_coefficient(fit.beta(i));
        row.stars = significance_stars(fit.p_values(i));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace trl
