#include <gicselect/solver.hpp>

#include <gicselect/log.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace gicselect {

namespace {

double coordinate_level(const PenaltySpec& spec, double lambda, Eigen::Index j)
{
    if (spec.kind == PenaltyKind::AdaptiveLasso && spec.weights) {
        return lambda * (*spec.weights)[j];
    }
    return lambda;
}

double penalty_sum(const PenaltySpec& spec, double lambda, const Vector& beta)
{
    double total = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) {
            total += penalty_value(spec, coordinate_level(spec, lambda, j), std::abs(beta[j]));
        }
    }
    return total;
}

double objective_from_eta(const Family& family, const Dataset& data, const PenaltySpec& spec,
                          double lambda, const Vector& beta, const Vector& eta)
{
    const double n = static_cast<double>(data.n());
    return -log_likelihood_eta(family, data.y, eta) / n + penalty_sum(spec, lambda, beta);
}

bool all_finite(const Vector& v)
{
    return v.allFinite();
}

// Intercept-only maximum likelihood estimate on the linear-predictor scale.
double null_intercept(const Family& family, const Vector& y)
{
    const double ybar = y.mean();
    switch (family.kind) {
        case FamilyKind::Gaussian: return ybar;
        case FamilyKind::Binomial:
            if (ybar <= 0.0 || ybar >= 1.0) {
                throw std::domain_error("intercept-only binomial fit does not exist (constant response)");
            }
            return std::log(ybar / (1.0 - ybar));
        case FamilyKind::Poisson:
            if (ybar <= 0.0) {
                throw std::domain_error("intercept-only poisson fit does not exist (all-zero response)");
            }
            return std::log(ybar);
    }
    return 0.0;
}

void check_inputs(const Dataset& data, const PenaltySpec& spec, double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be finite and nonnegative");
    }
    spec.validate();
    if (spec.weights && spec.weights->size() != data.p()) {
        throw std::invalid_argument("adaptive weight vector length does not match p");
    }
}

Fit fit_core(const Family& family, const Dataset& data, const PenaltySpec& spec, double lambda,
             Vector beta, double b0, const SolverOptions& opt)
{
    check_inputs(data, spec, lambda);
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double phi = family.phi_eff();
    const Matrix& x = data.x;

    if (!opt.intercept) b0 = 0.0;
    Vector eta = x * beta;
    eta.array() += b0;
    if (!all_finite(eta)) {
        throw SolverError("non-finite linear predictor at warm start", lambda, {});
    }
    double obj = objective_from_eta(family, data, spec, lambda, beta, eta);
    std::vector<double> trace{obj};

    Fit fit;
    fit.lambda = lambda;

    Vector w(n), resid(n), curvature(p);
    Matrix wx(n, p);
    bool weights_fixed = false;
    std::vector<Eigen::Index> active;
    active.reserve(static_cast<std::size_t>(p));

    for (int outer = 0; outer < opt.max_outer; ++outer) {
        fit.outer_iters = outer + 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Cumulant c = cumulant(family, eta[i]);
            double var = c.d2b;
            if (family.kind == FamilyKind::Binomial) var = std::max(var, opt.binomial_weight_floor);
            w[i] = var / phi;
            resid[i] = (data.y[i] - c.db) / var;
        }
        // Gaussian working weights never change.
        if (!weights_fixed) {
            wx = x.array().colwise() * w.array();
            for (Eigen::Index j = 0; j < p; ++j) curvature[j] = wx.col(j).dot(x.col(j)) * inv_n;
            weights_fixed = family.kind == FamilyKind::Gaussian;
        }
        const double w_mean = w.sum() * inv_n;

        Vector next = beta;
        double next_b0 = b0;

        auto update = [&](Eigen::Index j) {
            const double v = curvature[j];
            if (!(v > 0.0)) return 0.0;
            const double g = wx.col(j).dot(resid) * inv_n + v * next[j];
            // Descend to the nearest local minimum rather than the global one, so
            // nonconvex coordinates stay in the basin of their warm start.
            const double nb = descent_threshold_update(spec, coordinate_level(spec, lambda, j), g, v, next[j]);
            const double d = nb - next[j];
            if (d != 0.0) {
                resid.noalias() -= d * x.col(j);
                next[j] = nb;
            }
            return std::abs(d);
        };
        auto update_intercept = [&]() {
            if (!opt.intercept) return 0.0;
            const double d = w.dot(resid) * inv_n / w_mean;
            resid.array() -= d;
            next_b0 += d;
            return std::abs(d);
        };
        auto full_sweep = [&]() {
            double change = update_intercept();
            for (Eigen::Index j = 0; j < p; ++j) change = std::max(change, update(j));
            return change;
        };
        auto active_sweep = [&]() {
            double change = update_intercept();
            for (Eigen::Index j : active) change = std::max(change, update(j));
            return change;
        };

        int sweeps = 0;
        while (sweeps < opt.max_inner_sweeps) {
            ++sweeps;
            if (full_sweep() < opt.tol_inner) break;
            active.clear();
            for (Eigen::Index j = 0; j < p; ++j) {
                if (next[j] != 0.0) active.push_back(j);
            }
            while (sweeps < opt.max_inner_sweeps) {
                ++sweeps;
                if (active_sweep() < opt.tol_inner) break;
            }
        }
        fit.inner_iters += sweeps;

        // Backtrack along the IRLS direction until the penalized objective does not increase.
        const Vector step = next - beta;
        const double step_b0 = next_b0 - b0;
        const double slack = 1e-14 * std::max(1.0, std::abs(obj));
        double t = 1.0;
        bool accepted = false;
        bool any_finite = false;
        Vector cand_beta, cand_eta;
        double cand_obj = obj;
        double first_increase = 0.0;
        for (int halving = 0; halving <= 50; ++halving, t *= 0.5) {
            cand_beta = beta + t * step;
            cand_eta = x * cand_beta;
            cand_eta.array() += b0 + t * step_b0;
            if (!all_finite(cand_eta)) continue;
            cand_obj = objective_from_eta(family, data, spec, lambda, cand_beta, cand_eta);
            if (!std::isfinite(cand_obj)) continue;
            if (!any_finite) first_increase = cand_obj - obj;
            any_finite = true;
            if (cand_obj <= obj + slack) {
                accepted = true;
                break;
            }
        }
        if (!any_finite) {
            throw SolverError("non-finite values during IRLS at lambda = " + std::to_string(lambda),
                              lambda, trace);
        }
        const double move = t * std::max(step.cwiseAbs().maxCoeff(), std::abs(step_b0));
        if (!accepted) {
            if (spec.convex() && first_increase > 1e-6 && step.cwiseAbs().maxCoeff() >= opt.tol_outer) {
                trace.push_back(obj + first_increase);
                throw SolverError("penalized objective increased during IRLS at lambda = " +
                                      std::to_string(lambda),
                                  lambda, trace);
            }
            // No descent available along the step: current iterate is stationary to working precision.
            fit.converged = step.cwiseAbs().maxCoeff() < std::sqrt(opt.tol_outer);
            break;
        }
        beta = std::move(cand_beta);
        b0 += t * step_b0;
        eta = std::move(cand_eta);
        obj = cand_obj;
        trace.push_back(obj);
        if (move < opt.tol_outer) {
            fit.converged = true;
            break;
        }
        if (family.kind == FamilyKind::Binomial && eta.cwiseAbs().maxCoeff() >= kBinomialEtaClamp) {
            fit.separated = true;
            break;
        }
    }

    for (Eigen::Index j = 0; j < p; ++j) {
        if (std::abs(beta[j]) < opt.zero_snap) beta[j] = 0.0;
    }
    eta = x * beta;
    eta.array() += b0;
    fit.beta = std::move(beta);
    fit.intercept = b0;
    fit.support = support_of(fit.beta);
    fit.deviance = deviance(family, mean_vector_eta(family, eta), data.y);
    fit.objective = objective_from_eta(family, data, spec, lambda, fit.beta, eta);
    if (!std::isfinite(fit.objective) || !std::isfinite(fit.deviance)) {
        throw SolverError("non-finite fit at lambda = " + std::to_string(lambda), lambda, trace);
    }
    return fit;
}

}  // namespace

Support support_of(const Vector& beta)
{
    Support s;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) s.push_back(static_cast<int>(j));
    }
    return s;
}

double penalized_objective(const Family& family, const Dataset& data, const PenaltySpec& spec,
                           double lambda, const Vector& beta, double intercept)
{
    if (beta.size() != data.p()) {
        throw std::invalid_argument("penalized_objective: coefficient length does not match p");
    }
    Vector eta = data.x * beta;
    eta.array() += intercept;
    return objective_from_eta(family, data, spec, lambda, beta, eta);
}

double compute_lambda_max(const Family& family, const Dataset& data, const PenaltySpec& spec,
                          const SolverOptions& options)
{
    const double eta0 = options.intercept ? null_intercept(family, data.y) : 0.0;
    const double mu0 = mean_from_eta(family, eta0);
    const Vector score = data.x.transpose() * (data.y.array() - mu0).matrix() /
                         (static_cast<double>(data.n()) * family.phi_eff());
    double lambda_max = 0.0;
    for (Eigen::Index j = 0; j < score.size(); ++j) {
        double s = std::abs(score[j]);
        if (spec.kind == PenaltyKind::AdaptiveLasso && spec.weights) {
            const double wj = (*spec.weights)[j];
            if (wj <= 0.0) continue;
            s /= wj;
        }
        lambda_max = std::max(lambda_max, s);
    }
    if (lambda_max == 0.0) {
        warn("score at the null model is zero; lambda_max = 0");
    }
    return lambda_max;
}

Fit fit_penalized(const Family& family, const Dataset& data, const PenaltySpec& spec, double lambda,
                  const std::optional<Vector>& warm_start, const SolverOptions& options)
{
    Vector beta = Vector::Zero(data.p());
    if (warm_start) {
        if (warm_start->size() != data.p()) {
            throw std::invalid_argument("warm start length does not match p");
        }
        beta = *warm_start;
    }
    const double b0 = options.intercept ? null_intercept(family, data.y) : 0.0;
    return fit_core(family, data, spec, lambda, std::move(beta), b0, options);
}

Fit fit_penalized(const Family& family, const Dataset& data, const PenaltySpec& spec, double lambda,
                  const Fit& warm_start, const SolverOptions& options)
{
    if (warm_start.beta.size() != data.p()) {
        throw std::invalid_argument("warm start length does not match p");
    }
    return fit_core(family, data, spec, lambda, warm_start.beta, warm_start.intercept, options);
}

AdaptiveLassoFit fit_adaptive_lasso_stages(const Family& family, const Dataset& data, double lambda,
                                           const SolverOptions& options, const Fit* lasso_warm,
                                           double scad_a)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("adaptive lasso requires lambda > 0");
    }
    AdaptiveLassoFit out;
    const PenaltySpec lasso = PenaltySpec::lasso();
    out.lasso = lasso_warm ? fit_penalized(family, data, lasso, lambda, *lasso_warm, options)
                           : fit_penalized(family, data, lasso, lambda, std::nullopt, options);

    const PenaltySpec scad = PenaltySpec::scad(scad_a);
    out.weights = Vector::Ones(data.p());
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double b = std::abs(out.lasso.beta[j]);
        if (b > 0.0) out.weights[j] = penalty_derivative(scad, lambda, b) / lambda;
    }
    out.adaptive = fit_penalized(family, data, PenaltySpec::adaptive_lasso(out.weights), lambda,
                                 out.lasso, options);
    return out;
}

Fit fit_adaptive_lasso(const Family& family, const Dataset& data, double lambda,
                       const SolverOptions& options)
{
    return fit_adaptive_lasso_stages(family, data, lambda, options).adaptive;
}

}  // namespace gicselect
