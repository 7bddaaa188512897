#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <gicselect/family.hpp>
#include <gicselect/penalty.hpp>

namespace gicselect {

struct SolverOptions
{
    double tol_outer = 1e-7;     // max coordinate change between IRLS steps
    double tol_inner = 1e-8;     // max coordinate change within coordinate descent
    int max_outer = 200;
    int max_inner_sweeps = 1000;
    double zero_snap = 1e-10;
    double binomial_weight_floor = 1e-5;
    bool intercept = false;      // unpenalized intercept, off for the simulation designs
};

// Penalized fit at one lambda. support lists j with beta_j != 0 after zero-snapping.
struct Fit
{
    double lambda = 0.0;
    Vector beta;
    double intercept = 0.0;
    Support support;
    double deviance = 0.0;
    double objective = 0.0;
    int outer_iters = 0;
    int inner_iters = 0;
    bool converged = false;
    // Binomial only: some |x_i'beta| reached the clamp, so the data are separated
    // on the current support and the iteration was stopped.
    bool separated = false;
};

class SolverError : public std::runtime_error
{
public:
    SolverError(const std::string& what, double lambda, std::vector<double> trace)
        : std::runtime_error(what), lambda_(lambda), trace_(std::move(trace))
    {
    }

    double lambda() const { return lambda_; }
    // Penalized objective after each accepted outer iteration.
    const std::vector<double>& objective_trace() const { return trace_; }

private:
    double lambda_;
    std::vector<double> trace_;
};

Support support_of(const Vector& beta);

// (1/n)[-l(beta) + n * sum_j p_lambda_j(|beta_j|)], lambda_j = w_j * lambda for
// adaptive weights.
double penalized_objective(const Family& family, const Dataset& data, const PenaltySpec& spec,
                           double lambda, const Vector& beta, double intercept = 0.0);

// Smallest lambda at which beta = 0 satisfies the subgradient conditions.
double compute_lambda_max(const Family& family, const Dataset& data, const PenaltySpec& spec,
                          const SolverOptions& options = {});

// IRLS outer loop with active-set coordinate descent on the weighted quadratic
// approximation. warm_start, when given, must have length p.
Fit fit_penalized(const Family& family, const Dataset& data, const PenaltySpec& spec,
                  double lambda, const std::optional<Vector>& warm_start = std::nullopt,
                  const SolverOptions& options = {});

// Warm start carrying the intercept as well as the coefficients.
Fit fit_penalized(const Family& family, const Dataset& data, const PenaltySpec& spec,
                  double lambda, const Fit& warm_start, const SolverOptions& options = {});

struct AdaptiveLassoFit
{
    Fit lasso;
    Vector weights;
    Fit adaptive;
};

// Two-stage re-weighted lasso: w_j = p'_SCAD(|beta_lasso_j|) / lambda (1 when
// beta_lasso_j = 0), then the weighted lasso at the same lambda.
AdaptiveLassoFit fit_adaptive_lasso_stages(const Family& family, const Dataset& data, double lambda,
                                           const SolverOptions& options = {},
                                           const Fit* lasso_warm = nullptr,
                                           double scad_a = 3.7);

Fit fit_adaptive_lasso(const Family& family, const Dataset& data, double lambda,
                       const SolverOptions& options = {});

}  // namespace gicselect
