#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gicselect/solver.hpp>

namespace gicselect {

struct PathOptions
{
    int grid_count = 200;
    double descent_factor = 0.95;    // lambda <- factor * lambda while searching for lambda_min
    double floor_ratio = 1e-4;       // stop searching once lambda / lambda_max drops below this
    std::optional<int> support_cap;  // defaults to floor(3 sqrt(n))
    // A binomial fit flagged as separated, or with deviance at or below this, ends
    // the path: smaller lambdas only add variables to a perfect fit.
    double saturation_deviance = 1e-2;
    SolverOptions solver;
};

struct PathFit
{
    std::vector<double> lambdas;  // strictly decreasing
    std::vector<Fit> fits;
    int support_cap = 0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    bool saturated = false;       // stopped at a separated binomial fit
};

int default_support_cap(Eigen::Index n);

// Geometric grid from lambda_max down to lambda_min inclusive.
std::vector<double> build_lambda_grid(double lambda_min, double lambda_max, int count);

// Warm-started fits along a decreasing lambda sequence. Nonconvex penalties are
// started from the lasso solution at the same lambda; the adaptive lasso runs its
// two stages with the lasso stage warm-started along the path.
class PathStepper
{
public:
    PathStepper(const Family& family, const Dataset& data, PenaltySpec spec, SolverOptions options);

    Fit step(double lambda);

private:
    const Family& family_;
    const Dataset& data_;
    PenaltySpec spec_;
    SolverOptions options_;
    std::optional<Fit> lasso_prev_;
    std::optional<Fit> prev_;
};

double determine_lambda_min(const Family& family, const Dataset& data, const PenaltySpec& spec,
                            double lambda_max, const PathOptions& options = {});

PathFit fit_path(const Family& family, const Dataset& data, const PenaltySpec& spec,
                 const PathOptions& options = {});

enum class CriterionKind { AIC, BIC, MBIC, LogP, GicLLL };

CriterionKind parse_criterion(std::string_view name);
std::string to_string(CriterionKind kind);
std::vector<CriterionKind> parse_criteria(std::string_view comma_list);

// Model-complexity constant a_n (natural logarithms).
double complexity_constant(CriterionKind kind, Eigen::Index n, Eigen::Index p);

struct SelectionReport
{
    std::string criterion;
    double a_n = 0.0;
    int chosen_index = 0;
    double chosen_lambda = 0.0;
    Support chosen_support;
    std::vector<double> gic_values;
};

// GIC(lambda) = (deviance_scale * D + a_n |support|) / n, minimized over the path.
// Ties go to the smaller support, then to the larger lambda.
SelectionReport select_model(const PathFit& path, double a_n, Eigen::Index n,
                             std::string criterion_name = "custom", double deviance_scale = 1.0);
SelectionReport select_model(const PathFit& path, CriterionKind kind, Eigen::Index n, Eigen::Index p,
                             double deviance_scale = 1.0);

// Plug-in Gaussian dispersion RSS / n from the largest model on the path.
double plugin_dispersion(const PathFit& path, const Family& family, Eigen::Index n);

}  // namespace gicselect
