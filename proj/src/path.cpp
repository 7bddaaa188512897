#include <gicselect/path.hpp>

#include <gicselect/log.hpp>

#include <cctype>
#include <cmath>
#include <sstream>

namespace gicselect {

int default_support_cap(Eigen::Index n)
{
    return static_cast<int>(std::floor(3.0 * std::sqrt(static_cast<double>(n))));
}

std::vector<double> build_lambda_grid(double lambda_min, double lambda_max, int count)
{
    if (!(lambda_min > 0.0)) throw std::invalid_argument("lambda grid: lambda_min must be positive");
    if (!(lambda_max > lambda_min)) throw std::invalid_argument("lambda grid: lambda_max must exceed lambda_min");
    if (count < 2) throw std::invalid_argument("lambda grid: count must be at least 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double log_max = std::log(lambda_max);
    const double log_step = (std::log(lambda_min) - log_max) / (count - 1);
    for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = std::exp(log_max + k * log_step);
    grid.front() = lambda_max;
    grid.back() = lambda_min;
    return grid;
}

PathStepper::PathStepper(const Family& family, const Dataset& data, PenaltySpec spec,
                         SolverOptions options)
    : family_(family), data_(data), spec_(std::move(spec)), options_(options)
{
}

Fit PathStepper::step(double lambda)
{
    switch (spec_.kind) {
        case PenaltyKind::Lasso:
            prev_ = prev_ ? fit_penalized(family_, data_, spec_, lambda, *prev_, options_)
                          : fit_penalized(family_, data_, spec_, lambda, std::nullopt, options_);
            return *prev_;
        case PenaltyKind::SCAD:
        case PenaltyKind::MCP: {
            const PenaltySpec lasso = PenaltySpec::lasso();
            lasso_prev_ = lasso_prev_ ? fit_penalized(family_, data_, lasso, lambda, *lasso_prev_, options_)
                                      : fit_penalized(family_, data_, lasso, lambda, std::nullopt, options_);
            prev_ = fit_penalized(family_, data_, spec_, lambda, *lasso_prev_, options_);
            return *prev_;
        }
        case PenaltyKind::AdaptiveLasso: {
            if (lambda <= 0.0) {
                prev_ = fit_penalized(family_, data_, PenaltySpec::lasso(), lambda, std::nullopt, options_);
                return *prev_;
            }
            AdaptiveLassoFit stages = fit_adaptive_lasso_stages(
                family_, data_, lambda, options_, lasso_prev_ ? &*lasso_prev_ : nullptr, spec_.scad_a);
            lasso_prev_ = std::move(stages.lasso);
            prev_ = std::move(stages.adaptive);
            return *prev_;
        }
    }
    throw std::logic_error("unreachable penalty kind");
}

namespace {

bool is_saturated(const Family& family, const Fit& fit, const PathOptions& options)
{
    return family.kind == FamilyKind::Binomial && (fit.separated || fit.deviance <= options.saturation_deviance);
}

}  // namespace

double determine_lambda_min(const Family& family, const Dataset& data, const PenaltySpec& spec,
                            double lambda_max, const PathOptions& options)
{
    const int target = options.support_cap.value_or(default_support_cap(data.n()));
    if (!(lambda_max > 0.0)) {
        warn("lambda_max is zero; lambda_min set to zero");
        return 0.0;
    }
    PathStepper stepper(family, data, spec, options.solver);
    double lambda = lambda_max;
    while (true) {
        lambda *= options.descent_factor;
        if (lambda / lambda_max < options.floor_ratio) break;
        const Fit fit = stepper.step(lambda);
        if (static_cast<int>(fit.support.size()) >= target || is_saturated(family, fit, options)) return lambda;
    }
    std::ostringstream msg;
    msg << "support never reached " << target << " covariates; lambda_min = lambda_max * "
        << options.floor_ratio;
    warn(msg.str());
    return lambda_max * options.floor_ratio;
}

PathFit fit_path(const Family& family, const Dataset& data, const PenaltySpec& spec,
                 const PathOptions& options)
{
    PathFit path;
    path.support_cap = options.support_cap.value_or(default_support_cap(data.n()));
    path.lambda_max = compute_lambda_max(family, data, spec, options.solver);
    path.lambda_min = determine_lambda_min(family, data, spec, path.lambda_max, options);

    PathStepper stepper(family, data, spec, options.solver);
    if (!(path.lambda_max > 0.0)) {
        path.lambdas.push_back(0.0);
        path.fits.push_back(stepper.step(0.0));
        return path;
    }
    const std::vector<double> grid = build_lambda_grid(path.lambda_min, path.lambda_max, options.grid_count);
    for (double lambda : grid) {
        Fit fit;
        try {
            fit = stepper.step(lambda);
        } catch (const SolverError& e) {
            std::ostringstream msg;
            msg << "path fit failed at lambda = " << lambda << ": " << e.what();
            throw SolverError(msg.str(), lambda, e.objective_trace());
        }
        if (static_cast<int>(fit.support.size()) > path.support_cap) break;
        path.saturated = is_saturated(family, fit, options);
        path.lambdas.push_back(lambda);
        path.fits.push_back(std::move(fit));
        if (path.saturated) break;
    }
    return path;
}

CriterionKind parse_criterion(std::string_view name)
{
    if (name == "aic") return CriterionKind::AIC;
    if (name == "bic") return CriterionKind::BIC;
    if (name == "mbic") return CriterionKind::MBIC;
    if (name == "logp") return CriterionKind::LogP;
    if (name == "gic_lll") return CriterionKind::GicLLL;
    throw std::invalid_argument("unknown criterion '" + std::string(name) + "'");
}

std::string to_string(CriterionKind kind)
{
    switch (kind) {
        case CriterionKind::AIC: return "aic";
        case CriterionKind::BIC: return "bic";
        case CriterionKind::MBIC: return "mbic";
        case CriterionKind::LogP: return "logp";
        case CriterionKind::GicLLL: return "gic_lll";
    }
    return "unknown";
}

std::vector<CriterionKind> parse_criteria(std::string_view comma_list)
{
    std::vector<CriterionKind> out;
    std::size_t start = 0;
    while (start <= comma_list.size()) {
        const std::size_t end = std::min(comma_list.find(',', start), comma_list.size());
        std::string_view item = comma_list.substr(start, end - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (item.empty()) throw std::invalid_argument("empty criterion in list");
        out.push_back(parse_criterion(item));
        start = end + 1;
    }
    return out;
}

double complexity_constant(CriterionKind kind, Eigen::Index n, Eigen::Index p)
{
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(p);
    const bool needs_loglog = kind == CriterionKind::MBIC || kind == CriterionKind::GicLLL;
    const bool needs_logp = kind == CriterionKind::LogP || kind == CriterionKind::GicLLL;
    if (needs_loglog && n < 3) {
        throw std::invalid_argument(to_string(kind) + " needs n >= 3 so that log log n > 0");
    }
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    if (needs_logp && p < 2) throw std::invalid_argument(to_string(kind) + " needs p >= 2");
    switch (kind) {
        case CriterionKind::AIC: return 2.0;
        case CriterionKind::BIC: return std::log(dn);
        case CriterionKind::MBIC: return std::log(std::log(dn)) * std::log(dn);
        case CriterionKind::LogP: return std::log(dp);
        case CriterionKind::GicLLL: return std::log(std::log(dn)) * std::log(dp);
    }
    return 0.0;
}

SelectionReport select_model(const PathFit& path, double a_n, Eigen::Index n,
                             std::string criterion_name, double deviance_scale)
{
    if (path.fits.empty()) throw std::invalid_argument("select_model: empty path");
    SelectionReport report;
    report.criterion = std::move(criterion_name);
    report.a_n = a_n;
    const double dn = static_cast<double>(n);
    report.gic_values.reserve(path.fits.size());
    for (const Fit& fit : path.fits) {
        report.gic_values.push_back((deviance_scale * fit.deviance +
                                     a_n * static_cast<double>(fit.support.size())) / dn);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < path.fits.size(); ++i) {
        const double gi = report.gic_values[i];
        const double gb = report.gic_values[best];
        const double tol = 1e-12 * std::max(1.0, std::abs(gb));
        if (gi < gb - tol) {
            best = i;
        } else if (std::abs(gi - gb) <= tol) {
            const std::size_t si = path.fits[i].support.size();
            const std::size_t sb = path.fits[best].support.size();
            if (si < sb || (si == sb && path.lambdas[i] > path.lambdas[best])) best = i;
        }
    }
    report.chosen_index = static_cast<int>(best);
    report.chosen_lambda = path.lambdas[best];
    report.chosen_support = path.fits[best].support;
    return report;
}

SelectionReport select_model(const PathFit& path, CriterionKind kind, Eigen::Index n, Eigen::Index p,
                             double deviance_scale)
{
    return select_model(path, complexity_constant(kind, n, p), n, to_string(kind), deviance_scale);
}

double plugin_dispersion(const PathFit& path, const Family& family, Eigen::Index n)
{
    if (family.kind != FamilyKind::Gaussian) return 1.0;
    if (path.fits.empty()) throw std::invalid_argument("plugin_dispersion: empty path");
    std::size_t largest = 0;
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
        if (path.fits[i].support.size() >= path.fits[largest].support.size()) largest = i;
    }
    const double rss = path.fits[largest].deviance * family.scale_phi;
    return rss / static_cast<double>(n);
}

}  // namespace gicselect
