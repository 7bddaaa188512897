#include <gicselect/simulation.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace gicselect {

SimModel parse_model(std::string_view name)
{
    if (name == "linear") return SimModel::Linear;
    if (name == "logistic") return SimModel::Logistic;
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string to_string(SimModel model)
{
    return model == SimModel::Linear ? "linear" : "logistic";
}

int dimension_for(int n)
{
    if (n <= 20) throw std::invalid_argument("dimension schedule needs n > 20");
    return static_cast<int>(std::floor(std::exp(std::pow(static_cast<double>(n - 20), 0.37))));
}

int sparsity_for(SimModel model, int n)
{
    if (n < 100) throw std::invalid_argument("simulation schedules are anchored at n >= 100");
    const int step = model == SimModel::Linear ? 40 : 80;
    return 3 + (n - 100) / step;
}

Vector beta0_schedule(SimModel model, int n)
{
    const int p = dimension_for(n);
    const int s = sparsity_for(model, n);
    Vector beta = Vector::Zero(p);
    if (model == SimModel::Linear) {
        beta.head(5) << 3.0, 1.5, 0.0, 0.0, 2.0;
        for (int k = 0; k < s - 3; ++k) beta[5 + k] = 2.5;
    } else {
        beta.head(5) << -3.0, 1.5, 0.0, 0.0, -2.0;
        for (int k = 0; k < s - 3; ++k) beta[5 + k] = (k % 2 == 0) ? 2.0 : -2.0;
    }
    return beta;
}

SimDesign make_design(SimModel model, int n, std::uint64_t seed)
{
    SimDesign d;
    d.model = model;
    d.n = n;
    d.p = dimension_for(n);
    d.s = sparsity_for(model, n);
    d.beta0 = beta0_schedule(model, n);
    d.seed = seed;
    return d;
}

Family design_family(const SimDesign& design)
{
    return design.model == SimModel::Linear ? Family::gaussian(design.sigma * design.sigma)
                                            : Family::binomial();
}

SimData gen_dataset(const SimDesign& design)
{
    if (design.n < 100) throw std::invalid_argument("gen_dataset: n must be at least 100");
    if (design.beta0.size() != design.p) throw std::invalid_argument("gen_dataset: beta0 length must equal p");
    std::mt19937_64 rng(design.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Matrix raw(design.n, design.p);
    for (int i = 0; i < design.n; ++i) {
        for (int j = 0; j < design.p; ++j) raw(i, j) = normal(rng);
    }
    const Family family = design_family(design);
    // Standardize first; the response is generated from the standardized design.
    Dataset data = make_dataset(Family::gaussian(), raw, Vector::Zero(design.n));
    const Vector eta = data.x * design.beta0;
    if (design.model == SimModel::Linear) {
        for (int i = 0; i < design.n; ++i) data.y[i] = eta[i] + design.sigma * normal(rng);
    } else {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < design.n; ++i) {
            const double prob = 1.0 / (1.0 + std::exp(-eta[i]));
            data.y[i] = unif(rng) < prob ? 1.0 : 0.0;
        }
    }
    validate_response(family, data.y);
    DiagnosticsContext ctx = make_context(family, data.x, design.beta0);
    return {std::move(data), std::move(ctx)};
}

double model_error(const Vector& beta_hat, const Vector& beta0)
{
    if (beta_hat.size() != beta0.size()) throw std::invalid_argument("model_error: dimension mismatch");
    return (beta_hat - beta0).squaredNorm();
}

double model_error(const Vector& beta_hat, const Vector& beta0, const Matrix& sigma)
{
    if (beta_hat.size() != beta0.size() || sigma.rows() != beta0.size() || sigma.cols() != beta0.size()) {
        throw std::invalid_argument("model_error: dimension mismatch");
    }
    const Vector d = beta_hat - beta0;
    return d.dot(sigma * d);
}

std::string to_string(SupportClass c)
{
    switch (c) {
        case SupportClass::Exact: return "exact";
        case SupportClass::Overfit: return "overfit";
        case SupportClass::Underfit: return "underfit";
    }
    return "unknown";
}

SupportClass classify_support(const Support& selected, const Support& alpha0)
{
    if (selected == alpha0) return SupportClass::Exact;
    if (is_superset(selected, alpha0)) return SupportClass::Overfit;
    return SupportClass::Underfit;
}

StudyCriterion StudyCriterion::standard(CriterionKind kind)
{
    StudyCriterion c;
    c.name = to_string(kind);
    c.kind = kind;
    return c;
}

StudyCriterion StudyCriterion::fixed(std::string name, double a_n)
{
    StudyCriterion c;
    c.name = std::move(name);
    c.fixed_a_n = a_n;
    return c;
}

StudyCriterion StudyCriterion::truth_oracle()
{
    StudyCriterion c;
    c.name = "oracle";
    c.oracle = true;
    return c;
}

const SimCell* SimReport::find(int n, const std::string& penalty, const std::string& criterion) const
{
    for (const SimCell& c : cells) {
        if (c.n == n && c.penalty == penalty && c.criterion == criterion) return &c;
    }
    return nullptr;
}

std::string penalty_label(const PenaltySpec& spec)
{
    return to_string(spec.kind);
}

namespace {

struct Outcome
{
    bool ok = false;
    SupportClass cls = SupportClass::Underfit;
    int false_positives = 0;
    int false_negatives = 0;
    double relative_model_error = 0.0;
    double chosen_lambda = 0.0;
};

// outcomes[penalty][criterion] for one replication at one n.
using RepOutcome = std::vector<std::vector<Outcome>>;

int count_missing(const Support& from, const Support& in)
{
    int missing = 0;
    for (int j : from) {
        if (!std::binary_search(in.begin(), in.end(), j)) ++missing;
    }
    return missing;
}

RepOutcome run_replication(const StudyOptions& opt, int n, int rep)
{
    const SimDesign design = make_design(opt.model, n, opt.base_seed ^ static_cast<std::uint64_t>(rep));
    const Family family = design_family(design);
    RepOutcome out(opt.penalties.size(), std::vector<Outcome>(opt.criteria.size()));

    SimData sim;
    double oracle_error = 0.0;
    try {
        sim = gen_dataset(design);
        const RestrictedFit oracle_fit = restricted_mle(family, sim.data, sim.ctx.alpha0);
        oracle_error = model_error(oracle_fit.beta, design.beta0);
    } catch (const std::exception&) {
        return out;
    }
    const Support& alpha0 = sim.ctx.alpha0;

    for (std::size_t pi = 0; pi < opt.penalties.size(); ++pi) {
        PathFit path;
        try {
            path = fit_path(family, sim.data, opt.penalties[pi], opt.path);
        } catch (const std::exception&) {
            continue;
        }
        double deviance_scale = 1.0;
        if (opt.phi_mode == PhiMode::Plugin && family.kind == FamilyKind::Gaussian) {
            deviance_scale = family.scale_phi / plugin_dispersion(path, family, sim.data.n());
        }
        for (std::size_t ci = 0; ci < opt.criteria.size(); ++ci) {
            const StudyCriterion& crit = opt.criteria[ci];
            Outcome& o = out[pi][ci];
            try {
                Support selected;
                if (crit.oracle) {
                    selected = alpha0;
                    o.chosen_lambda = std::numeric_limits<double>::quiet_NaN();
                } else {
                    const double a_n = crit.kind ? complexity_constant(*crit.kind, sim.data.n(), sim.data.p())
                                                 : crit.fixed_a_n;
                    const SelectionReport rep_sel =
                        select_model(path, a_n, sim.data.n(), crit.name, deviance_scale);
                    selected = rep_sel.chosen_support;
                    o.chosen_lambda = rep_sel.chosen_lambda;
                }
                o.cls = classify_support(selected, alpha0);
                o.false_positives = count_missing(selected, alpha0);
                o.false_negatives = count_missing(alpha0, selected);
                if (selected == alpha0) {
                    o.relative_model_error = 1.0;
                } else {
                    try {
                        const RestrictedFit refit = restricted_mle(family, sim.data, selected);
                        o.relative_model_error = model_error(refit.beta, design.beta0) / oracle_error;
                    } catch (const NonExistenceError&) {
                        // Separated on the selected support: the refit diverges.
                        o.relative_model_error = std::numeric_limits<double>::infinity();
                    }
                }
                o.ok = true;
            } catch (const std::exception&) {
                o.ok = false;
            }
        }
    }
    return out;
}

double median(std::vector<double> v)
{
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SimReport run_study(const StudyOptions& opt)
{
    if (opt.reps < 1) throw std::invalid_argument("run_study: reps must be at least 1");
    if (opt.penalties.empty() || opt.criteria.empty() || opt.n_grid.empty()) {
        throw std::invalid_argument("run_study: need at least one n, penalty and criterion");
    }
    for (int n : opt.n_grid) {
        if (n < 100) throw std::invalid_argument("run_study: n must be at least 100");
    }

    const std::size_t tasks = opt.n_grid.size() * static_cast<std::size_t>(opt.reps);
    std::vector<RepOutcome> results(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t t = next++; t < tasks; t = next++) {
            const int n = opt.n_grid[t / static_cast<std::size_t>(opt.reps)];
            const int rep = static_cast<int>(t % static_cast<std::size_t>(opt.reps));
            results[t] = run_replication(opt, n, rep);
        }
    };
    const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(tasks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SimReport report;
    report.model = opt.model;
    report.base_seed = opt.base_seed;
    report.reps = opt.reps;
    report.phi_mode = opt.phi_mode == PhiMode::Known ? "known" : "plugin";
    for (std::size_t ni = 0; ni < opt.n_grid.size(); ++ni) {
        const int n = opt.n_grid[ni];
        for (std::size_t pi = 0; pi < opt.penalties.size(); ++pi) {
            for (std::size_t ci = 0; ci < opt.criteria.size(); ++ci) {
                SimCell cell;
                cell.n = n;
                cell.p = dimension_for(n);
                cell.s = sparsity_for(opt.model, n);
                cell.penalty = penalty_label(opt.penalties[pi]);
                cell.criterion = opt.criteria[ci].name;
                int exact = 0, over = 0, under = 0;
                double fp = 0.0, fn = 0.0;
                std::vector<double> rme, lambdas;
                for (int r = 0; r < opt.reps; ++r) {
                    const RepOutcome& ro = results[ni * static_cast<std::size_t>(opt.reps) + static_cast<std::size_t>(r)];
                    if (ro.empty() || !ro[pi][ci].ok) {
                        ++cell.failures;
                        continue;
                    }
                    const Outcome& o = ro[pi][ci];
                    ++cell.replications;
                    exact += o.cls == SupportClass::Exact;
                    over += o.cls == SupportClass::Overfit;
                    under += o.cls == SupportClass::Underfit;
                    fp += o.false_positives;
                    fn += o.false_negatives;
                    rme.push_back(o.relative_model_error);
                    lambdas.push_back(o.chosen_lambda);
                }
                if (cell.replications > 0) {
                    const double m = cell.replications;
                    cell.percent_correct = exact / m;
                    cell.overfit_rate = over / m;
                    cell.underfit_rate = under / m;
                    cell.mean_false_positives = fp / m;
                    cell.mean_false_negatives = fn / m;
                    cell.median_relative_model_error = median(rme);
                    cell.median_chosen_lambda = median(lambdas);
                } else {
                    cell.median_relative_model_error = std::numeric_limits<double>::quiet_NaN();
                    cell.median_chosen_lambda = std::numeric_limits<double>::quiet_NaN();
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

}  // namespace gicselect
