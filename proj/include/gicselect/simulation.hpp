#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gicselect/diagnostics.hpp>
#include <gicselect/path.hpp>

namespace gicselect {

enum class SimModel { Linear, Logistic };

SimModel parse_model(std::string_view name);
std::string to_string(SimModel model);

// p = floor(exp((n - 20)^0.37)).
int dimension_for(int n);
// Linear: 3 + floor((n - 100) / 40); logistic: 3 + floor((n - 100) / 80).
int sparsity_for(SimModel model, int n);

// Base pattern in coordinates 1-5, extra signals appended at 6, 7, ...
// (2.5 each for linear; alternating 2.0, -2.0 for logistic). Length p.
Vector beta0_schedule(SimModel model, int n);

struct SimDesign
{
    SimModel model = SimModel::Linear;
    int n = 100;
    int p = 0;
    int s = 0;
    Vector beta0;
    double sigma = 3.0;  // linear noise level
    std::uint64_t seed = 0;
};

SimDesign make_design(SimModel model, int n, std::uint64_t seed);

enum class PhiMode { Known, Plugin };

// Family used to fit a design: Gaussian with phi = sigma^2, or binomial.
Family design_family(const SimDesign& design);

struct SimData
{
    Dataset data;
    DiagnosticsContext ctx;
};

SimData gen_dataset(const SimDesign& design);

// (beta_hat - beta0)' Sigma (beta_hat - beta0); Sigma = I when omitted.
double model_error(const Vector& beta_hat, const Vector& beta0);
double model_error(const Vector& beta_hat, const Vector& beta0, const Matrix& sigma);

enum class SupportClass { Exact, Overfit, Underfit };

std::string to_string(SupportClass c);
SupportClass classify_support(const Support& selected, const Support& alpha0);

// Tuning-parameter selector used by a study.
struct StudyCriterion
{
    std::string name;
    std::optional<CriterionKind> kind;
    double fixed_a_n = 0.0;   // used when kind is empty
    bool oracle = false;      // picks the true support regardless of the path

    static StudyCriterion standard(CriterionKind kind);
    static StudyCriterion fixed(std::string name, double a_n);
    static StudyCriterion truth_oracle();
};

struct StudyOptions
{
    SimModel model = SimModel::Linear;
    std::vector<int> n_grid{100, 140, 180, 220, 260, 300, 340, 380, 420, 460, 500};
    std::vector<PenaltySpec> penalties{PenaltySpec::scad()};
    std::vector<StudyCriterion> criteria;
    int reps = 100;
    std::uint64_t base_seed = 0;
    int threads = 1;
    PhiMode phi_mode = PhiMode::Known;
    PathOptions path;
};

struct SimCell
{
    int n = 0;
    int p = 0;
    int s = 0;
    std::string penalty;
    std::string criterion;
    double percent_correct = 0.0;   // fraction in [0, 1]
    double overfit_rate = 0.0;
    double underfit_rate = 0.0;
    double mean_false_positives = 0.0;
    double mean_false_negatives = 0.0;
    double median_relative_model_error = 0.0;
    double median_chosen_lambda = 0.0;
    int replications = 0;           // successful replications
    int failures = 0;
};

struct SimReport
{
    SimModel model = SimModel::Linear;
    std::uint64_t base_seed = 0;
    int reps = 0;
    std::string phi_mode;
    std::vector<SimCell> cells;     // ordered by n, then penalty, then criterion

    const SimCell* find(int n, const std::string& penalty, const std::string& criterion) const;
};

std::string penalty_label(const PenaltySpec& spec);

// Replication r uses seed base_seed XOR r; replications run on options.threads workers.
SimReport run_study(const StudyOptions& options);

}  // namespace gicselect
