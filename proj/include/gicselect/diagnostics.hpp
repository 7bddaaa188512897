#pragma once

#include <cstdint>
#include <stdexcept>

#include <gicselect/family.hpp>

namespace gicselect {

class RankDeficientError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The restricted MLE does not exist (binomial separation or divergent coefficients).
class NonExistenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RestrictedOptions
{
    double score_tol = 1e-8;        // converged when ||X_a'(y - mu)||_inf <= score_tol * n
    int max_iter = 100;
    int max_halvings = 50;
    double divergence_bound = 30.0;
    // Keep iterating through separation and report the last iterate; its deviance
    // then bounds the infimum from above instead of raising NonExistenceError.
    bool allow_separation = false;
    bool intercept = false;
};

struct RestrictedFit
{
    Support support;
    Vector beta;                    // length p, zero off the support
    double intercept = 0.0;
    double deviance = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Unpenalized MLE with coefficients restricted to `support`.
RestrictedFit restricted_mle(const Family& family, const Dataset& data, const Support& support,
                             const RestrictedOptions& options = {});

// Same Newton iteration on an arbitrary (design, response) pair; the response
// may be a mean vector rather than observed data.
RestrictedFit restricted_mle(const Family& family, const Matrix& x, const Vector& y,
                             const Support& support, const RestrictedOptions& options = {});

// GIC*(alpha) = (D(mu*_alpha; y) + a_n |alpha|) / n.
double gic_star_value(const Family& family, const Dataset& data, const Support& support, double a_n,
                      const RestrictedOptions& options = {});

struct DiagnosticsContext
{
    Vector beta0;
    Support alpha0;
    Vector h0;  // b''(x_i'beta0) / phi
};

DiagnosticsContext make_context(const Family& family, const Matrix& x, const Vector& beta0);

bool is_superset(const Support& alpha, const Support& base);

// Minimizer over supp(beta) = alpha of the KL divergence to the truth; returns
// beta0 itself whenever alpha contains supp(beta0).
Vector population_minimizer(const Family& family, const Matrix& x, const Vector& beta0,
                            const Support& alpha);

// I(beta) = sum_i {b'(eta0_i)(eta0_i - eta_i) - b(eta0_i) + b(eta_i)} / phi.
double kl_divergence(const Family& family, const Matrix& x, const Vector& beta0, const Vector& beta);

struct DeltaResult
{
    double delta = 0.0;
    Support argmin;
    std::uint64_t models_evaluated = 0;
    bool approximate = false;       // true for the sampling estimator
};

inline constexpr std::uint64_t kDeltaEnumerationLimit = 1'000'000;

// Exact minimum of I(beta*(alpha)) / n over alpha not containing alpha0, |alpha| <= K.
DeltaResult delta_min(const Family& family, const Matrix& x, const Vector& beta0, int max_size);

// Approximate delta_n from uniformly sampled supports; an upper bound on the exact value.
DeltaResult delta_min_sampled(const Family& family, const Matrix& x, const Vector& beta0, int max_size,
                              std::uint64_t samples, std::uint64_t seed);

// Z_alpha = r'(B_alpha - B_alpha0) r with r the standardized residual y - mu0.
double projection_quadform(const Family& family, const Dataset& data, const DiagnosticsContext& ctx,
                           const Support& alpha);

struct IdentityCheck
{
    double lhs = 0.0;   // D(mu*_alpha; y) - D(mu*_alpha0; y)
    double rhs = 0.0;   // -Z_alpha
    double gap = 0.0;
};

IdentityCheck verify_gaussian_deviance_identity(const Family& family, const Dataset& data,
                                                const DiagnosticsContext& ctx, const Support& alpha);

}  // namespace gicselect
