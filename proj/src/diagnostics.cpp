#include <gicselect/diagnostics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace gicselect {

namespace {

Matrix gather_columns(const Matrix& x, const Support& support, bool intercept)
{
    const Eigen::Index k = static_cast<Eigen::Index>(support.size()) + (intercept ? 1 : 0);
    Matrix out(x.rows(), k);
    Eigen::Index c = 0;
    if (intercept) out.col(c++).setOnes();
    for (int j : support) out.col(c++) = x.col(j);
    return out;
}

void check_support(const Support& support, Eigen::Index p)
{
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 0 || support[i] >= p) {
            throw std::invalid_argument("support index " + std::to_string(support[i]) + " out of range");
        }
        if (i > 0 && support[i] <= support[i - 1]) {
            throw std::invalid_argument("support must be strictly increasing");
        }
    }
}

// Thin orthonormal basis of the column space; throws when columns are dependent.
Matrix orthonormal_basis(const Matrix& a)
{
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    if (qr.rank() < a.cols()) {
        throw RankDeficientError("design restricted to the support is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " < " + std::to_string(a.cols()) + ")");
    }
    return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

}  // namespace

RestrictedFit restricted_mle(const Family& family, const Matrix& x, const Vector& y,
                             const Support& support, const RestrictedOptions& opt)
{
    if (x.rows() != y.size()) throw std::invalid_argument("restricted_mle: dimension mismatch");
    check_support(support, x.cols());
    const Eigen::Index n = x.rows();
    const Matrix xa = gather_columns(x, support, opt.intercept);
    const Eigen::Index k = xa.cols();
    if (k >= n && k > 0) {
        throw RankDeficientError("support size " + std::to_string(k) + " must be below n = " +
                                 std::to_string(n));
    }

    RestrictedFit fit;
    fit.support = support;
    Vector coef = Vector::Zero(k);
    Vector eta = Vector::Zero(n);
    const double tol = opt.score_tol * static_cast<double>(n);

    auto loglik = [&](const Vector& e) { return log_likelihood_eta(family, y, e); };

    if (k == 0) {
        fit.converged = true;
    } else {
        if (Eigen::ColPivHouseholderQR<Matrix>(xa).rank() < k) {
            throw RankDeficientError("design restricted to the support is rank deficient");
        }
        double ll = loglik(eta);
        Vector mu(n), sd(n);
        for (int iter = 0; iter < opt.max_iter; ++iter) {
            fit.iterations = iter + 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                const Cumulant c = cumulant(family, eta[i]);
                mu[i] = c.db;
                sd[i] = std::sqrt(std::max(c.d2b, 1e-300));
            }
            const Vector resid = y - mu;
            if ((xa.transpose() * resid).cwiseAbs().maxCoeff() <= tol) {
                fit.converged = true;
                break;
            }
            // Newton step: weighted least squares of resid / b'' on X_a with weights b''.
            const Matrix wa = sd.asDiagonal() * xa;
            const Vector rhs = resid.cwiseQuotient(sd);
            const Vector step = wa.colPivHouseholderQr().solve(rhs);
            double t = 1.0;
            bool improved = false;
            Vector cand, cand_eta;
            for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
                cand = coef + t * step;
                cand_eta = xa * cand;
                if (!cand_eta.allFinite()) continue;
                const double cll = loglik(cand_eta);
                if (std::isfinite(cll) && cll >= ll - 1e-12 * std::max(1.0, std::abs(ll))) {
                    ll = cll;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
            coef = std::move(cand);
            eta = std::move(cand_eta);
            if (family.kind != FamilyKind::Gaussian && !opt.allow_separation &&
                coef.cwiseAbs().maxCoeff() > opt.divergence_bound) {
                throw NonExistenceError("restricted MLE diverges (|beta| > " +
                                        std::to_string(opt.divergence_bound) +
                                        "); likely separation, the MLE does not exist");
            }
        }
    }

    if (family.kind == FamilyKind::Binomial && k > 0 && !opt.allow_separation) {
        if (eta.cwiseAbs().maxCoeff() >= kBinomialEtaClamp) {
            throw NonExistenceError("fitted linear predictor reaches the clamp; the data are separated");
        }
        // A fit that classifies every binary response correctly is itself a
        // separating hyperplane, so no finite maximizer exists.
        bool binary = true, perfect = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            binary = binary && (y[i] == 0.0 || y[i] == 1.0);
            perfect = perfect && (y[i] == 1.0 ? eta[i] > 0.0 : eta[i] < 0.0);
        }
        if (binary && perfect) {
            throw NonExistenceError("the support separates the binary responses completely");
        }
    }

    fit.beta = Vector::Zero(x.cols());
    Eigen::Index c = 0;
    if (opt.intercept) fit.intercept = coef[c++];
    for (int j : support) fit.beta[j] = coef[c++];
    fit.deviance = deviance(family, mean_vector_eta(family, eta), y);
    return fit;
}

RestrictedFit restricted_mle(const Family& family, const Dataset& data, const Support& support,
                             const RestrictedOptions& options)
{
    return restricted_mle(family, data.x, data.y, support, options);
}

double gic_star_value(const Family& family, const Dataset& data, const Support& support, double a_n,
                      const RestrictedOptions& options)
{
    const RestrictedFit fit = restricted_mle(family, data, support, options);
    return (fit.deviance + a_n * static_cast<double>(support.size())) / static_cast<double>(data.n());
}

DiagnosticsContext make_context(const Family& family, const Matrix& x, const Vector& beta0)
{
    if (beta0.size() != x.cols()) throw std::invalid_argument("make_context: beta0 length does not match p");
    DiagnosticsContext ctx;
    ctx.beta0 = beta0;
    for (Eigen::Index j = 0; j < beta0.size(); ++j) {
        if (beta0[j] != 0.0) ctx.alpha0.push_back(static_cast<int>(j));
    }
    const Vector eta0 = x * beta0;
    ctx.h0.resize(eta0.size());
    for (Eigen::Index i = 0; i < eta0.size(); ++i) {
        ctx.h0[i] = variance_from_eta(family, eta0[i]) / family.phi_eff();
    }
    return ctx;
}

bool is_superset(const Support& alpha, const Support& base)
{
    return std::includes(alpha.begin(), alpha.end(), base.begin(), base.end());
}

Vector population_minimizer(const Family& family, const Matrix& x, const Vector& beta0,
                            const Support& alpha)
{
    if (beta0.size() != x.cols()) throw std::invalid_argument("population_minimizer: beta0 length mismatch");
    check_support(alpha, x.cols());
    Support alpha0;
    for (Eigen::Index j = 0; j < beta0.size(); ++j) {
        if (beta0[j] != 0.0) alpha0.push_back(static_cast<int>(j));
    }
    if (is_superset(alpha, alpha0)) {
        if (!alpha.empty() && Eigen::ColPivHouseholderQR<Matrix>(gather_columns(x, alpha, false)).rank() <
                                  static_cast<Eigen::Index>(alpha.size())) {
            throw RankDeficientError("design restricted to the support is rank deficient");
        }
        return beta0;
    }
    if (static_cast<Eigen::Index>(alpha.size()) >= x.rows()) {
        // |alpha| = n with full rank spans R^n, so the truth is reproduced exactly.
        const Matrix xa = gather_columns(x, alpha, false);
        Eigen::ColPivHouseholderQR<Matrix> qr(xa);
        if (qr.rank() < xa.cols()) {
            throw RankDeficientError("design restricted to the support is rank deficient");
        }
        const Vector coef = qr.solve(Vector(x * beta0));
        Vector beta = Vector::Zero(x.cols());
        for (std::size_t i = 0; i < alpha.size(); ++i) beta[alpha[i]] = coef[static_cast<Eigen::Index>(i)];
        return beta;
    }
    RestrictedOptions opt;
    // Noiseless means never separate, but large true signals can push coefficients far.
    opt.divergence_bound = 1e6;
    return restricted_mle(family, x, mean_vector_eta(family, x * beta0), alpha, opt).beta;
}

double kl_divergence(const Family& family, const Matrix& x, const Vector& beta0, const Vector& beta)
{
    if (beta0.size() != x.cols() || beta.size() != x.cols()) {
        throw std::invalid_argument("kl_divergence: coefficient length does not match p");
    }
    const Vector eta0 = x * beta0;
    const Vector eta = x * beta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta0.size(); ++i) {
        const Cumulant c0 = cumulant(family, eta0[i]);
        const Cumulant c = cumulant(family, eta[i]);
        // Each term is a Bregman divergence of the convex cumulant, hence nonnegative.
        total += std::max(0.0, c0.db * (eta0[i] - eta[i]) - c0.b + c.b);
    }
    return total / family.phi_eff();
}

namespace {

std::uint64_t count_models(Eigen::Index p, int max_size, std::uint64_t limit)
{
    std::uint64_t total = 0;
    long double binom = 1.0L;
    for (int k = 0; k <= max_size && k <= p; ++k) {
        if (k > 0) binom = binom * static_cast<long double>(p - k + 1) / k;
        if (binom > static_cast<long double>(limit)) return limit + 1;
        total += static_cast<std::uint64_t>(std::llround(binom));
        if (total > limit) return limit + 1;
    }
    return total;
}

template <class Visit>
void for_each_subset(int p, int max_size, Visit&& visit)
{
    Support idx;
    for (int k = 0; k <= std::min(max_size, p); ++k) {
        idx.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            visit(idx);
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int m = i + 1; m < k; ++m) {
                idx[static_cast<std::size_t>(m)] = idx[static_cast<std::size_t>(m - 1)] + 1;
            }
        }
    }
}

}  // namespace

DeltaResult delta_min(const Family& family, const Matrix& x, const Vector& beta0, int max_size)
{
    if (max_size < 0) throw std::invalid_argument("delta_min: K must be nonnegative");
    const std::uint64_t models = count_models(x.cols(), max_size, kDeltaEnumerationLimit);
    if (models > kDeltaEnumerationLimit) {
        throw std::invalid_argument("delta_min: more than 10^6 candidate supports; use the sampling "
                                    "estimator (delta_min_sampled), which is approximate");
    }
    const DiagnosticsContext ctx = make_context(family, x, beta0);
    const double n = static_cast<double>(x.rows());
    DeltaResult result;
    result.delta = std::numeric_limits<double>::infinity();
    for_each_subset(static_cast<int>(x.cols()), max_size, [&](const Support& alpha) {
        if (is_superset(alpha, ctx.alpha0)) return;
        const Vector beta_star = population_minimizer(family, x, beta0, alpha);
        const double value = kl_divergence(family, x, beta0, beta_star) / n;
        ++result.models_evaluated;
        if (value < result.delta) {
            result.delta = value;
            result.argmin = alpha;
        }
    });
    return result;
}

DeltaResult delta_min_sampled(const Family& family, const Matrix& x, const Vector& beta0, int max_size,
                              std::uint64_t samples, std::uint64_t seed)
{
    if (max_size < 0) throw std::invalid_argument("delta_min_sampled: K must be nonnegative");
    const DiagnosticsContext ctx = make_context(family, x, beta0);
    const int p = static_cast<int>(x.cols());
    const double n = static_cast<double>(x.rows());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size_dist(0, std::min(max_size, p));
    std::vector<int> pool(static_cast<std::size_t>(p));
    DeltaResult result;
    result.approximate = true;
    result.delta = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < samples; ++s) {
        const int k = size_dist(rng);
        for (int j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j;
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, p - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
        }
        Support alpha(pool.begin(), pool.begin() + k);
        std::sort(alpha.begin(), alpha.end());
        if (is_superset(alpha, ctx.alpha0)) continue;
        const double value = kl_divergence(family, x, beta0, population_minimizer(family, x, beta0, alpha)) / n;
        ++result.models_evaluated;
        if (value < result.delta) {
            result.delta = value;
            result.argmin = std::move(alpha);
        }
    }
    return result;
}

double projection_quadform(const Family& family, const Dataset& data, const DiagnosticsContext& ctx,
                           const Support& alpha)
{
    check_support(alpha, data.p());
    if (!is_superset(alpha, ctx.alpha0)) {
        throw std::invalid_argument("projection_quadform: alpha must contain the true support");
    }
    if (ctx.h0.size() != data.n()) throw std::invalid_argument("projection_quadform: context size mismatch");
    const double phi = family.phi_eff();
    const Vector mu0 = mean_vector(family, data, ctx.beta0);
    const Vector sqrt_h = ctx.h0.cwiseSqrt();
    // Residual standardized by Var(y_i) = phi * b''(eta0_i) = phi^2 * h0_i.
    const Vector r = (data.y - mu0).cwiseQuotient(phi * sqrt_h);

    auto quad = [&](const Support& s) {
        if (s.empty()) return 0.0;
        const Matrix weighted = sqrt_h.asDiagonal() * gather_columns(data.x, s, false);
        return (orthonormal_basis(weighted).transpose() * r).squaredNorm();
    };
    return quad(alpha) - quad(ctx.alpha0);
}

IdentityCheck verify_gaussian_deviance_identity(const Family& family, const Dataset& data,
                                                const DiagnosticsContext& ctx, const Support& alpha)
{
    if (family.kind != FamilyKind::Gaussian) {
        throw std::invalid_argument("deviance identity holds only for the Gaussian family");
    }
    IdentityCheck check;
    const RestrictedFit full = restricted_mle(family, data, alpha);
    const RestrictedFit base = restricted_mle(family, data, ctx.alpha0);
    check.lhs = full.deviance - base.deviance;
    check.rhs = -projection_quadform(family, data, ctx, alpha);
    check.gap = std::abs(check.lhs - check.rhs);
    return check;
}

}  // namespace gicselect
