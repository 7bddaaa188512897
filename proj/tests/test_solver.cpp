#include <doctest.h>

#include <gicselect/diagnostics.hpp>
#include <gicselect/solver.hpp>

#include "helpers.hpp"

#include <random>

using namespace gicselect;
using testing_support::draw_response;
using testing_support::standardized_matrix;

namespace {

Matrix orthogonal_design(std::mt19937_64& rng, int n, int p)
{
    const Matrix g = testing_support::gaussian_matrix(rng, n, p);
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ()).leftCols(p) * std::sqrt(double(n));
}

// Largest violation of the lasso subgradient conditions.
double kkt_residual(const Family& f, const Dataset& d, const Fit& fit, const Vector& lambdas)
{
    const Vector eta = d.x * fit.beta + Vector::Constant(d.n(), fit.intercept);
    const Vector grad = d.x.transpose() * (d.y - mean_vector_eta(f, eta)) / (double(d.n()) * f.phi_eff());
    double worst = 0.0;
    for (Eigen::Index j = 0; j < d.p(); ++j) {
        if (fit.beta[j] != 0.0) {
            worst = std::max(worst, std::abs(grad[j] - lambdas[j] * (fit.beta[j] > 0 ? 1.0 : -1.0)));
        } else {
            worst = std::max(worst, std::abs(grad[j]) - lambdas[j]);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("orthogonal design lasso equals coordinatewise soft thresholding")
{
    std::mt19937_64 rng(1);
    const int n = 60, p = 8;
    const Matrix x = orthogonal_design(rng, n, p);
    Vector beta0(p);
    beta0 << 2.0, -1.0, 0.5, 0.0, 0.0, 0.3, 0.0, -0.2;
    const Family f = Family::gaussian(1.0);
    const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0));
    const Vector z = x.transpose() * d.y / double(n);
    for (double lam : {1.5, 0.6, 0.2, 0.05, 0.0}) {
        const Fit fit = fit_penalized(f, d, PenaltySpec::lasso(), lam);
        for (int j = 0; j < p; ++j) CHECK(std::abs(fit.beta[j] - soft_threshold(z[j], lam)) <= 1e-6);
    }
}

TEST_CASE("lasso fits satisfy the KKT conditions")
{
    std::mt19937_64 rng(2);
    const int n = 80, p = 30;
    const Matrix x = standardized_matrix(rng, n, p);
    Vector beta0 = Vector::Zero(p);
    beta0.head(3) << 1.0, -0.8, 0.6;
    for (const Family& f : {Family::gaussian(2.0), Family::binomial(), Family::poisson()}) {
        const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0 * 0.5));
        const double lmax = compute_lambda_max(f, d, PenaltySpec::lasso());
        for (double frac : {0.7, 0.3, 0.1}) {
            const Fit fit = fit_penalized(f, d, PenaltySpec::lasso(), frac * lmax);
            CHECK(fit.converged);
            CHECK(kkt_residual(f, d, fit, Vector::Constant(p, frac * lmax)) <= 1e-6);
        }
    }
}

TEST_CASE("lambda_max gives the empty model and anything below does not")
{
    std::mt19937_64 rng(3);
    const Matrix x = standardized_matrix(rng, 50, 10);
    const Family f = Family::binomial();
    Vector beta0 = Vector::Zero(10);
    beta0[0] = 1.5;
    const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0));
    const double lmax = compute_lambda_max(f, d, PenaltySpec::lasso());
    // Independent: the largest absolute score at beta = 0 over n.
    const Vector score = x.transpose() * (d.y - Vector::Constant(50, 0.5)) / 50.0;
    CHECK(lmax == doctest::Approx(score.cwiseAbs().maxCoeff()));
    CHECK(fit_penalized(f, d, PenaltySpec::scad(), lmax).support.empty());
    CHECK_FALSE(fit_penalized(f, d, PenaltySpec::lasso(), 0.9 * lmax).support.empty());
}

TEST_CASE("lasso solution does not depend on the warm start")
{
    std::mt19937_64 rng(4);
    const Matrix x = standardized_matrix(rng, 70, 20);
    Vector beta0 = Vector::Zero(20);
    beta0.head(2) << 1.0, 1.0;
    const Family f = Family::poisson();
    const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0 * 0.4));
    const double lam = 0.2 * compute_lambda_max(f, d, PenaltySpec::lasso());
    const Fit cold = fit_penalized(f, d, PenaltySpec::lasso(), lam);
    const Fit warm = fit_penalized(f, d, PenaltySpec::lasso(), lam, Vector(Vector::Constant(20, 0.3)));
    CHECK((cold.beta - warm.beta).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(cold.objective == doctest::Approx(warm.objective).epsilon(1e-10));
}

TEST_CASE("unpenalized fit equals the restricted maximum likelihood estimate")
{
    std::mt19937_64 rng(5);
    const int n = 120, p = 6;
    const Matrix x = standardized_matrix(rng, n, p);
    Vector beta0(p);
    beta0 << 0.5, -0.3, 0.2, 0.0, 0.1, -0.2;
    Support all(p);
    for (int j = 0; j < p; ++j) all[j] = j;
    for (const Family& f : {Family::gaussian(1.0), Family::binomial(), Family::poisson()}) {
        const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0));
        const Fit fit = fit_penalized(f, d, PenaltySpec::lasso(), 0.0);
        const RestrictedFit mle = restricted_mle(f, d, all);
        CHECK((fit.beta - mle.beta).cwiseAbs().maxCoeff() <= 1e-6);
    }
    // Gaussian normal equations as an independent check.
    const Family g = Family::gaussian(1.0);
    const Dataset d = make_standardized_dataset(g, x, draw_response(rng, g, x * beta0));
    const Vector ls = (x.transpose() * x).ldlt().solve(x.transpose() * d.y);
    CHECK((fit_penalized(g, d, PenaltySpec::scad(), 0.0).beta - ls).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("nonconvex penalties never do worse than their lasso start")
{
    std::mt19937_64 rng(6);
    const Matrix x = standardized_matrix(rng, 60, 40);
    Vector beta0 = Vector::Zero(40);
    beta0.head(3) << 3.0, 1.5, -2.0;
    const Family f = Family::gaussian(1.0);
    const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0));
    const double lam = 0.3;
    const Fit lasso = fit_penalized(f, d, PenaltySpec::lasso(), lam);
    for (const PenaltySpec& spec : {PenaltySpec::scad(), PenaltySpec::mcp()}) {
        const Fit fit = fit_penalized(f, d, spec, lam, lasso);
        CHECK(fit.objective <= penalized_objective(f, d, spec, lam, lasso.beta) + 1e-12);
        for (int j : {0, 1, 2}) {
            // Strong signals escape the lasso's shrinkage.
            CHECK(std::abs(fit.beta[j]) > std::abs(lasso.beta[j]));
        }
    }
}

TEST_CASE("adaptive lasso weights come from the SCAD derivative")
{
    std::mt19937_64 rng(7);
    const Matrix x = standardized_matrix(rng, 80, 15);
    Vector beta0 = Vector::Zero(15);
    beta0.head(2) << 4.0, -3.0;
    const Family f = Family::gaussian(1.0);
    const Dataset d = make_standardized_dataset(f, x, draw_response(rng, f, x * beta0));
    const double lam = 0.4;
    const AdaptiveLassoFit st = fit_adaptive_lasso_stages(f, d, lam);
    for (int j = 0; j < 15; ++j) {
        const double b = std::abs(st.lasso.beta[j]);
        const double expected = b == 0.0 ? 1.0 : penalty_derivative(PenaltySpec::scad(), lam, b) / lam;
        CHECK(st.weights[j] == doctest::Approx(expected));
    }
    // Large lasso coefficients get zero weight, so the refit is unshrunk there.
    CHECK(st.weights[0] == 0.0);
    CHECK(kkt_residual(f, d, st.adaptive, st.weights * lam) <= 1e-6);
    CHECK(fit_adaptive_lasso(f, d, lam).beta.isApprox(st.adaptive.beta));
}

TEST_CASE("solver rejects bad arguments")
{
    std::mt19937_64 rng(8);
    const Matrix x = standardized_matrix(rng, 10, 3);
    const Dataset d = make_standardized_dataset(Family::gaussian(), x, Vector::Zero(10));
    CHECK_THROWS_AS(fit_penalized(Family::gaussian(), d, PenaltySpec::lasso(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_penalized(Family::gaussian(), d, PenaltySpec::lasso(), 0.1, Vector(Vector::Zero(2))),
                    std::invalid_argument);
}
