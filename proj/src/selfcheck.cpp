#include <gicselect/selfcheck.hpp>

#include <gicselect/diagnostics.hpp>

#include <cmath>
#include <random>

namespace gicselect {

namespace {

Matrix random_design(std::mt19937_64& rng, int n, int p)
{
    std::normal_distribution<double> normal;
    Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) x(i, j) = normal(rng);
    }
    return make_dataset(Family::gaussian(), x, Vector::Zero(n)).x;
}

Vector random_coef(std::mt19937_64& rng, int p, double scale)
{
    std::normal_distribution<double> normal(0.0, scale);
    Vector b(p);
    for (int j = 0; j < p; ++j) b[j] = normal(rng);
    return b;
}

CheckResult check(std::string name, double value, double expected, double tolerance, std::string detail)
{
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.expected = expected;
    r.tolerance = tolerance;
    r.passed = std::abs(value - expected) <= tolerance;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

std::vector<CheckResult> run_diagnostic_suite(std::uint64_t seed)
{
    std::vector<CheckResult> results;
    std::mt19937_64 rng(seed);

    {
        Matrix x(2, 2);
        x << std::sqrt(2.0), 0.0, 0.0, std::sqrt(2.0);
        const Vector beta0 = Vector::Ones(2);
        const DeltaResult d = delta_min(Family::gaussian(1.0), x, beta0, 2);
        results.push_back(check("toy_delta_n", d.delta, 0.5, 1e-12,
                                "n = 2, orthogonal columns of norm sqrt(2), beta0 = (1, 1), K = 2"));
    }

    for (const Family& family : {Family::gaussian(1.0), Family::binomial(), Family::poisson()}) {
        const Matrix x = random_design(rng, 30, 5);
        const Vector beta0 = random_coef(rng, 5, 0.3);
        results.push_back(check("kl_at_truth_" + to_string(family.kind), kl_divergence(family, x, beta0, beta0),
                                0.0, 0.0, "I(beta0) must vanish exactly"));
    }

    {
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const double phi = 0.5 + 4.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const Matrix x = random_design(rng, 20, 5);
            const Vector b0 = random_coef(rng, 5, 1.0);
            const Vector b = random_coef(rng, 5, 1.0);
            const double closed = (x * (b0 - b)).squaredNorm() / (2.0 * phi);
            worst = std::max(worst, std::abs(kl_divergence(Family::gaussian(phi), x, b0, b) - closed));
        }
        results.push_back(check("gaussian_kl_closed_form", worst, 0.0, 1e-10,
                                "max |I - ||X(beta0 - beta)||^2 / (2 phi)| over 200 instances"));
    }

    {
        const Family family = Family::gaussian(1.0);
        std::normal_distribution<double> normal;
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const Matrix x = random_design(rng, 50, 8);
            Vector beta0 = Vector::Zero(8);
            beta0[0] = 1.5;
            beta0[1] = -2.0;
            Vector y = x * beta0;
            for (int i = 0; i < 50; ++i) y[i] += normal(rng);
            const Dataset data = make_standardized_dataset(family, x, y);
            const DiagnosticsContext ctx = make_context(family, x, beta0);
            worst = std::max(worst, verify_gaussian_deviance_identity(family, data, ctx, {0, 1, 4, 6}).gap);
        }
        results.push_back(check("gaussian_deviance_identity", worst, 0.0, 1e-7,
                                "max |D(alpha) - D(alpha0) + Z_alpha| over 50 nested instances"));
    }

    {
        const Family family = Family::gaussian(1.0);
        std::normal_distribution<double> normal;
        const Matrix x = random_design(rng, 50, 6);
        Vector beta0 = Vector::Zero(6);
        beta0[0] = 1.0;
        beta0[1] = 2.0;
        const DiagnosticsContext ctx = make_context(family, x, beta0);
        const Support alpha{0, 1, 2, 3, 4};
        const int draws = 1000;
        double sum = 0.0, sum_sq = 0.0;
        for (int t = 0; t < draws; ++t) {
            Vector y = x * beta0;
            for (int i = 0; i < 50; ++i) y[i] += normal(rng);
            const double z = projection_quadform(family, make_standardized_dataset(family, x, y), ctx, alpha);
            sum += z;
            sum_sq += z * z;
        }
        const double mean = sum / draws;
        const double sd = std::sqrt((sum_sq - draws * mean * mean) / (draws - 1));
        results.push_back(check("z_alpha_chi_square_mean", mean, 3.0, 3.0 * sd / std::sqrt(double(draws)),
                                "Monte-Carlo mean of Z_alpha vs |alpha| - |alpha0| = 3, 3 standard errors"));
    }
    return results;
}

}  // namespace gicselect
