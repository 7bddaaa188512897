#include <doctest.h>

#include <gicselect/penalty.hpp>

#include <cmath>
#include <random>

using namespace gicselect;

namespace {

double scalar_objective(const PenaltySpec& spec, double lambda, double z, double v, double b)
{
    return 0.5 * v * b * b - z * b + penalty_value(spec, lambda, std::abs(b));
}

double grid_minimum(const PenaltySpec& spec, double lambda, double z, double v)
{
    double best = INFINITY;
    for (int k = -50000; k <= 50000; ++k) {
        best = std::min(best, scalar_objective(spec, lambda, z, v, k * 1e-4));
    }
    return best;
}

}  // namespace

TEST_CASE("penalty values at hand-computed points")
{
    const double lam = 1.0;
    CHECK(penalty_value(PenaltySpec::lasso(), lam, 2.0) == doctest::Approx(2.0));
    // SCAD: linear up to lambda, quadratic blend to a*lambda, constant (a+1)lambda^2/2 after.
    CHECK(penalty_value(PenaltySpec::scad(), lam, 0.5) == doctest::Approx(0.5));
    CHECK(penalty_value(PenaltySpec::scad(), lam, 10.0) == doctest::Approx(4.7 / 2.0));
    CHECK(penalty_value(PenaltySpec::scad(), lam, 3.7) == doctest::Approx(4.7 / 2.0));
    // MCP: lambda t - t^2/(2 gamma) up to gamma lambda, gamma lambda^2/2 after.
    CHECK(penalty_value(PenaltySpec::mcp(), lam, 1.5) == doctest::Approx(1.5 - 2.25 / 6.0));
    CHECK(penalty_value(PenaltySpec::mcp(), lam, 5.0) == doctest::Approx(1.5));
    CHECK(penalty_value(PenaltySpec::scad(), lam, 0.0) == 0.0);
}

TEST_CASE("penalty derivative matches finite differences away from kinks")
{
    const double lam = 0.8;
    for (const PenaltySpec& spec : {PenaltySpec::lasso(), PenaltySpec::scad(), PenaltySpec::mcp()}) {
        for (double t = 0.05; t < 5.0; t += 0.0731) {
            const double kinks[] = {lam, spec.scad_a * lam, spec.mcp_gamma * lam};
            bool near = false;
            for (double k : kinks) near = near || std::abs(t - k) < 1e-3;
            if (near) continue;
            const double h = 1e-6;
            const double fd = (penalty_value(spec, lam, t + h) - penalty_value(spec, lam, t - h)) / (2 * h);
            CHECK(std::abs(penalty_derivative(spec, lam, t) - fd) <= 1e-5);
        }
    }
}

TEST_CASE("penalty derivative at the origin and argument checks")
{
    CHECK(penalty_derivative_at_zero(PenaltySpec::scad(), 0.3) == 0.3);
    CHECK(penalty_derivative(PenaltySpec::scad(), 0.3, 1e-12) == doctest::Approx(0.3));
    CHECK_THROWS_AS(penalty_derivative(PenaltySpec::lasso(), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PenaltySpec::scad(2.0), std::invalid_argument);
    CHECK_THROWS_AS(PenaltySpec::mcp(1.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_penalty("ridge"), std::invalid_argument);
    CHECK(parse_penalty("alasso").kind == PenaltyKind::AdaptiveLasso);
}

TEST_CASE("soft threshold")
{
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(scalar_threshold_update(PenaltySpec::lasso(), 1.0, 3.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("threshold update agrees with a grid-search oracle")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> zdist(-2.5, 2.5), vdist(0.5, 2.0);
    for (const PenaltySpec& spec : {PenaltySpec::lasso(), PenaltySpec::scad(), PenaltySpec::mcp()}) {
        for (double lam : {0.1, 1.0, 5.0}) {
            for (int t = 0; t < 40; ++t) {
                const double z = zdist(rng), v = vdist(rng);
                const double b = scalar_threshold_update(spec, lam, z, v);
                const double got = scalar_objective(spec, lam, z, v, b);
                const double oracle = grid_minimum(spec, lam, z, v);
                CHECK(got <= oracle + 1e-8);
                CHECK(got >= oracle - 1e-8);
            }
        }
    }
}

TEST_CASE("SCAD and MCP leave large signals unbiased")
{
    CHECK(scalar_threshold_update(PenaltySpec::scad(), 1.0, 10.0, 1.0) == doctest::Approx(10.0));
    CHECK(scalar_threshold_update(PenaltySpec::mcp(), 1.0, -10.0, 1.0) == doctest::Approx(-10.0));
    CHECK(scalar_threshold_update(PenaltySpec::scad(), 1.0, 0.9, 1.0) == 0.0);
}

TEST_CASE("descent update finds a local minimum no worse than its start")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> zdist(-3.0, 3.0), vdist(0.02, 2.0), sdist(-6.0, 6.0);
    for (const PenaltySpec& spec : {PenaltySpec::scad(), PenaltySpec::mcp()}) {
        const double convex_above = spec.kind == PenaltyKind::SCAD ? 1.0 / (spec.scad_a - 1.0) : 1.0 / spec.mcp_gamma;
        for (int t = 0; t < 2000; ++t) {
            const double lam = 1.0, z = zdist(rng), v = vdist(rng);
            const double start = t % 4 == 0 ? 0.0 : sdist(rng);
            const double b = descent_threshold_update(spec, lam, z, v, start);
            CHECK(scalar_objective(spec, lam, z, v, b) <= scalar_objective(spec, lam, z, v, start) + 1e-12);
            // Local optimality: small moves either way do not help.
            const double here = scalar_objective(spec, lam, z, v, b);
            CHECK(scalar_objective(spec, lam, z, v, b + 1e-4) >= here - 1e-12);
            CHECK(scalar_objective(spec, lam, z, v, b - 1e-4) >= here - 1e-12);
            if (v > convex_above) {
                CHECK(b == doctest::Approx(scalar_threshold_update(spec, lam, z, v)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("descent update keeps zero when the origin is stationary")
{
    // Small curvature: the global minimizer jumps away, the descent step does not.
    CHECK(scalar_threshold_update(PenaltySpec::scad(), 1.0, 0.95, 0.1) != 0.0);
    CHECK(descent_threshold_update(PenaltySpec::scad(), 1.0, 0.95, 0.1, 0.0) == 0.0);
    CHECK(descent_threshold_update(PenaltySpec::lasso(), 1.0, 3.0, 1.0, -4.0) == doctest::Approx(2.0));
}
