#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <gicselect/family.hpp>

namespace gicselect {

enum class PenaltyKind { Lasso, SCAD, MCP, AdaptiveLasso };

struct PenaltySpec
{
    PenaltyKind kind = PenaltyKind::Lasso;
    double scad_a = 3.7;
    double mcp_gamma = 3.0;
    // Per-coordinate multipliers of lambda; AdaptiveLasso only.
    std::optional<Vector> weights;

    static PenaltySpec lasso() { return {}; }
    static PenaltySpec scad(double a = 3.7);
    static PenaltySpec mcp(double gamma = 3.0);
    static PenaltySpec adaptive_lasso(Vector weights);

    void validate() const;
    bool convex() const { return kind == PenaltyKind::Lasso || kind == PenaltyKind::AdaptiveLasso; }
};

PenaltySpec parse_penalty(std::string_view name, double scad_a = 3.7, double mcp_gamma = 3.0);
std::string to_string(PenaltyKind kind);

// p_lambda(t) for t >= 0. AdaptiveLasso evaluates the unweighted lasso term;
// per-coordinate weights are applied by the caller through the lambda level.
double penalty_value(const PenaltySpec& spec, double lambda, double t);

// p'_lambda(t) for t > 0.
double penalty_derivative(const PenaltySpec& spec, double lambda, double t);

// One-sided limit p'_lambda(0+), equal to lambda for every supported kind.
inline double penalty_derivative_at_zero(const PenaltySpec&, double lambda) { return lambda; }

// Global minimizer over beta of  v/2 * beta^2 - z * beta + p_lambda(|beta|).
// Exact ties between candidate minimizers resolve toward the smaller |beta|.
double scalar_threshold_update(const PenaltySpec& spec, double lambda, double z, double v);

// Local minimizer of the same scalar objective reached by moving downhill from
// `start`. Equals scalar_threshold_update whenever the objective is convex.
double descent_threshold_update(const PenaltySpec& spec, double lambda, double z, double v, double start);

inline double soft_threshold(double z, double lambda)
{
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

}  // namespace gicselect
