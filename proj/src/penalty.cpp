#include <gicselect/penalty.hpp>

#include <algorithm>
#include <vector>
#include <array>
#include <cmath>
#include <limits>

namespace gicselect {

PenaltySpec PenaltySpec::scad(double a)
{
    PenaltySpec s;
    s.kind = PenaltyKind::SCAD;
    s.scad_a = a;
    s.validate();
    return s;
}

PenaltySpec PenaltySpec::mcp(double gamma)
{
    PenaltySpec s;
    s.kind = PenaltyKind::MCP;
    s.mcp_gamma = gamma;
    s.validate();
    return s;
}

PenaltySpec PenaltySpec::adaptive_lasso(Vector weights)
{
    PenaltySpec s;
    s.kind = PenaltyKind::AdaptiveLasso;
    s.weights = std::move(weights);
    s.validate();
    return s;
}

void PenaltySpec::validate() const
{
    if (kind == PenaltyKind::SCAD && !(scad_a > 2.0)) {
        throw std::invalid_argument("SCAD parameter a must exceed 2");
    }
    if (kind == PenaltyKind::MCP && !(mcp_gamma > 1.0)) {
        throw std::invalid_argument("MCP parameter gamma must exceed 1");
    }
    if (weights) {
        for (double w : *weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("adaptive weights must be finite and nonnegative");
            }
        }
    }
}

PenaltySpec parse_penalty(std::string_view name, double scad_a, double mcp_gamma)
{
    if (name == "lasso") return PenaltySpec::lasso();
    if (name == "scad") return PenaltySpec::scad(scad_a);
    if (name == "mcp") return PenaltySpec::mcp(mcp_gamma);
    if (name == "adaptive_lasso" || name == "alasso") {
        PenaltySpec s;
        s.kind = PenaltyKind::AdaptiveLasso;
        return s;
    }
    throw std::invalid_argument("unknown penalty '" + std::string(name) + "'");
}

std::string to_string(PenaltyKind kind)
{
    switch (kind) {
        case PenaltyKind::Lasso: return "lasso";
        case PenaltyKind::SCAD: return "scad";
        case PenaltyKind::MCP: return "mcp";
        case PenaltyKind::AdaptiveLasso: return "adaptive_lasso";
    }
    return "unknown";
}

double penalty_value(const PenaltySpec& spec, double lambda, double t)
{
    if (t < 0.0 || lambda < 0.0) {
        throw std::invalid_argument("penalty_value: t and lambda must be nonnegative");
    }
    switch (spec.kind) {
        case PenaltyKind::Lasso:
        case PenaltyKind::AdaptiveLasso:
            return lambda * t;
        case PenaltyKind::SCAD: {
            const double a = spec.scad_a;
            if (t <= lambda) return lambda * t;
            if (t <= a * lambda) return (2.0 * a * lambda * t - t * t - lambda * lambda) / (2.0 * (a - 1.0));
            return 0.5 * lambda * lambda * (a + 1.0);
        }
        case PenaltyKind::MCP: {
            const double g = spec.mcp_gamma;
            if (t <= g * lambda) return lambda * t - t * t / (2.0 * g);
            return 0.5 * g * lambda * lambda;
        }
    }
    return 0.0;
}

double penalty_derivative(const PenaltySpec& spec, double lambda, double t)
{
    if (!(t > 0.0)) {
        throw std::invalid_argument("penalty_derivative: t must be positive");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("penalty_derivative: lambda must be nonnegative");
    }
    switch (spec.kind) {
        case PenaltyKind::Lasso:
        case PenaltyKind::AdaptiveLasso:
            return lambda;
        case PenaltyKind::SCAD:
            if (t <= lambda) return lambda;
            return std::max(spec.scad_a * lambda - t, 0.0) / (spec.scad_a - 1.0);
        case PenaltyKind::MCP:
            return std::max(lambda - t / spec.mcp_gamma, 0.0);
    }
    return 0.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quadratic piece of the objective on u in [lo, hi]: curvature/2 u^2 + slope u + const.
struct Piece
{
    double lo;
    double hi;
    double curvature;
    double slope;
};

// Minimizer of curvature/2 u^2 + slope u over [lo, hi].
double piece_argmin(const Piece& pc)
{
    if (pc.curvature > 0.0) {
        const double vertex = -pc.slope / pc.curvature;
        return std::clamp(vertex, pc.lo, pc.hi);
    }
    // Concave or linear: an endpoint. hi is finite whenever curvature <= 0.
    const double f_lo = 0.5 * pc.curvature * pc.lo * pc.lo + pc.slope * pc.lo;
    const double f_hi = 0.5 * pc.curvature * pc.hi * pc.hi + pc.slope * pc.hi;
    return f_hi < f_lo ? pc.hi : pc.lo;
}

}  // namespace

double scalar_threshold_update(const PenaltySpec& spec, double lambda, double z, double v)
{
    if (!(v > 0.0)) {
        throw std::invalid_argument("scalar_threshold_update: curvature must be positive");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("scalar_threshold_update: lambda must be nonnegative");
    }
    if (spec.kind == PenaltyKind::Lasso || spec.kind == PenaltyKind::AdaptiveLasso) {
        return soft_threshold(z, lambda) / v;
    }

    // Pieces on u = |beta| >= 0 for the objective v/2 u^2 - z_side u + p(u),
    // where z_side is z for beta >= 0 and -z for beta <= 0.
    std::array<Piece, 3> pieces{};
    std::size_t count = 0;
    if (spec.kind == PenaltyKind::SCAD) {
        const double a = spec.scad_a;
        pieces[count++] = {0.0, lambda, v, lambda};
        pieces[count++] = {lambda, a * lambda, v - 1.0 / (a - 1.0), a * lambda / (a - 1.0)};
        pieces[count++] = {a * lambda, kInf, v, 0.0};
    } else {
        const double g = spec.mcp_gamma;
        pieces[count++] = {0.0, g * lambda, v - 1.0 / g, lambda};
        pieces[count++] = {g * lambda, kInf, v, 0.0};
    }

    auto objective = [&](double beta) {
        return 0.5 * v * beta * beta - z * beta + penalty_value(spec, lambda, std::abs(beta));
    };

    double best = 0.0;
    double best_obj = objective(0.0);
    auto consider = [&](double beta) {
        const double obj = objective(beta);
        if (obj < best_obj || (obj == best_obj && std::abs(beta) < std::abs(best))) {
            best = beta;
            best_obj = obj;
        }
    };
    for (double sign : {1.0, -1.0}) {
        const double z_side = sign * z;
        for (std::size_t k = 0; k < count; ++k) {
            Piece pc = pieces[k];
            pc.slope -= z_side;
            consider(sign * piece_argmin(pc));
        }
    }
    return best;
}

namespace {

// f'(u) = slope * u + offset on [lo, hi] for the objective restricted to one sign.
struct Segment
{
    double lo, hi, slope, offset;
};

std::vector<Segment> half_line_segments(const PenaltySpec& spec, double lambda, double zs, double v)
{
    const double inf = std::numeric_limits<double>::infinity();
    switch (spec.kind) {
        case PenaltyKind::SCAD: {
            const double a = spec.scad_a;
            return {{0.0, lambda, v, lambda - zs},
                    {lambda, a * lambda, v - 1.0 / (a - 1.0), a * lambda / (a - 1.0) - zs},
                    {a * lambda, inf, v, -zs}};
        }
        case PenaltyKind::MCP: {
            const double g = spec.mcp_gamma;
            return {{0.0, g * lambda, v - 1.0 / g, lambda - zs}, {g * lambda, inf, v, -zs}};
        }
        default:
            return {{0.0, inf, v, lambda - zs}};
    }
}

// Walks from u0 >= 0 along the half-line in the downhill direction; returns the
// first point where f' changes sign (0 when the walk reaches the origin).
double walk_half_line(const std::vector<Segment>& segs, double u0)
{
    auto deriv = [](const Segment& s, double u) { return s.slope * u + s.offset; };
    std::size_t k = 0;
    while (k + 1 < segs.size() && u0 >= segs[k].hi) ++k;
    if (deriv(segs[k], u0) < 0.0) {
        for (; k < segs.size(); ++k) {
            const Segment& s = segs[k];
            const double from = std::max(u0, s.lo);
            if (std::isinf(s.hi) || deriv(s, s.hi) > 0.0) {
                return std::max(from, -s.offset / s.slope);
            }
        }
        return u0;
    }
    while (k > 0 && u0 <= segs[k].lo) --k;
    for (;; --k) {
        const Segment& s = segs[k];
        const double from = std::min(u0, s.hi);
        if (deriv(s, s.lo) < 0.0) return std::min(from, -s.offset / s.slope);
        if (k == 0) return 0.0;
    }
}

}  // namespace

double descent_threshold_update(const PenaltySpec& spec, double lambda, double z, double v, double start)
{
    if (!(v > 0.0)) {
        throw std::invalid_argument("descent_threshold_update: curvature must be positive");
    }
    if (spec.convex() || lambda == 0.0) return scalar_threshold_update(spec, lambda, z, v);
    if (start == 0.0 && std::abs(z) <= lambda) return 0.0;
    // Move on the side of start, or toward sign(z) when leaving the origin.
    const double s = start != 0.0 ? (start > 0.0 ? 1.0 : -1.0) : (z > 0.0 ? 1.0 : -1.0);
    const double u = walk_half_line(half_line_segments(spec, lambda, s * z, v), std::abs(start));
    if (u > 0.0 || std::abs(z) <= lambda) return s * u;
    // Reached the origin but it is not stationary: continue on the other side.
    const double s2 = z > 0.0 ? 1.0 : -1.0;
    return s2 * walk_half_line(half_line_segments(spec, lambda, s2 * z, v), 0.0);
}

}  // namespace gicselect
