#include <gicselect/family.hpp>

#include <algorithm>
#include <cmath>

namespace gicselect {

Family Family::gaussian(double phi)
{
    if (!(phi > 0.0) || !std::isfinite(phi)) {
        throw std::invalid_argument("gaussian dispersion must be positive and finite");
    }
    return {FamilyKind::Gaussian, phi};
}

Family parse_family(std::string_view name, double phi)
{
    if (name == "gaussian") return Family::gaussian(phi);
    if (name == "binomial") return Family::binomial();
    if (name == "poisson") return Family::poisson();
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string to_string(FamilyKind kind)
{
    switch (kind) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Binomial: return "binomial";
        case FamilyKind::Poisson: return "poisson";
    }
    return "unknown";
}

namespace {

double sigmoid(double eta)
{
    eta = std::clamp(eta, -kBinomialEtaClamp, kBinomialEtaClamp);
    return 1.0 / (1.0 + std::exp(-eta));
}

// log(1 + e^t) without overflow.
double softplus(double t)
{
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

Cumulant cumulant(const Family& family, double theta)
{
    if (!std::isfinite(theta)) {
        throw std::domain_error("cumulant: non-finite natural parameter");
    }
    switch (family.kind) {
        case FamilyKind::Gaussian:
            return {0.5 * theta * theta, theta, 1.0};
        case FamilyKind::Binomial: {
            const double mu = sigmoid(theta);
            return {softplus(theta), mu, mu * (1.0 - mu)};
        }
        case FamilyKind::Poisson: {
            const double e = std::exp(theta);
            return {e, e, e};
        }
    }
    throw std::logic_error("unreachable family kind");
}

double mean_from_eta(const Family& family, double eta)
{
    switch (family.kind) {
        case FamilyKind::Gaussian: return eta;
        case FamilyKind::Binomial: return sigmoid(eta);
        case FamilyKind::Poisson: return std::exp(eta);
    }
    return eta;
}

double variance_from_eta(const Family& family, double eta)
{
    switch (family.kind) {
        case FamilyKind::Gaussian: return 1.0;
        case FamilyKind::Binomial: {
            const double mu = sigmoid(eta);
            return mu * (1.0 - mu);
        }
        case FamilyKind::Poisson: return std::exp(eta);
    }
    return 1.0;
}

void validate_response(const Family& family, const Vector& y)
{
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (!std::isfinite(v)) {
            throw std::invalid_argument("response contains a non-finite value at row " +
                                        std::to_string(i + 1));
        }
        if (family.kind == FamilyKind::Binomial && v != 0.0 && v != 1.0) {
            throw std::invalid_argument("binomial response must be 0 or 1 (row " +
                                        std::to_string(i + 1) + ")");
        }
        if (family.kind == FamilyKind::Poisson && (v < 0.0 || v != std::floor(v))) {
            throw std::invalid_argument("poisson response must be a nonnegative integer (row " +
                                        std::to_string(i + 1) + ")");
        }
    }
}

Dataset make_dataset(const Family& family, const Matrix& raw_x, const Vector& y)
{
    if (raw_x.rows() != y.size()) {
        throw std::invalid_argument("design has " + std::to_string(raw_x.rows()) +
                                    " rows but response has " + std::to_string(y.size()));
    }
    validate_response(family, y);
    Dataset d{raw_x, y, Vector::Ones(raw_x.cols())};
    const double root_n = std::sqrt(static_cast<double>(raw_x.rows()));
    for (Eigen::Index j = 0; j < raw_x.cols(); ++j) {
        const double norm = raw_x.col(j).norm();
        if (norm > 0.0) {
            d.column_scales[j] = norm / root_n;
            d.x.col(j) /= d.column_scales[j];
        }
    }
    return d;
}

Dataset make_standardized_dataset(const Family& family, Matrix x, Vector y)
{
    if (x.rows() != y.size()) {
        throw std::invalid_argument("design and response lengths differ");
    }
    validate_response(family, y);
    const Eigen::Index p = x.cols();
    return {std::move(x), std::move(y), Vector::Ones(p)};
}

double log_likelihood_eta(const Family& family, const Vector& y, const Vector& eta)
{
    if (y.size() != eta.size()) {
        throw std::invalid_argument("log_likelihood: dimension mismatch");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        total += y[i] * eta[i] - cumulant(family, eta[i]).b;
    }
    return total / family.phi_eff();
}

double log_likelihood(const Family& family, const Dataset& data, const Vector& beta)
{
    if (beta.size() != data.p()) {
        throw std::invalid_argument("log_likelihood: coefficient length " +
                                    std::to_string(beta.size()) + " does not match p = " +
                                    std::to_string(data.p()));
    }
    return log_likelihood_eta(family, data.y, data.x * beta);
}

Vector mean_vector_eta(const Family& family, const Vector& eta)
{
    Vector mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        mu[i] = mean_from_eta(family, eta[i]);
    }
    return mu;
}

Vector mean_vector(const Family& family, const Dataset& data, const Vector& beta)
{
    if (beta.size() != data.p()) {
        throw std::invalid_argument("mean_vector: coefficient length does not match p");
    }
    return mean_vector_eta(family, data.x * beta);
}

double deviance(const Family& family, const Vector& mu, const Vector& y)
{
    if (mu.size() != y.size()) {
        throw std::invalid_argument("deviance: dimension mismatch");
    }
    double total = 0.0;
    switch (family.kind) {
        case FamilyKind::Gaussian:
            return (y - mu).squaredNorm() / family.scale_phi;
        case FamilyKind::Binomial:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double m = mu[i];
                if (y[i] > 0.0) {
                    if (!(m > 0.0)) throw std::domain_error("deviance: mu = 0 with y = 1");
                    total -= y[i] * std::log(m);
                }
                if (y[i] < 1.0) {
                    if (!(m < 1.0)) throw std::domain_error("deviance: mu = 1 with y = 0");
                    total -= (1.0 - y[i]) * std::log1p(-m);
                }
            }
            return 2.0 * total;
        case FamilyKind::Poisson:
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double m = mu[i];
                if (y[i] > 0.0) {
                    if (!(m > 0.0)) throw std::domain_error("deviance: mu = 0 with y > 0");
                    total += y[i] * std::log(y[i] / m);
                }
                total -= y[i] - m;
            }
            return std::max(0.0, 2.0 * total);
    }
    return total;
}

}  // namespace gicselect
