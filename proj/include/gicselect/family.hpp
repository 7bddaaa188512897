#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gicselect {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Support = std::vector<int>;   // sorted ascending column indices

enum class FamilyKind { Gaussian, Binomial, Poisson };

// Canonical-link exponential family. The Gaussian dispersion divides the
// (y*theta - b(theta)) term; Binomial and Poisson always use phi = 1.
struct Family
{
    FamilyKind kind = FamilyKind::Gaussian;
    double scale_phi = 1.0;

    static Family gaussian(double phi = 1.0);
    static Family binomial() { return {FamilyKind::Binomial, 1.0}; }
    static Family poisson() { return {FamilyKind::Poisson, 1.0}; }

    double phi_eff() const { return kind == FamilyKind::Gaussian ? scale_phi : 1.0; }
};

Family parse_family(std::string_view name, double phi = 1.0);
std::string to_string(FamilyKind kind);

// Binomial linear predictors are clamped to this magnitude before
// exponentiating in b' and b''.
inline constexpr double kBinomialEtaClamp = 30.0;

struct Cumulant
{
    double b;
    double db;
    double d2b;
};

// b(theta), b'(theta), b''(theta). Throws std::domain_error for non-finite theta.
Cumulant cumulant(const Family& family, double theta);

double mean_from_eta(const Family& family, double eta);
double variance_from_eta(const Family& family, double eta);

// Standardized design plus response. Columns of x have norm sqrt(n);
// column_scales[j] = ||raw column j|| / sqrt(n) (1 for all-zero columns).
struct Dataset
{
    Matrix x;
    Vector y;
    Vector column_scales;

    Eigen::Index n() const { return x.rows(); }
    Eigen::Index p() const { return x.cols(); }
};

// Standardizes raw_x and validates y against the family's response domain.
Dataset make_dataset(const Family& family, const Matrix& raw_x, const Vector& y);

// Wraps an already-standardized design without rescaling (scales set to 1).
Dataset make_standardized_dataset(const Family& family, Matrix x, Vector y);

void validate_response(const Family& family, const Vector& y);

// sum_i {y_i x_i'beta - b(x_i'beta)} / phi, omitting c(y, phi).
double log_likelihood(const Family& family, const Dataset& data, const Vector& beta);
double log_likelihood_eta(const Family& family, const Vector& y, const Vector& eta);

Vector mean_vector(const Family& family, const Dataset& data, const Vector& beta);
Vector mean_vector_eta(const Family& family, const Vector& eta);

// Scaled deviance 2{l(y;y) - l(mu;y)}. Throws std::domain_error when mu sits
// on the boundary of the mean space with an incompatible response.
double deviance(const Family& family, const Vector& mu, const Vector& y);

}  // namespace gicselect
