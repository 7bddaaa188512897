#pragma once

#include <gicselect/family.hpp>

#include <random>

namespace testing_support {

using gicselect::Matrix;
using gicselect::Vector;

inline Matrix gaussian_matrix(std::mt19937_64& rng, int n, int p)
{
    std::normal_distribution<double> normal;
    Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) x(i, j) = normal(rng);
    }
    return x;
}

// Columns rescaled to norm sqrt(n), no centering.
inline Matrix standardized_matrix(std::mt19937_64& rng, int n, int p)
{
    Matrix x = gaussian_matrix(rng, n, p);
    for (int j = 0; j < p; ++j) x.col(j) *= std::sqrt(double(n)) / x.col(j).norm();
    return x;
}

inline Vector draw_response(std::mt19937_64& rng, const gicselect::Family& family, const Vector& eta)
{
    Vector y(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        switch (family.kind) {
            case gicselect::FamilyKind::Gaussian:
                y[i] = eta[i] + std::sqrt(family.scale_phi) * std::normal_distribution<double>()(rng);
                break;
            case gicselect::FamilyKind::Binomial:
                y[i] = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta[i])))(rng) ? 1.0 : 0.0;
                break;
            case gicselect::FamilyKind::Poisson:
                y[i] = std::poisson_distribution<int>(std::exp(eta[i]))(rng);
                break;
        }
    }
    return y;
}

}  // namespace testing_support
