#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "logitmm/objective.hpp"

namespace testing_data {

inline Eigen::VectorXd normal_vector(std::mt19937_64& rng, Eigen::Index n, double sd = 1.0)
{
    std::normal_distribution<double> dist(0.0, sd);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

inline Eigen::MatrixXd normal_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0)
{
    std::normal_distribution<double> dist(0.0, sd);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

/// Intercept column plus Gaussian predictors; y alternates so both classes appear.
inline logitmm::Dataset random_dataset(std::uint64_t seed, Eigen::Index n, Eigen::Index p, double sd = 0.5)
{
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd X = normal_matrix(rng, n, p, sd);
    X.col(0).setOnes();
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = i < 2 ? static_cast<double>(i % 2) : (coin(rng) ? 1.0 : 0.0);
    return logitmm::Dataset(std::move(X), std::move(y));
}

/// Random symmetric PSD matrix of rank at most `rank`.
inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank)
{
    const Eigen::MatrixXd B = normal_matrix(rng, n, rank);
    Eigen::MatrixXd M = B * B.transpose();
    return 0.5 * (M + M.transpose());
}

}  // namespace testing_data
