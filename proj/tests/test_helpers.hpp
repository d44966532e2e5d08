#pragma once

#include <random>

#include <Eigen/Dense>

namespace qherm::testing {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int n, double lo,
                                     double hi) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = uniform(gen, lo, hi);
    }
    return m;
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, int n) {
    const Eigen::MatrixXd a = random_matrix(gen, n, -1.0, 1.0);
    return a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

// Random invertible similarity with moderate condition number.
inline Eigen::MatrixXd random_similarity(std::mt19937_64& gen, int n) {
    const Eigen::MatrixXd a = random_matrix(gen, n, -1.0, 1.0);
    return a + 2.0 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace qherm::testing
