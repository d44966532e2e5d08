#pragma once

#include <optional>

#include "qherm/types.hpp"

namespace qherm {

// Basis of the solution space of H^dagger Theta = Theta H restricted to
// symmetric matrices. Basis elements are symmetric, Frobenius-orthonormal,
// and the first element is oriented to have nonnegative trace.
struct MetricFamily {
    enum class Construction { dyadic, nullspace };

    int dim = 0;  // matrix dimension, not family size
    std::vector<Eigen::MatrixXd> basis;
    Eigen::MatrixXd source_hamiltonian;
    Construction construction = Construction::dyadic;

    int size() const { return static_cast<int>(basis.size()); }
};

// Weights of a linear combination over a MetricFamily basis; at least one
// entry must be nonzero.
struct MetricWeights {
    std::vector<double> kappa;
};

struct PositivityReport {
    bool is_pd = false;
    double min_eigenvalue = 0.0;
};

// Dyadic construction from left eigenvectors (eigenvectors of H^T): the
// candidates w_n w_n^T are symmetrized solutions, then orthonormalized.
// Requires a real nondegenerate spectrum; throws DegenerateSpectrumError
// naming the offending eigenvalue pair otherwise.
MetricFamily metric_basis(const DenseMatrix& h);

// Independent oracle: nullspace of Theta -> H^T Theta - Theta H on the
// symmetric subspace via singular-value thresholding. Works at exceptional
// points too; returns an empty family when no solution exists.
MetricFamily metric_nullspace_oracle(const DenseMatrix& h);

// Sum_n kappa_n B_n. Rejects weight/basis length mismatch and all-zero
// weights.
DenseMatrix assemble_metric(const MetricFamily& family,
                            const MetricWeights& weights);

// Frobenius projections of `target` onto the family basis (least-squares
// weights; exact when target lies in the span).
MetricWeights fit_weights(const MetricFamily& family,
                          const Eigen::MatrixXd& target);

// Projected-gradient search for weights giving a positive definite member
// of the family. Deterministic; returns weights found or nullopt.
std::optional<MetricWeights> find_spd_weights(const MetricFamily& family,
                                              int max_iterations = 400);

// sin of the largest principal angle between the spans of two families
// (0 means identical spans).
double span_principal_angle_sin(const MetricFamily& a, const MetricFamily& b);

// Closed-form two-level metric
//   [[1 + cos a cos b, -sin a], [-sin a, 1 - cos a cos b]]
// with eigenvalues 1 +- sqrt(1 - cos^2 a sin^2 b). alpha_h lies in the open
// interval (-pi/2, pi/2) (positivity fails at the ends); beta_m in
// [-pi/2, pi/2] excluding 0, where the displayed matrix is singular.
DenseMatrix two_level_metric(double alpha_h, double beta_m);

// Closed-form three-level metric Theta(a, f, m) via the recursive
// elimination of the off-diagonal entries h, b, c. The h formula carries a
// factor g, so the g = 0 limit (h = c = 0, decoupled 2x2 block) is the same
// expression.
DenseMatrix three_level_metric(double z, double g, double a, double f,
                               double m);

// Positive-definiteness report via the symmetric eigensolver (so the
// offending minimal eigenvalue can be reported). Rejects asymmetric input.
PositivityReport positivity(const DenseMatrix& theta);

// ||H^dagger Theta - Theta H||_F / (||H||_F ||Theta||_F); zero means exact
// quasi-Hermiticity.
double residual(const DenseMatrix& h, const DenseMatrix& theta);

// Similarity map h = Theta^{1/2} H Theta^{-1/2} to the manifestly symmetric
// representative with the same spectrum. Requires Theta SPD and
// residual(H, Theta) <= 1e-8.
DenseMatrix hermitize(const DenseMatrix& h, const DenseMatrix& theta);

}  // namespace qherm
