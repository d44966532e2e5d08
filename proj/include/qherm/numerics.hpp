#pragma once

#include "qherm/types.hpp"

namespace qherm {

// Relative symmetry tolerance: inputs to sym_eig must satisfy
// ||S - S^T||_F <= tol_sym_rel * ||S||_F.
inline constexpr double tol_sym_rel = 1e-12;

// Positivity threshold for metric admissibility: min eigenvalue must exceed
// tol_pd(S) = 1e-10 * max(1, ||S||_F). Separates genuine boundary crossings
// from round-off at the matrix scales used here (N <= a few hundred).
double tol_pd(double frobenius_norm);

// Scale-free degeneracy / reality threshold, floored at scale 1 so that the
// all-zero spectrum of an exceptional point still classifies as degenerate.
double degeneracy_threshold(double spectral_radius);

// General (possibly non-normal) eigendecomposition. Deterministic
// lexicographic (Re, Im) ordering. Throws EigensolverError on
// non-convergence; never returns NaN silently.
Spectrum eig(const DenseMatrix& m);

// Symmetric eigensolver; all-real ascending spectrum. Rejects inputs whose
// asymmetry exceeds tol_sym_rel * ||S||_F (AsymmetricInputError carries the
// measured norm).
Spectrum sym_eig(const DenseMatrix& s);

// Principal square root of a symmetric positive definite matrix: R symmetric
// with R*R = S. Throws NotPositiveDefiniteError carrying the offending
// minimal eigenvalue when min eig <= tol_pd.
DenseMatrix spd_sqrt(const DenseMatrix& s);

// Monic characteristic polynomial det(E*I - M) of a real matrix, ascending
// coefficients, via the Faddeev-LeVerrier recursion.
PolyCoeffs char_poly(const DenseMatrix& m);

// Discriminant via the Sylvester resultant of p and p'. Requires degree >= 2.
double poly_discriminant(const PolyCoeffs& p);

namespace detail {

// Internal Eigen-typed helpers shared across modules.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& s);
std::vector<Complex> sorted_eigenvalues(const Eigen::MatrixXd& m);
double min_pairwise_gap(const std::vector<Complex>& values);

}  // namespace detail

}  // namespace qherm
