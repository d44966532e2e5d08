#include "qherm/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qherm {

// ---------------------------------------------------------------------------
// DenseMatrix / Spectrum / PolyCoeffs
// ---------------------------------------------------------------------------

DenseMatrix::DenseMatrix(Eigen::MatrixXcd m, Tag tag)
    : entries_(std::move(m)), tag_(tag) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw ConstructionError("DenseMatrix must be square with dim >= 1");
    }
    if (tag_ == Tag::real && (entries_.imag().array() != 0.0).any()) {
        throw ConstructionError(
            "real-tagged DenseMatrix carries nonzero imaginary parts");
    }
}

DenseMatrix DenseMatrix::from_real(const Eigen::MatrixXd& m) {
    Eigen::MatrixXcd c(m.rows(), m.cols());
    c.real() = m;
    c.imag().setZero();
    return DenseMatrix(std::move(c), Tag::real);
}

DenseMatrix DenseMatrix::from_complex(const Eigen::MatrixXcd& m) {
    return DenseMatrix(m, Tag::complex);
}

Eigen::MatrixXd DenseMatrix::real_part() const {
    if (!is_real()) {
        throw ConstructionError("real_part() requires a real-tagged matrix");
    }
    return entries_.real();
}

double Spectrum::spectral_radius() const {
    double rho = 0.0;
    for (const auto& e : eigenvalues) rho = std::max(rho, std::abs(e));
    return rho;
}

Spectrum Spectrum::from_eigenvalues(std::vector<Complex> values) {
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    Spectrum s;
    s.eigenvalues = std::move(values);
    s.min_pair_gap = detail::min_pairwise_gap(s.eigenvalues);
    s.max_abs_imag = 0.0;
    for (const auto& e : s.eigenvalues) {
        s.max_abs_imag = std::max(s.max_abs_imag, std::abs(e.imag()));
    }
    return s;
}

double PolyCoeffs::evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

PolyCoeffs PolyCoeffs::monic(std::vector<double> ascending) {
    if (ascending.empty() || ascending.back() != 1.0) {
        throw ConstructionError("PolyCoeffs requires leading coefficient 1");
    }
    return PolyCoeffs{std::move(ascending)};
}

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

double tol_pd(double frobenius_norm) {
    return 1e-10 * std::max(1.0, frobenius_norm);
}

double degeneracy_threshold(double spectral_radius) {
    return 1e-8 * std::max(1.0, spectral_radius);
}

// ---------------------------------------------------------------------------
// Eigensolvers
// ---------------------------------------------------------------------------

namespace detail {

double min_pairwise_gap(const std::vector<Complex>& values) {
    const size_t n = values.size();
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            gap = std::min(gap, std::abs(values[i] - values[j]));
        }
    }
    return gap;
}

std::vector<Complex> sorted_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("real eigensolver failed to converge");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<Complex> values(ev.data(), ev.data() + ev.size());
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return values;
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("symmetric eigensolver failed to converge");
    }
    return solver.eigenvalues();
}

}  // namespace detail

Spectrum eig(const DenseMatrix& m) {
    if (m.is_real()) {
        return Spectrum::from_eigenvalues(
            detail::sorted_eigenvalues(m.real_part()));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.entries(), false);
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("complex eigensolver failed to converge");
    }
    const auto& ev = solver.eigenvalues();
    return Spectrum::from_eigenvalues(
        std::vector<Complex>(ev.data(), ev.data() + ev.size()));
}

Spectrum sym_eig(const DenseMatrix& s) {
    if (!s.is_real()) {
        throw AsymmetricInputError(
            std::numeric_limits<double>::infinity(),
            "sym_eig requires a real-tagged matrix");
    }
    const Eigen::MatrixXd mat = s.real_part();
    const double asym = (mat - mat.transpose()).norm();
    if (asym > tol_sym_rel * mat.norm()) {
        throw AsymmetricInputError(
            asym, "sym_eig input asymmetry " + std::to_string(asym) +
                      " exceeds tolerance");
    }
    const Eigen::VectorXd ev =
        detail::sym_eigenvalues(0.5 * (mat + mat.transpose()));
    std::vector<Complex> values(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) values[i] = Complex(ev[i], 0.0);
    return Spectrum::from_eigenvalues(std::move(values));
}

DenseMatrix spd_sqrt(const DenseMatrix& s) {
    if (!s.is_real()) {
        throw AsymmetricInputError(std::numeric_limits<double>::infinity(),
                                   "spd_sqrt requires a real symmetric matrix");
    }
    const Eigen::MatrixXd mat = s.real_part();
    const double asym = (mat - mat.transpose()).norm();
    if (asym > tol_sym_rel * mat.norm()) {
        throw AsymmetricInputError(
            asym, "spd_sqrt input asymmetry exceeds tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (mat + mat.transpose()));
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("symmetric eigensolver failed to converge");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig <= tol_pd(mat.norm())) {
        throw NotPositiveDefiniteError(
            min_eig, "spd_sqrt input not positive definite (min eigenvalue " +
                         std::to_string(min_eig) + ")");
    }
    const Eigen::MatrixXd root =
        solver.eigenvectors() *
        solver.eigenvalues().cwiseSqrt().asDiagonal() *
        solver.eigenvectors().transpose();
    return DenseMatrix::from_real(0.5 * (root + root.transpose()));
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and discriminant
// ---------------------------------------------------------------------------

PolyCoeffs char_poly(const DenseMatrix& m) {
    if (!m.is_real()) {
        throw ConstructionError("char_poly requires a real-tagged matrix");
    }
    const Eigen::MatrixXd a = m.real_part();
    const Eigen::Index n = a.rows();
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} A, c_{n-k} = -tr(M_k)/k.
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    c[static_cast<size_t>(n)] = 1.0;
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = a * mk + c[static_cast<size_t>(n - k + 1)] * a;
        c[static_cast<size_t>(n - k)] = -mk.trace() / static_cast<double>(k);
    }
    return PolyCoeffs{std::move(c)};
}

double poly_discriminant(const PolyCoeffs& p) {
    const int n = p.degree();
    if (n < 2) {
        throw ConstructionError("poly_discriminant requires degree >= 2");
    }
    // Descending coefficients of p and p'.
    std::vector<double> a(p.coeffs.rbegin(), p.coeffs.rend());
    std::vector<double> b(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        b[static_cast<size_t>(i)] =
            a[static_cast<size_t>(i)] * static_cast<double>(n - i);
    }
    const int size = 2 * n - 1;
    Eigen::MatrixXd syl = Eigen::MatrixXd::Zero(size, size);
    for (int row = 0; row < n - 1; ++row) {
        for (int k = 0; k <= n; ++k) {
            syl(row, row + k) = a[static_cast<size_t>(k)];
        }
    }
    for (int row = 0; row < n; ++row) {
        for (int k = 0; k < n; ++k) {
            syl(n - 1 + row, row + k) = b[static_cast<size_t>(k)];
        }
    }
    const double resultant = syl.partialPivLu().determinant();
    const int sign = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
    return sign * resultant;
}

}  // namespace qherm
