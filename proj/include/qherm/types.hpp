#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qherm {

using Complex = std::complex<double>;

// Base error for all domain failures. Subclasses carry the measured
// quantity that triggered the rejection.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AsymmetricInputError final : Error {
    AsymmetricInputError(double norm, const std::string& what)
        : Error(what), asymmetry_norm(norm) {}
    double asymmetry_norm;
};

struct NotPositiveDefiniteError final : Error {
    NotPositiveDefiniteError(double min_eig, const std::string& what)
        : Error(what), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

struct EigensolverError final : Error {
    using Error::Error;
};

struct DegenerateSpectrumError final : Error {
    DegenerateSpectrumError(Complex a, Complex b, const std::string& what)
        : Error(what), lambda1(a), lambda2(b) {}
    Complex lambda1;
    Complex lambda2;
};

// Parameter validation / model construction failures. `index` names the
// offending entry where applicable (chain radicand k, resonance integer n).
struct ConstructionError final : Error {
    explicit ConstructionError(const std::string& what, int index = -1)
        : Error(what), index(index) {}
    int index;
};

struct DimensionMismatchError final : Error {
    using Error::Error;
};

// Square real-or-complex matrix, the carrier for Hamiltonians, metrics and
// observables. Real matrices keep exactly-zero imaginary parts so that the
// real_part() view is lossless.
class DenseMatrix {
  public:
    enum class Tag { real, complex };

    static DenseMatrix from_real(const Eigen::MatrixXd& m);
    static DenseMatrix from_complex(const Eigen::MatrixXcd& m);

    int dim() const { return static_cast<int>(entries_.rows()); }
    bool is_real() const { return tag_ == Tag::real; }
    Tag tag() const { return tag_; }

    const Eigen::MatrixXcd& entries() const { return entries_; }
    // Requires is_real().
    Eigen::MatrixXd real_part() const;

    double frobenius_norm() const { return entries_.norm(); }

  private:
    DenseMatrix(Eigen::MatrixXcd m, Tag tag);

    Eigen::MatrixXcd entries_;
    Tag tag_;
};

// Eigenvalue list sorted lexicographically by (Re, Im), with the two
// summary statistics every classifier downstream needs.
struct Spectrum {
    std::vector<Complex> eigenvalues;
    double min_pair_gap = std::numeric_limits<double>::infinity();
    double max_abs_imag = 0.0;

    double spectral_radius() const;

    // Recomputes the metadata from the eigenvalue list (used by the
    // constructors and by consistency tests).
    static Spectrum from_eigenvalues(std::vector<Complex> values);
};

// Monic real polynomial, ascending coefficient order, coeffs.back() == 1.
struct PolyCoeffs {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double evaluate(double x) const;
    static PolyCoeffs monic(std::vector<double> ascending);
};

}  // namespace qherm
