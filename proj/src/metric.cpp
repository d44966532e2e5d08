#include "qherm/metric.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qherm/numerics.hpp"

namespace qherm {

namespace {

Eigen::MatrixXd require_real(const DenseMatrix& m, const char* who) {
    if (!m.is_real()) {
        throw ConstructionError(std::string(who) + " requires a real matrix");
    }
    return m.real_part();
}

// Orthonormal basis of the symmetric n x n matrices: E_ii, then
// (E_ij + E_ji)/sqrt(2) for i < j.
std::vector<Eigen::MatrixXd> symmetric_basis(int n) {
    std::vector<Eigen::MatrixXd> basis;
    basis.reserve(static_cast<size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            e(i, j) = e(j, i) = inv_sqrt2;
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

void orient_first_nonnegative_trace(std::vector<Eigen::MatrixXd>& basis) {
    if (!basis.empty() && basis.front().trace() < 0.0) {
        basis.front() = -basis.front();
    }
}

Eigen::MatrixXd stack_columns(const MetricFamily& fam) {
    const int n = fam.dim;
    const Eigen::Index length = static_cast<Eigen::Index>(n) * n;
    Eigen::MatrixXd q(length, fam.size());
    for (int k = 0; k < fam.size(); ++k) {
        q.col(k) =
            Eigen::Map<const Eigen::VectorXd>(fam.basis[k].data(), length);
    }
    return q;
}

}  // namespace

MetricFamily metric_basis(const DenseMatrix& h) {
    const Eigen::MatrixXd mat = require_real(h, "metric_basis");
    const int n = h.dim();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(mat.transpose(), true);
    if (solver.info() != Eigen::Success) {
        throw EigensolverError("eigensolver failed on H^T");
    }
    const Eigen::VectorXcd ev = solver.eigenvalues();
    const double tol = degeneracy_threshold(ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (std::abs(ev[i].imag()) > tol) {
            throw DegenerateSpectrumError(
                ev[i], std::conj(ev[i]),
                "metric_basis requires a real spectrum");
        }
    }
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ev[a].real() < ev[b].real(); });
    for (int i = 0; i + 1 < n; ++i) {
        const int lo = order[static_cast<size_t>(i)];
        const int hi = order[static_cast<size_t>(i) + 1];
        if (std::abs(ev[lo] - ev[hi]) < tol) {
            throw DegenerateSpectrumError(
                ev[lo], ev[hi],
                "metric_basis requires a nondegenerate spectrum");
        }
    }

    // Left-eigenvector dyads w_n w_n^T, each a symmetric solution of the
    // compatibility equation; Gram-Schmidt in the Frobenius inner product
    // keeps them inside the solution space.
    std::vector<Eigen::MatrixXd> basis;
    basis.reserve(static_cast<size_t>(n));
    for (int i : order) {
        Eigen::VectorXd w = solver.eigenvectors().col(i).real();
        w.normalize();
        Eigen::MatrixXd cand = w * w.transpose();
        for (int pass = 0; pass < 2; ++pass) {  // twice for orthogonality
            for (const auto& prev : basis) {
                cand -= prev.cwiseProduct(cand).sum() * prev;
            }
        }
        const double norm = cand.norm();
        if (norm < 1e-12) {
            throw DegenerateSpectrumError(
                ev[i], ev[i], "dyad family is rank deficient");
        }
        basis.push_back(cand / norm);
    }
    orient_first_nonnegative_trace(basis);

    MetricFamily fam;
    fam.dim = n;
    fam.basis = std::move(basis);
    fam.source_hamiltonian = mat;
    fam.construction = MetricFamily::Construction::dyadic;
    return fam;
}

MetricFamily metric_nullspace_oracle(const DenseMatrix& h) {
    const Eigen::MatrixXd mat = require_real(h, "metric_nullspace_oracle");
    const int n = h.dim();
    const auto sym = symmetric_basis(n);
    const int n_sym = static_cast<int>(sym.size());
    const int n_anti = n * (n - 1) / 2;

    // Rows: independent antisymmetric coordinates of H^T B - B H, scaled so
    // that the 2-norm of a column equals the Frobenius norm of the residual.
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(std::max(n_anti, 1), n_sym);
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 0; k < n_sym; ++k) {
        const Eigen::MatrixXd r = mat.transpose() * sym[static_cast<size_t>(k)] -
                                  sym[static_cast<size_t>(k)] * mat;
        int row = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                system(row++, k) = sqrt2 * r(i, j);
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    const double tol = 1e-10 * std::max(1.0, smax);

    std::vector<Eigen::MatrixXd> basis;
    for (int k = 0; k < n_sym; ++k) {
        const double sigma = (k < sv.size()) ? sv[k] : 0.0;
        if (sigma > tol) continue;
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
        for (int c = 0; c < n_sym; ++c) {
            b += svd.matrixV()(c, k) * sym[static_cast<size_t>(c)];
        }
        basis.push_back(std::move(b));
    }
    orient_first_nonnegative_trace(basis);

    MetricFamily fam;
    fam.dim = n;
    fam.basis = std::move(basis);
    fam.source_hamiltonian = mat;
    fam.construction = MetricFamily::Construction::nullspace;
    return fam;
}

DenseMatrix assemble_metric(const MetricFamily& family,
                            const MetricWeights& weights) {
    if (static_cast<int>(weights.kappa.size()) != family.size()) {
        throw DimensionMismatchError(
            "weight count does not match family size");
    }
    bool any_nonzero = false;
    for (double k : weights.kappa) any_nonzero |= (k != 0.0);
    if (!any_nonzero) {
        throw ConstructionError("metric weights must not all vanish");
    }
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(family.dim, family.dim);
    for (int i = 0; i < family.size(); ++i) {
        theta += weights.kappa[static_cast<size_t>(i)] *
                 family.basis[static_cast<size_t>(i)];
    }
    return DenseMatrix::from_real(0.5 * (theta + theta.transpose()));
}

MetricWeights fit_weights(const MetricFamily& family,
                          const Eigen::MatrixXd& target) {
    if (target.rows() != family.dim || target.cols() != family.dim) {
        throw DimensionMismatchError("fit_weights target dimension mismatch");
    }
    MetricWeights w;
    w.kappa.reserve(static_cast<size_t>(family.size()));
    for (const auto& b : family.basis) {
        w.kappa.push_back(b.cwiseProduct(target).sum());
    }
    return w;
}

std::optional<MetricWeights> find_spd_weights(const MetricFamily& family,
                                              int max_iterations) {
    if (family.size() == 0) return std::nullopt;
    const int n = family.dim;

    auto member = [&](const Eigen::VectorXd& kappa) {
        Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < family.size(); ++i) {
            theta += kappa[i] * family.basis[static_cast<size_t>(i)];
        }
        return theta;
    };

    // Ascend the smallest eigenvalue of the unit-weight member; its gradient
    // in kappa is v^T B_i v with v the minimal eigenvector.
    Eigen::VectorXd kappa = Eigen::VectorXd::Zero(family.size());
    for (int i = 0; i < family.size(); ++i) {
        kappa[i] = family.basis[static_cast<size_t>(i)].trace();
    }
    if (kappa.norm() < 1e-14) kappa.setOnes();
    kappa.normalize();

    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_kappa = kappa;
    for (int iter = 0; iter < max_iterations; ++iter) {
        const Eigen::MatrixXd theta = member(kappa);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(theta);
        const double min_eig = solver.eigenvalues()[0];
        if (min_eig > best) {
            best = min_eig;
            best_kappa = kappa;
        }
        if (min_eig > 10.0 * tol_pd(theta.norm())) {
            MetricWeights w;
            w.kappa.assign(kappa.data(), kappa.data() + kappa.size());
            return w;
        }
        const Eigen::VectorXd v = solver.eigenvectors().col(0);
        Eigen::VectorXd grad(family.size());
        for (int i = 0; i < family.size(); ++i) {
            grad[i] = v.transpose() * family.basis[static_cast<size_t>(i)] * v;
        }
        kappa += 0.5 * grad;
        const double norm = kappa.norm();
        if (norm < 1e-14) break;
        kappa /= norm;
    }
    return std::nullopt;
}

double span_principal_angle_sin(const MetricFamily& a, const MetricFamily& b) {
    if (a.dim != b.dim) {
        throw DimensionMismatchError("families live in different dimensions");
    }
    if (a.size() == 0 || b.size() == 0) {
        return (a.size() == b.size()) ? 0.0 : 1.0;
    }
    const Eigen::MatrixXd qa = stack_columns(a);
    const Eigen::MatrixXd qb = stack_columns(b);
    // Largest principal angle via the projection residual; stable for tiny
    // angles where acos of a cosine saturates.
    const Eigen::MatrixXd residual_ab = qb - qa * (qa.transpose() * qb);
    const Eigen::MatrixXd residual_ba = qa - qb * (qb.transpose() * qa);
    const double sin_ab =
        Eigen::JacobiSVD<Eigen::MatrixXd>(residual_ab).singularValues()[0];
    const double sin_ba =
        Eigen::JacobiSVD<Eigen::MatrixXd>(residual_ba).singularValues()[0];
    return std::max(sin_ab, sin_ba);
}

DenseMatrix two_level_metric(double alpha_h, double beta_m) {
    const double half_pi = M_PI / 2.0;
    if (!(std::abs(alpha_h) < half_pi)) {
        throw ConstructionError("alpha_h must lie in (-pi/2, pi/2)");
    }
    // beta = 0 makes the displayed matrix singular; the +-pi/2 endpoints are
    // regular (cos beta = 0, theta_+- = 1 +- |sin alpha| > 0) and are kept.
    if (!(std::abs(beta_m) <= half_pi) || beta_m == 0.0) {
        throw ConstructionError(
            "beta_m must lie in [-pi/2, pi/2] with beta_m != 0");
    }
    const double ca = std::cos(alpha_h);
    const double cb = std::cos(beta_m);
    const double sa = std::sin(alpha_h);
    Eigen::MatrixXd theta(2, 2);
    theta << 1.0 + ca * cb, -sa, -sa, 1.0 - ca * cb;
    return DenseMatrix::from_real(theta);
}

DenseMatrix three_level_metric(double z, double g, double a, double f,
                               double m) {
    const double denom = 9.0 + 2.0 * z + z * z + g * g;  // >= 8 always
    const double h = -0.5 * g *
                     (-2.0 * a * z - a * z * z + 7.0 * f - 2.0 * f * z -
                      f * z * z - a + 8.0 * m + m * g * g + f * g * g) /
                     denom;
    const double b = -(4.0 * a * z + 4.0 * f + 4.0 * f * z + 4.0 * a + h * g +
                       g * h * z) /
                     (8.0 + g * g);
    const double c = (-h - h * z - b * g) / 4.0;
    Eigen::MatrixXd theta(3, 3);
    theta << a, b, c, b, f, h, c, h, m;
    return DenseMatrix::from_real(theta);
}

PositivityReport positivity(const DenseMatrix& theta) {
    const Eigen::MatrixXd mat = require_real(theta, "positivity");
    const double asym = (mat - mat.transpose()).norm();
    if (asym > tol_sym_rel * mat.norm()) {
        throw AsymmetricInputError(asym,
                                   "positivity requires a symmetric matrix");
    }
    const Eigen::VectorXd ev =
        detail::sym_eigenvalues(0.5 * (mat + mat.transpose()));
    PositivityReport report;
    report.min_eigenvalue = ev.minCoeff();
    report.is_pd = report.min_eigenvalue > tol_pd(mat.norm());
    return report;
}

double residual(const DenseMatrix& h, const DenseMatrix& theta) {
    if (h.dim() != theta.dim()) {
        throw DimensionMismatchError("residual dimension mismatch");
    }
    const Eigen::MatrixXcd num = h.entries().adjoint() * theta.entries() -
                                 theta.entries() * h.entries();
    const double denom = h.frobenius_norm() * theta.frobenius_norm();
    if (denom == 0.0) return 0.0;
    return num.norm() / denom;
}

DenseMatrix hermitize(const DenseMatrix& h, const DenseMatrix& theta) {
    if (h.dim() != theta.dim()) {
        throw DimensionMismatchError("hermitize dimension mismatch");
    }
    const double res = residual(h, theta);
    if (res > 1e-8) {
        throw ConstructionError(
            "hermitize requires a compatible metric (residual " +
            std::to_string(res) + ")");
    }
    const Eigen::MatrixXd root = spd_sqrt(theta).real_part();
    const Eigen::MatrixXd mat = require_real(h, "hermitize");
    // root is SPD, so right-multiplying by its inverse is a Cholesky solve
    // against the transposed product.
    const Eigen::MatrixXd product = root * mat;
    const Eigen::MatrixXd result =
        root.llt().solve(product.transpose()).transpose();
    return DenseMatrix::from_real(result);
}

}  // namespace qherm
