#include "qherm/observables.hpp"

#include <cmath>

#include "qherm/domains.hpp"
#include "qherm/metric.hpp"
#include "qherm/models.hpp"
#include "qherm/numerics.hpp"

namespace qherm {

QConstraintParams QConstraintParams::make(double alpha_h, double beta_m,
                                          double s) {
    const double half_pi = M_PI / 2.0;
    if (!(std::abs(alpha_h) < half_pi)) {
        throw ConstructionError("alpha_h must lie in (-pi/2, pi/2)");
    }
    if (!(std::abs(beta_m) <= half_pi) || beta_m == 0.0) {
        throw ConstructionError(
            "beta_m must lie in [-pi/2, pi/2] with beta_m != 0");
    }
    if (!std::isfinite(s)) throw ConstructionError("s must be finite");
    return QConstraintParams{alpha_h, beta_m, s};
}

DomainFlags DomainFlags::make(bool in_dh, bool in_dtheta, bool in_dq) {
    return DomainFlags{in_dh, in_dtheta, in_dq, in_dh && in_dtheta && in_dq};
}

DenseMatrix q_from_s(const QConstraintParams& p) {
    // x - y = 2 sin a - s cos a cos b together with x + y = s.
    const double diff =
        2.0 * std::sin(p.alpha_h) - p.s * std::cos(p.alpha_h) * std::cos(p.beta_m);
    const double x = 0.5 * (p.s + diff);
    const double y = p.s - x;
    return build_second_observable(SecondObservableParams::make(x, y));
}

DomainFlags triple_check(const DenseMatrix& h, const DenseMatrix& q,
                         const DenseMatrix& theta) {
    if (h.dim() != q.dim() || h.dim() != theta.dim()) {
        throw DimensionMismatchError("triple_check dimension mismatch");
    }
    const bool in_dh =
        classify_spectrum(eig(h)).kind == SpectrumKind::real_nondegenerate;
    const bool in_dq =
        classify_spectrum(eig(q)).kind == SpectrumKind::real_nondegenerate;
    bool in_dtheta = false;
    try {
        in_dtheta = positivity(theta).is_pd && residual(h, theta) <= 1e-8 &&
                    residual(q, theta) <= 1e-8;
    } catch (const AsymmetricInputError&) {
        in_dtheta = false;
    }
    return DomainFlags::make(in_dh, in_dtheta, in_dq);
}

}  // namespace qherm
