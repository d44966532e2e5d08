#pragma once

#include "qherm/types.hpp"

namespace qherm {

// Parameters of the compatible second observable: Hamiltonian angle alpha_h,
// metric angle beta_m (both in their open intervals) and the free sum
// s = x + y, unrestricted.
struct QConstraintParams {
    double alpha_h = 0.0;
    double beta_m = 0.0;
    double s = 0.0;

    static QConstraintParams make(double alpha_h, double beta_m, double s);
};

struct DomainFlags {
    bool in_dh = false;
    bool in_dtheta = false;
    bool in_dq = false;
    bool in_d = false;  // always the conjunction of the other three

    static DomainFlags make(bool in_dh, bool in_dtheta, bool in_dq);
};

// Solves the compatibility relation x - y = 2 sin a - s cos a cos b together
// with x + y = s and returns the observable [[-1, x], [y, 1]].
DenseMatrix q_from_s(const QConstraintParams& p);

// Membership test for the three domains: H spectrum real nondegenerate,
// Theta SPD and quasi-Hermitizing both H and Q (residuals <= 1e-8),
// Q spectrum real nondegenerate.
DomainFlags triple_check(const DenseMatrix& h, const DenseMatrix& q,
                         const DenseMatrix& theta);

}  // namespace qherm
