#include "qherm/models.hpp"

#include <cmath>

namespace qherm {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ConstructionError(std::string(name) + " must be finite");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter records
// ---------------------------------------------------------------------------

TwoLevelParams TwoLevelParams::make(double lambda) {
    require_finite(lambda, "lambda");
    TwoLevelParams p;
    p.lambda = lambda;
    if (std::abs(lambda) <= 1.0) p.alpha_h = std::asin(lambda);
    return p;
}

ThreeLevelParams ThreeLevelParams::make(double z, double g) {
    require_finite(z, "z");
    require_finite(g, "g");
    return ThreeLevelParams{z, g};
}

ChainParams ChainParams::make(int n, double t, std::vector<double> g_list) {
    if (n < 2) throw ConstructionError("chain dimension must be >= 2");
    require_finite(t, "t");
    if (t < 0.0) throw ConstructionError("chain parameter t must be >= 0");
    const int j = n / 2;
    if (static_cast<int>(g_list.size()) != j) {
        throw ConstructionError("chain needs exactly floor(N/2) = " +
                                std::to_string(j) + " G entries");
    }
    for (double g : g_list) require_finite(g, "G entry");
    ChainParams p{n, t, std::move(g_list)};
    for (int k = 1; k < n; ++k) {
        if (p.radicand(k) < 0.0) {
            throw ConstructionError(
                "chain radicand negative at coupling k = " + std::to_string(k),
                k);
        }
    }
    return p;
}

double ChainParams::radicand(int k) const {
    const int j = n / 2;
    // G is specified on k = 1..J; the upper half mirrors G_{N-k}.
    const int idx = (k <= j) ? k : n - k;
    double series = 1.0;
    double tp = 1.0;
    for (int power = 1; power <= j - 1; ++power) {
        tp *= t;
        series -= tp;
    }
    tp *= t;  // t^J
    series -= g_list[static_cast<size_t>(idx - 1)] * tp;
    return static_cast<double>(k) * static_cast<double>(n - k) * series;
}

NineLevelParams NineLevelParams::raw(double b, double c, double d, double a_c) {
    require_finite(b, "b");
    require_finite(c, "c");
    require_finite(d, "d");
    require_finite(a_c, "a_c");
    NineLevelParams p;
    p.b = b;
    p.c = c;
    p.d = d;
    p.a_c = a_c;
    return p;
}

NineLevelParams NineLevelParams::family(double t, double beta_env) {
    require_finite(t, "t");
    require_finite(beta_env, "beta_env");
    if (t <= -1.0) {
        throw ConstructionError(
            "nine-level family requires t > -1 for real couplings");
    }
    NineLevelParams p;
    p.b = std::sqrt(3.0 + 3.0 * t);
    p.c = 2.0 * std::sqrt(1.0 + t);
    p.d = std::sqrt(3.0 + 3.0 * t);
    p.a_c = beta_env * t;
    p.t = t;
    p.beta_env = beta_env;
    return p;
}

RobinLatticeParams RobinLatticeParams::make(int n, double lambda,
                                            std::optional<double> mu) {
    if (n < 2) throw ConstructionError("lattice dimension must be >= 2");
    require_finite(lambda, "lambda");
    if (mu) {
        require_finite(*mu, "mu");
        if (n < 4) {
            throw ConstructionError("mu requires lattice dimension >= 4");
        }
    }
    return RobinLatticeParams{n, lambda, mu};
}

SecondObservableParams SecondObservableParams::make(double x, double y) {
    require_finite(x, "x");
    require_finite(y, "y");
    if (x * y <= -1.0) {
        throw ConstructionError(
            "observability requires x*y > -1 (got x*y = " +
            std::to_string(x * y) + ")");
    }
    return SecondObservableParams{x, y};
}

const char* family_name(Family f) {
    switch (f) {
        case Family::two_level: return "two_level";
        case Family::three_level: return "three_level";
        case Family::chain: return "chain";
        case Family::nine_level: return "nine_level";
        case Family::robin_lattice: return "robin_lattice";
        case Family::second_observable: return "second_observable";
    }
    return "unknown";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "two_level") return Family::two_level;
    if (name == "three_level") return Family::three_level;
    if (name == "chain") return Family::chain;
    if (name == "nine_level") return Family::nine_level;
    if (name == "robin_lattice") return Family::robin_lattice;
    if (name == "second_observable") return Family::second_observable;
    return std::nullopt;
}

Family ModelSpec::family() const {
    return static_cast<Family>(params.index());
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

DenseMatrix build_two_level(const TwoLevelParams& p) {
    Eigen::MatrixXd m(2, 2);
    m << -1.0, p.lambda, -p.lambda, 1.0;
    return DenseMatrix::from_real(m);
}

DenseMatrix build_three_level(const ThreeLevelParams& p) {
    Eigen::MatrixXd m(3, 3);
    m << -1.0, 1.0 + p.z, 0.0,
         -1.0 - p.z, 1.0, p.g,
         0.0, -p.g, 3.0;
    return DenseMatrix::from_real(m);
}

DenseMatrix build_chain(const ChainParams& p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.n, p.n);
    for (int k = 1; k <= p.n; ++k) {
        m(k - 1, k - 1) = static_cast<double>(2 * k - p.n - 1);
    }
    for (int k = 1; k < p.n; ++k) {
        const double rad = p.radicand(k);
        if (rad < 0.0) {
            throw ConstructionError(
                "chain radicand negative at coupling k = " + std::to_string(k),
                k);
        }
        const double v = std::sqrt(rad);
        m(k - 1, k) = v;
        m(k, k - 1) = -v;
    }
    return DenseMatrix::from_real(m);
}

DenseMatrix build_nine(const NineLevelParams& p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
    for (int k = 0; k < 9; ++k) m(k, k) = static_cast<double>(2 * k - 8);
    const double sup[8] = {p.b, p.c, p.d, p.a_c, p.a_c, p.d, p.c, p.b};
    for (int k = 0; k < 8; ++k) {
        m(k, k + 1) = sup[k];
        m(k + 1, k) = -sup[k];
    }
    return DenseMatrix::from_real(m);
}

DenseMatrix build_discrete_robin(const RobinLatticeParams& p) {
    const int n = p.n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = -1.0;
        m(k + 1, k) = -1.0;
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    // Top-left corner pattern first; the mirrored pattern is skipped where it
    // would land on an already-written entry (the N = 2 lambda case and the
    // N = 4 mu case collapse onto the same bond).
    auto place = [&w](int i, int j, double value) {
        if (w(i, j) == 0.0 && w(j, i) == 0.0) {
            w(i, j) = value;
            w(j, i) = -value;
        }
    };
    place(0, 1, -p.lambda);
    place(n - 2, n - 1, p.lambda);
    if (p.mu) {
        place(1, 2, *p.mu);
        place(n - 3, n - 2, -*p.mu);
    }
    return DenseMatrix::from_real(m + w);
}

DenseMatrix build_second_observable(const SecondObservableParams& p) {
    Eigen::MatrixXd m(2, 2);
    m << -1.0, p.x, p.y, 1.0;
    return DenseMatrix::from_real(m);
}

DenseMatrix build_model(const ModelSpec& spec) {
    return std::visit(
        [](const auto& p) -> DenseMatrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, TwoLevelParams>) {
                return build_two_level(p);
            } else if constexpr (std::is_same_v<T, ThreeLevelParams>) {
                return build_three_level(p);
            } else if constexpr (std::is_same_v<T, ChainParams>) {
                return build_chain(p);
            } else if constexpr (std::is_same_v<T, NineLevelParams>) {
                return build_nine(p);
            } else if constexpr (std::is_same_v<T, RobinLatticeParams>) {
                return build_discrete_robin(p);
            } else {
                return build_second_observable(p);
            }
        },
        spec.params);
}

std::vector<double> robin_continuum_spectrum(double alpha_r, double length,
                                             int n_max) {
    if (!(alpha_r > 0.0) || !(length > 0.0)) {
        throw ConstructionError(
            "robin_continuum_spectrum requires alpha_r > 0 and L > 0");
    }
    if (n_max < 0) throw ConstructionError("n_max must be >= 0");
    const double ratio = 2.0 * length * alpha_r / M_PI;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, ratio)) {
        throw ConstructionError(
            "resonant strength: 2*L*alpha/pi hits the excluded integer " +
                std::to_string(static_cast<long>(nearest)),
            static_cast<int>(nearest));
    }
    std::vector<double> energies;
    energies.reserve(static_cast<size_t>(n_max) + 1);
    energies.push_back(alpha_r * alpha_r);
    for (int n = 1; n <= n_max; ++n) {
        const double k = static_cast<double>(n) * M_PI / (2.0 * length);
        energies.push_back(k * k);
    }
    return energies;
}

}  // namespace qherm
