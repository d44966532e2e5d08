#pragma once

#include <optional>
#include <variant>

#include "qherm/types.hpp"

namespace qherm {

// ---------------------------------------------------------------------------
// Parameter records. Construction validates eagerly; builders never emit NaN.
// ---------------------------------------------------------------------------

// Two-level model H = [[-1, lambda], [-lambda, 1]].
// alpha_h = arcsin(lambda) exists only for |lambda| <= 1.
struct TwoLevelParams {
    double lambda = 0.0;
    std::optional<double> alpha_h;

    static TwoLevelParams make(double lambda);
};

// Three-level extension with detuned 1<->2 coupling z and environment
// coupling g.
struct ThreeLevelParams {
    double z = 0.0;
    double g = 0.0;

    static ThreeLevelParams make(double z, double g);
};

// Tridiagonal N-site chain with equidistant diagonal and antisymmetric
// couplings parametrized by t >= 0 and J = floor(N/2) strengths G_k.
struct ChainParams {
    int n = 2;
    double t = 0.0;
    std::vector<double> g_list;  // size J

    static ChainParams make(int n, double t, std::vector<double> g_list);
    // Radicand k(N-k)(1 - t - t^2 - ... - t^{J-1} - G_k t^J) with G mirrored
    // for k > J; k runs 1..N-1.
    double radicand(int k) const;
};

// Nine-level chain with couplings (b, c, d) toward the center and central
// coupling a_c, either given raw or derived from the one-parameter family
// b = d = sqrt(3+3t), c = 2 sqrt(1+t), a_c = beta_env * t.
struct NineLevelParams {
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double a_c = 0.0;
    std::optional<double> t;
    std::optional<double> beta_env;

    static NineLevelParams raw(double b, double c, double d, double a_c);
    static NineLevelParams family(double t, double beta_env);
};

// Discrete Laplacian lattice with antisymmetric corner perturbations of
// strength lambda (and optionally mu on the second bond, N >= 4).
struct RobinLatticeParams {
    int n = 2;
    double lambda = 0.0;
    std::optional<double> mu;

    static RobinLatticeParams make(int n, double lambda,
                                   std::optional<double> mu = std::nullopt);
};

// Candidate second observable Q = [[-1, x], [y, 1]]; observability needs
// x*y > -1.
struct SecondObservableParams {
    double x = 0.0;
    double y = 0.0;

    static SecondObservableParams make(double x, double y);
};

enum class Family {
    two_level,
    three_level,
    chain,
    nine_level,
    robin_lattice,
    second_observable,
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

// Tagged union naming one model family plus its validated parameter record.
struct ModelSpec {
    std::variant<TwoLevelParams, ThreeLevelParams, ChainParams,
                 NineLevelParams, RobinLatticeParams, SecondObservableParams>
        params;

    Family family() const;
};

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

DenseMatrix build_two_level(const TwoLevelParams& p);
DenseMatrix build_three_level(const ThreeLevelParams& p);
DenseMatrix build_chain(const ChainParams& p);
DenseMatrix build_nine(const NineLevelParams& p);
DenseMatrix build_discrete_robin(const RobinLatticeParams& p);
DenseMatrix build_second_observable(const SecondObservableParams& p);

DenseMatrix build_model(const ModelSpec& spec);

// Interval-with-endpoint-interaction spectrum: [alpha_r^2, (pi/2L)^2,
// (2 pi/2L)^2, ...] up to index n_max. Rejects the resonant strengths where
// 2 L alpha_r / pi is a positive integer (E_0 would collide with a lattice
// level), naming the integer hit.
std::vector<double> robin_continuum_spectrum(double alpha_r, double length,
                                             int n_max);

}  // namespace qherm
