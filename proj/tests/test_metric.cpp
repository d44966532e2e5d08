#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qherm/metric.hpp"
#include "qherm/models.hpp"
#include "qherm/numerics.hpp"
#include "test_helpers.hpp"

using namespace qherm;

namespace {

DenseMatrix two_level(double lambda) {
    return build_two_level(TwoLevelParams::make(lambda));
}

DenseMatrix three_level(double z, double g) {
    return build_three_level(ThreeLevelParams::make(z, g));
}

// Residual of projecting `target` onto the family span, relative to
// ||target||.
double projection_residual(const MetricFamily& fam,
                           const Eigen::MatrixXd& target) {
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(fam.dim, fam.dim);
    for (const auto& b : fam.basis) {
        proj += b.cwiseProduct(target).sum() * b;
    }
    return (proj - target).norm() / target.norm();
}

void check_family_invariants(const MetricFamily& fam, const DenseMatrix& h) {
    for (int i = 0; i < fam.size(); ++i) {
        const auto& bi = fam.basis[static_cast<size_t>(i)];
        CHECK((bi - bi.transpose()).norm() < 1e-12);
        CHECK(residual(h, DenseMatrix::from_real(bi)) <= 1e-10);
        for (int j = 0; j < fam.size(); ++j) {
            const double inner =
                bi.cwiseProduct(fam.basis[static_cast<size_t>(j)]).sum();
            CHECK(inner == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
    if (fam.size() > 0) CHECK(fam.basis.front().trace() >= 0.0);
}

}  // namespace

TEST_CASE("metric_basis: Hermitian diagonal case spans the diagonal matrices") {
    Eigen::MatrixXd d(2, 2);
    d << -1.0, 0.0, 0.0, 1.0;
    const MetricFamily fam = metric_basis(DenseMatrix::from_real(d));
    REQUIRE(fam.size() == 2);
    check_family_invariants(fam, DenseMatrix::from_real(d));
    for (const auto& b : fam.basis) {
        CHECK(std::abs(b(0, 1)) < 1e-14);
        CHECK(std::abs(b(1, 0)) < 1e-14);
    }
}

TEST_CASE("metric_basis: two-level family has the b = -(lambda/2)(a+d) shape") {
    const double lambda = 0.5;
    const DenseMatrix h = two_level(lambda);
    const MetricFamily fam = metric_basis(h);
    REQUIRE(fam.size() == 2);
    check_family_invariants(fam, h);
    for (const auto& b : fam.basis) {
        CHECK(b(0, 1) ==
              doctest::Approx(-(lambda / 2.0) * (b(0, 0) + b(1, 1)))
                  .epsilon(1e-10));
    }
}

TEST_CASE("metric_basis: degenerate or complex spectra are rejected") {
    CHECK_THROWS_AS((void)metric_basis(two_level(1.0)),
                    DegenerateSpectrumError);
    CHECK_THROWS_AS((void)metric_basis(two_level(2.0)),
                    DegenerateSpectrumError);
}

TEST_CASE("metric_basis: three-level span matches the closed form") {
    const DenseMatrix h = three_level(-0.5, 0.5);
    const MetricFamily fam = metric_basis(h);
    REQUIRE(fam.size() == 3);
    check_family_invariants(fam, h);
    const double probes[3][3] = {{1.0, 1.0, 1.0}, {2.0, -1.0, 0.5},
                                 {-0.3, 1.7, 2.2}};
    for (const auto& probe : probes) {
        const Eigen::MatrixXd theta =
            three_level_metric(-0.5, 0.5, probe[0], probe[1], probe[2])
                .real_part();
        CHECK(projection_residual(fam, theta) <= 1e-8);
    }
}

TEST_CASE("metric_nullspace_oracle: agrees with the dyadic construction") {
    for (double lambda : {0.2, 0.5, 0.8}) {
        const DenseMatrix h = two_level(lambda);
        const MetricFamily dyadic = metric_basis(h);
        const MetricFamily oracle = metric_nullspace_oracle(h);
        CHECK(oracle.size() == 2);
        check_family_invariants(oracle, h);
        CHECK(span_principal_angle_sin(dyadic, oracle) <= 1e-8);
    }
}

TEST_CASE("metric_nullspace_oracle: exceptional point keeps a 2-dim family "
          "without any positive member") {
    // The residual map has antisymmetric image, so one scalar constraint on
    // the 3-dim symmetric space: dimension stays 2 even at the EP. What is
    // lost there is positivity, not dimension (det = -(a-d)^2/4 <= 0).
    const MetricFamily fam = metric_nullspace_oracle(two_level(1.0));
    CHECK(fam.size() == 2);
    check_family_invariants(fam, two_level(1.0));
    CHECK(!find_spd_weights(fam).has_value());
}

TEST_CASE("metric_nullspace_oracle: identity input yields the full symmetric space") {
    for (int n : {2, 3}) {
        const MetricFamily fam = metric_nullspace_oracle(
            DenseMatrix::from_real(Eigen::MatrixXd::Identity(n, n)));
        CHECK(fam.size() == n * (n + 1) / 2);
    }
}

TEST_CASE("assemble_metric: weight validation and least-squares fit") {
    const DenseMatrix h = two_level(0.5);
    const MetricFamily fam = metric_basis(h);

    CHECK_THROWS_AS((void)assemble_metric(fam, MetricWeights{{0.0, 0.0}}),
                    ConstructionError);
    CHECK_THROWS_AS((void)assemble_metric(fam, MetricWeights{{1.0}}),
                    DimensionMismatchError);

    const DenseMatrix first = assemble_metric(fam, MetricWeights{{1.0, 0.0}});
    CHECK((first.real_part() - fam.basis[0]).norm() < 1e-14);

    const double alpha = std::asin(0.5);
    const Eigen::MatrixXd target =
        two_level_metric(alpha, M_PI / 3.0).real_part();
    const MetricWeights fitted = fit_weights(fam, target);
    const DenseMatrix assembled = assemble_metric(fam, fitted);
    CHECK((assembled.real_part() - target).norm() <= 1e-10 * target.norm());
}

TEST_CASE("two_level_metric: identity limit, frozen entries, domain checks") {
    const Eigen::MatrixXd id = two_level_metric(0.0, M_PI / 2.0).real_part();
    CHECK(id.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));

    const Eigen::MatrixXd theta =
        two_level_metric(M_PI / 6.0, M_PI / 2.0).real_part();
    CHECK(theta(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(theta(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(theta(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    const Spectrum s = sym_eig(DenseMatrix::from_real(theta));
    CHECK(s.eigenvalues[0].real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.eigenvalues[1].real() == doctest::Approx(1.5).epsilon(1e-14));

    CHECK_THROWS_AS((void)two_level_metric(M_PI / 2.0, 0.5),
                    ConstructionError);
    CHECK_THROWS_AS((void)two_level_metric(0.5, 0.0), ConstructionError);
    CHECK_THROWS_AS((void)two_level_metric(0.5, 2.0), ConstructionError);
}

TEST_CASE("two_level_metric: quasi-Hermitizes the matching Hamiltonian") {
    auto gen = testing::rng(57);
    for (int trial = 0; trial < 40; ++trial) {
        const double alpha = testing::uniform(gen, -1.45, 1.45);
        double beta = testing::uniform(gen, -1.45, 1.45);
        if (beta == 0.0) beta = 0.3;
        const DenseMatrix theta = two_level_metric(alpha, beta);
        const DenseMatrix h = two_level(std::sin(alpha));
        CHECK(residual(h, theta) <= 1e-12);
    }
}

TEST_CASE("three_level_metric: residual oracle over random probes") {
    auto gen = testing::rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const double z = testing::uniform(gen, -2.0, 2.0);
        const double g = testing::uniform(gen, -2.0, 2.0);
        const double a = testing::uniform(gen, -2.0, 2.0);
        const double f = testing::uniform(gen, -2.0, 2.0);
        const double m = testing::uniform(gen, -2.0, 2.0);
        const DenseMatrix theta = three_level_metric(z, g, a, f, m);
        CHECK(residual(three_level(z, g), theta) <= 1e-10);
    }
}

TEST_CASE("three_level_metric: eliminated entry matches the final closed form") {
    auto gen = testing::rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const double z = testing::uniform(gen, -2.0, 2.0);
        const double g = testing::uniform(gen, -2.0, 2.0);
        const double a = testing::uniform(gen, -2.0, 2.0);
        const double f = testing::uniform(gen, -2.0, 2.0);
        const double m = testing::uniform(gen, -2.0, 2.0);
        const Eigen::MatrixXd theta =
            three_level_metric(z, g, a, f, m).real_part();
        const double g2 = g * g;
        const double z2 = z * z;
        const double z3 = z2 * z;
        const double rhs = z * g2 * m + f * z * g2 + m * g2 + f * g2 -
                           3.0 * f * z2 - 3.0 * a * z2 - f * z3 - a * z3 -
                           9.0 * a - 11.0 * f * z - 11.0 * a * z - 9.0 * f;
        const double lhs = 2.0 * (9.0 + 2.0 * z + z2 + g2) * theta(0, 1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("three_level_metric: g = 0 limit decouples and solves the 2x2 block") {
    auto gen = testing::rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const double z = testing::uniform(gen, -2.0, 2.0);
        const double a = testing::uniform(gen, -2.0, 2.0);
        const double f = testing::uniform(gen, -2.0, 2.0);
        const double m = testing::uniform(gen, -2.0, 2.0);
        const Eigen::MatrixXd theta =
            three_level_metric(z, 0.0, a, f, m).real_part();
        CHECK(theta(1, 2) == 0.0);
        CHECK(theta(0, 2) == 0.0);
        CHECK(theta(0, 1) ==
              doctest::Approx(-(1.0 + z) * (a + f) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("three_level_metric: membership in the nullspace span") {
    const MetricFamily oracle = metric_nullspace_oracle(three_level(-0.5, 0.5));
    const Eigen::MatrixXd theta =
        three_level_metric(-0.5, 0.5, 1.0, 1.0, 1.0).real_part();
    CHECK(projection_residual(oracle, theta) <= 1e-8);
}

TEST_CASE("three_level_metric: positivity probes at frozen points") {
    const PositivityReport inside = positivity(three_level_metric(
        -1.0, 0.0, 1.0, 1.0, 1.0));
    CHECK(inside.is_pd);
    CHECK(inside.min_eigenvalue == doctest::Approx(1.0));

    CHECK(!positivity(three_level_metric(0.5, 0.0, 1.0, 1.0, 1.0)).is_pd);
    CHECK(!positivity(three_level_metric(0.2, 1.0, 1.0, 1.0, 1.0)).is_pd);
}

TEST_CASE("positivity: identity, the theta- boundary limit, asymmetry") {
    const PositivityReport id =
        positivity(DenseMatrix::from_real(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(id.is_pd);
    CHECK(id.min_eigenvalue == doctest::Approx(1.0));

    // Near alpha -> pi/2 the smallest metric eigenvalue closes like theta-.
    const double alpha = M_PI / 2.0 - 1e-4;
    const double beta = 0.9;
    const PositivityReport edge = positivity(two_level_metric(alpha, beta));
    const double ca = std::cos(alpha);
    const double expected =
        1.0 - std::sqrt(1.0 - ca * ca * std::sin(beta) * std::sin(beta));
    CHECK(edge.min_eigenvalue == doctest::Approx(expected).epsilon(1e-6));
    CHECK(edge.min_eigenvalue < 1e-7);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.2, -0.2, 1.0;
    CHECK_THROWS_AS((void)positivity(DenseMatrix::from_real(asym)),
                    AsymmetricInputError);
}

TEST_CASE("positivity: invariant under uniform positive scaling") {
    auto gen = testing::rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd s = testing::random_matrix(gen, 3, -1.0, 1.0);
        s = 0.5 * (s + s.transpose().eval());
        const double c = testing::uniform(gen, 0.1, 100.0);
        const bool base = positivity(DenseMatrix::from_real(s)).is_pd;
        const bool scaled =
            positivity(DenseMatrix::from_real((c * s).eval())).is_pd;
        CHECK(base == scaled);
    }
}

TEST_CASE("residual: anchors") {
    const DenseMatrix id = DenseMatrix::from_real(Eigen::MatrixXd::Identity(2, 2));
    Eigen::MatrixXd sym(2, 2);
    sym << 0.0, 1.0, 1.0, 0.5;
    CHECK(residual(DenseMatrix::from_real(sym), id) == 0.0);

    CHECK(residual(two_level(0.5), id) > 1e-2);

    const double alpha = std::asin(0.5);
    CHECK(residual(two_level(0.5), two_level_metric(alpha, M_PI / 4.0)) <=
          1e-14);

    CHECK_THROWS_AS(
        (void)residual(two_level(0.5),
                       DenseMatrix::from_real(Eigen::MatrixXd::Identity(3, 3))),
        DimensionMismatchError);
}

TEST_CASE("residual: linear combinations of a family stay in the kernel") {
    auto gen = testing::rng(73);
    const DenseMatrix h = three_level(-0.4, 0.7);
    const MetricFamily fam = metric_basis(h);
    for (int trial = 0; trial < 20; ++trial) {
        MetricWeights w;
        for (int i = 0; i < fam.size(); ++i) {
            w.kappa.push_back(testing::uniform(gen, -2.0, 2.0));
        }
        if (std::all_of(w.kappa.begin(), w.kappa.end(),
                        [](double v) { return v == 0.0; })) {
            w.kappa[0] = 1.0;
        }
        CHECK(residual(h, assemble_metric(fam, w)) <= 1e-10);
    }
}

TEST_CASE("hermitize: identity metric, two-level and three-level cases") {
    const DenseMatrix id = DenseMatrix::from_real(Eigen::MatrixXd::Identity(2, 2));
    Eigen::MatrixXd sym(2, 2);
    sym << 0.0, 1.0, 1.0, 0.5;
    const DenseMatrix h_sym = DenseMatrix::from_real(sym);
    CHECK((hermitize(h_sym, id).real_part() - sym).norm() < 1e-14);

    const double alpha = std::asin(0.5);
    const DenseMatrix h = two_level(0.5);
    const DenseMatrix theta = two_level_metric(alpha, M_PI / 4.0);
    const DenseMatrix result = hermitize(h, theta);
    const Eigen::MatrixXd r = result.real_part();
    CHECK((r - r.transpose()).norm() <= 1e-8 * r.norm());
    const Spectrum s = sym_eig(DenseMatrix::from_real(
        (0.5 * (r + r.transpose())).eval()));
    CHECK(s.eigenvalues[0].real() ==
          doctest::Approx(-std::sqrt(0.75)).epsilon(1e-9));
    CHECK(s.eigenvalues[1].real() ==
          doctest::Approx(std::sqrt(0.75)).epsilon(1e-9));

    const DenseMatrix h3 = three_level(-0.5, 0.5);
    const DenseMatrix theta3 = three_level_metric(-0.5, 0.5, 1.0, 1.0, 1.0);
    REQUIRE(positivity(theta3).is_pd);
    const Eigen::MatrixXd r3 = hermitize(h3, theta3).real_part();
    CHECK((r3 - r3.transpose()).norm() <= 1e-8 * r3.norm());
    const Spectrum before = eig(h3);
    const Spectrum after = eig(DenseMatrix::from_real(r3));
    for (size_t i = 0; i < before.eigenvalues.size(); ++i) {
        CHECK(std::abs(before.eigenvalues[i] - after.eigenvalues[i]) <=
              1e-9 * std::max(1.0, before.spectral_radius()));
    }
}

TEST_CASE("hermitize: rejects bad metrics") {
    const DenseMatrix h = two_level(0.5);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, -0.25, -0.25, -1.0;
    // Compatible with nothing: residual too large.
    CHECK_THROWS_AS(
        (void)hermitize(h, DenseMatrix::from_real(indefinite)), Error);

    // Compatible but not positive definite: the EP-side family member.
    const double alpha = std::asin(0.5);
    const Eigen::MatrixXd good =
        two_level_metric(alpha, M_PI / 4.0).real_part();
    const MetricFamily fam = metric_basis(h);
    const MetricWeights w = fit_weights(fam, (-good).eval());
    const DenseMatrix negated = assemble_metric(fam, w);
    CHECK(residual(h, negated) <= 1e-12);
    CHECK_THROWS_AS((void)hermitize(h, negated), NotPositiveDefiniteError);
}

TEST_CASE("family dimension equals matrix dimension on real nondegenerate spectra") {
    const DenseMatrix models[] = {
        two_level(0.5),
        three_level(-0.5, 0.5),
        build_nine(NineLevelParams::family(-0.5, 1.0)),
    };
    for (const auto& h : models) {
        const MetricFamily dyadic = metric_basis(h);
        const MetricFamily oracle = metric_nullspace_oracle(h);
        CHECK(dyadic.size() == h.dim());
        CHECK(oracle.size() == h.dim());
        CHECK(span_principal_angle_sin(dyadic, oracle) <= 1e-8);
    }
}

TEST_CASE("find_spd_weights: recovers a positive member where one exists") {
    for (int n : {4, 6}) {
        const DenseMatrix h =
            build_discrete_robin(RobinLatticeParams::make(n, 0.5));
        const MetricFamily fam = metric_nullspace_oracle(h);
        REQUIRE(fam.size() == n);
        const auto weights = find_spd_weights(fam);
        REQUIRE(weights.has_value());
        const DenseMatrix theta = assemble_metric(fam, *weights);
        CHECK(positivity(theta).is_pd);
        CHECK(residual(h, theta) <= 1e-10);
    }
}
