#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "psdyn/core.hpp"

using namespace psdyn;

TEST_CASE("canonical_J block form and algebra") {
    const Mat J1 = canonical_J(1);
    CHECK(J1(0, 0) == 0.0);
    CHECK(J1(0, 1) == 1.0);
    CHECK(J1(1, 0) == -1.0);
    CHECK(J1(1, 1) == 0.0);

    for (int d = 1; d <= 4; ++d) {
        const Mat J = canonical_J(d);
        CHECK((J * J + Mat::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((J.transpose() + J).cwiseAbs().maxCoeff() == 0.0);
        CHECK(J.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(canonical_J(0), Error);
}

TEST_CASE("check_siegel basics") {
    CMat M = Complex(0, 1) * CMat::Identity(1, 1);
    CHECK(check_siegel(M).ok);

    CMat M2(2, 2);
    M2 << Complex(0, 1), Complex(0, 0), Complex(0, 0), Complex(0, -1);
    const SiegelReport rep = check_siegel(M2);
    CHECK_FALSE(rep.ok);
    CHECK(rep.min_imag_eig < 0);

    CMat bad(2, 3);
    bad.setZero();
    CHECK_THROWS_AS(check_siegel(bad), Error);
}

TEST_CASE("check_siegel invariant under re-symmetrization of near-symmetric input") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        CMat S(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) S(i, j) = Complex(u(rng), u(rng));
        S = (S + S.transpose().eval()) / 2.0;
        S += Complex(0, 2.5) * CMat::Identity(2, 2);  // push Im into the cone
        CMat noisy = S;
        noisy(0, 1) += Complex(1e-14, -1e-14);  // within tolerance
        const bool a = check_siegel(noisy).ok;
        const CMat resym = 0.5 * (noisy + noisy.transpose().eval());
        const bool b = check_siegel(resym).ok;
        CHECK(a == b);
    }
}

TEST_CASE("check_scaled_symplectic") {
    // (i/2) I is (2/i)-symplectic
    CMat M = Complex(0, 0.5) * CMat::Identity(2, 2);
    CHECK(check_scaled_symplectic(M));

    // i I is not: (2/i) M = 2I scales J by 4
    CHECK_FALSE(check_scaled_symplectic(CMat(Complex(0, 1) * CMat::Identity(2, 2))));

    // closed-form double-phase anisotropy at t = 0.7
    const double t = 0.7;
    const Complex f = Complex(0, 1) / (2.0 * Complex(1, t));
    CMat Q(2, 2);
    Q << f, -f * t, -f * t, f * (1.0 + 2.0 * Complex(0, 1) * t);
    CHECK(check_scaled_symplectic(Q));

    CMat odd(3, 3);
    odd.setZero();
    CHECK_THROWS_AS(check_scaled_symplectic(odd), Error);
}

TEST_CASE("SemiclassicalConfig and grid validation") {
    CHECK_THROWS_AS(SemiclassicalConfig(-1.0, 1), Error);
    CHECK_THROWS_AS(SemiclassicalConfig(1.0, 0), Error);
    GridSpec g{0, 1, 0, 1, 1, 5};
    CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("DoublePhasePoint on-plane flag") {
    Vec X(2), P(2);
    X << 1.0, 2.0;
    P << 1.0, -0.5;  // (1/2) J X = (p/2, -q/2) = (1, -0.5)
    CHECK(DoublePhasePoint(X, P).on_plane());
    P << 1.0, 0.5;
    CHECK_FALSE(DoublePhasePoint(X, P).on_plane());
}

TEST_CASE("field L2 norm of a unit Gaussian") {
    // |Psi|^2 = (1/(pi s^2)) exp(-(q^2+p^2)/s^2) integrates to 1
    GridSpec g{-6, 6, -6, 6, 201, 201};
    ComplexField f = make_field(g, 0.1, 0.0, Method::exact);
    const double s2 = 0.5;
    for (int i = 0; i < g.nq; ++i)
        for (int j = 0; j < g.np; ++j) {
            const double r2 = g.q(i) * g.q(i) + g.p(j) * g.p(j);
            f.at(i, j) = std::sqrt(std::exp(-r2 / s2) / (M_PI * s2));
        }
    CHECK(f.l2_norm() == doctest::Approx(1.0).epsilon(1e-8));
}
