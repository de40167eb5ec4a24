#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "psdyn/hamiltonian.hpp"

using namespace psdyn;

namespace {

Vec pt(double q, double p) {
    Vec X(2);
    X << q, p;
    return X;
}

// central-difference consistency of gradient and Hessian
void check_derivatives(const HamiltonianModel& m, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2, 2);
    const int n2 = 2 * m.dim;
    for (int trial = 0; trial < 20; ++trial) {
        Vec X(n2);
        for (int k = 0; k < n2; ++k) X[k] = u(rng);
        const Vec g = m.gradient(X);
        const Mat H = m.hessian(X);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        const double h = 1e-5;
        for (int k = 0; k < n2; ++k) {
            Vec Xp = X, Xm = X;
            Xp[k] += h;
            Xm[k] -= h;
            const double fd = (m.value(Xp) - m.value(Xm)) / (2 * h);
            CHECK(std::abs(fd - g[k]) <= 1e-6 * (1.0 + std::abs(g[k])));
            const Vec gfd = (m.gradient(Xp) - m.gradient(Xm)) / (2 * h);
            for (int l = 0; l < n2; ++l)
                CHECK(std::abs(gfd[l] - H(l, k)) <= 1e-5 * (1.0 + std::abs(H(l, k))));
        }
        // complex evaluator restricted to real arguments
        const Complex vc = m.value_c(X.cast<Complex>());
        CHECK(std::abs(vc - Complex(m.value(X), 0)) <= 1e-14 * (1.0 + std::abs(vc)));
    }
}

}  // namespace

TEST_CASE("builtin models match the closed forms") {
    const HamiltonianModel free = builtin(HamiltonianKind::free, 1);
    CHECK(free.value(pt(1, 2)) == 4.0);
    CHECK(free.gradient(pt(1, 2))[1] == 4.0);
    CHECK(free.hessian(pt(1, 2))(0, 0) == 0.0);
    CHECK(free.hessian(pt(1, 2))(1, 1) == 2.0);

    const HamiltonianModel lin = builtin(HamiltonianKind::linear_field, 1);
    CHECK(lin.value(pt(3, 0)) == 3.0);

    const HamiltonianModel harm = builtin(HamiltonianKind::harmonic, 1);
    CHECK(harm.value(pt(1, 1)) == 2.0);
    CHECK((harm.hessian(pt(1, 1)) - 2.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(builtin(HamiltonianKind::custom, 1), Error);
}

TEST_CASE("derivative consistency across models") {
    std::mt19937 rng(11);
    for (HamiltonianKind k : {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        check_derivatives(builtin(k, 1), rng);
        check_derivatives(builtin(k, 2), rng);
    }
    check_derivatives(polynomial_model({0.0, 0.5, 1.0, 0.25}), rng);
}

TEST_CASE("double_phase_symbol") {
    const HamiltonianModel free = builtin(HamiltonianKind::free, 1);
    const HamiltonianModel harm = builtin(HamiltonianKind::harmonic, 1);

    // on the invariant plane P = (1/2) J X the symbol equals H(X)
    Vec X = pt(1, 1), P = pt(0.5, -0.5);
    CHECK(double_phase_symbol(free, X, P) == doctest::Approx(1.0).epsilon(1e-14));

    // hand evaluations of X/2 - J P
    CHECK(double_phase_symbol(free, pt(0, 0), pt(0, 1)) == doctest::Approx(0.0));
    CHECK(double_phase_symbol(harm, pt(2, 0), pt(0, 1)) == doctest::Approx(0.0));
}

TEST_CASE("double_phase_symbol on-plane identity, randomized") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (HamiltonianKind k : {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const HamiltonianModel m = builtin(k, 1);
        const Mat J = canonical_J(1);
        for (int trial = 0; trial < 1000; ++trial) {
            Vec X = pt(u(rng), u(rng));
            const Vec P = 0.5 * J * X;
            CHECK(std::abs(double_phase_symbol(m, X, P) - m.value(X)) <=
                  1e-14 * (1.0 + std::abs(m.value(X))));
        }
    }
}

TEST_CASE("polynomial degree drives the operator path") {
    CHECK(polynomial_model({0, 0, 1}).polynomial_degree == 2);
    CHECK(polynomial_model({0, 0, 0, 1}).polynomial_degree == 3);
    CHECK(builtin(HamiltonianKind::harmonic, 1).polynomial_degree == 2);
}
