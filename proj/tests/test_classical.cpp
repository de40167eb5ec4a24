#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "psdyn/classical.hpp"

using namespace psdyn;

namespace {
Vec pt(double q, double p) {
    Vec X(2);
    X << q, p;
    return X;
}
const Complex I1(0, 1);
}  // namespace

TEST_CASE("flow endpoints match the closed-form flows") {
    const double dt = 1e-3;
    {
        const auto r = integrate_flow(builtin(HamiltonianKind::free, 1), pt(1, 1), 0.5, dt);
        CHECK(r.final_point()[0] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(r.final_point()[1] == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
        const auto r = integrate_flow(builtin(HamiltonianKind::linear_field, 1), pt(0, 1), 1.0, dt);
        CHECK(r.final_point()[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.final_point()[1] == doctest::Approx(0.0).epsilon(1e-10));
    }
    {
        const auto r = integrate_flow(builtin(HamiltonianKind::harmonic, 1), pt(1, 0), M_PI / 4, dt);
        CHECK(r.final_point()[0] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(r.final_point()[1] == doctest::Approx(-1.0).epsilon(1e-10));
    }
}

TEST_CASE("action closed forms") {
    const double dt = 1e-3;
    CHECK(integrate_flow(builtin(HamiltonianKind::free, 1), pt(0, 1), 1.0, dt).action.back() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_flow(builtin(HamiltonianKind::linear_field, 1), pt(0, 1), 1.0, dt).action.back() ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
    CHECK(integrate_flow(builtin(HamiltonianKind::harmonic, 1), pt(1, 0), M_PI / 8, dt).action.back() ==
          doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("record starts at the initial point with zero actions") {
    const auto r = integrate_flow(builtin(HamiltonianKind::free, 1), pt(0.3, -0.4), 0.25, 1e-3);
    CHECK(r.points.front()[0] == 0.3);
    CHECK(r.action.front() == 0.0);
    CHECK(r.sym_action.front() == 0.0);
}

TEST_CASE("energy conservation along orbits") {
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const HamiltonianModel m = builtin(k, 1);
        const auto r = integrate_flow(m, pt(0.7, -0.3), 1.0, 1e-3);
        const double H0 = m.value(r.initial());
        for (const Vec& X : r.points) CHECK(std::abs(m.value(X) - H0) <= 1e-8);
    }
}

TEST_CASE("symmetrized action identity A_w - A = -(p_t q_t - p_0 q_0)/2") {
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const auto r = integrate_flow(builtin(k, 1), pt(0.4, 0.9), 1.0, 1e-3);
        for (size_t s = 0; s < r.t.size(); ++s) {
            const double pq_t = r.points[s][1] * r.points[s][0];
            const double pq_0 = r.points[0][1] * r.points[0][0];
            CHECK(std::abs(r.sym_action[s] - r.action[s] + 0.5 * (pq_t - pq_0)) <= 1e-8);
        }
    }
}

TEST_CASE("variational closed forms: free and harmonic") {
    const double dt = 1e-3;
    {
        const auto vt = integrate_variational(builtin(HamiltonianKind::free, 1), pt(0, 1), 1.0, dt);
        for (size_t s = 0; s < vt.states.size(); ++s) {
            const double t = vt.traj.t[s];
            CHECK(std::abs(vt.states[s].A(0, 0) - Complex(1, 2 * t)) <= 1e-9);
            CHECK(std::abs(vt.states[s].B(0, 0) - I1) <= 1e-9);
        }
        // det(A - iB) = 2 + 2it
        const auto& last = vt.states.back();
        const Complex det = std::exp(last.log_det_AmiB);
        CHECK(std::abs(det - Complex(2, 2)) <= 1e-8);
    }
    {
        const auto vt = integrate_variational(builtin(HamiltonianKind::harmonic, 1), pt(1, 0), 1.0, dt);
        for (size_t s = 0; s < vt.states.size(); ++s) {
            const double t = vt.traj.t[s];
            CHECK(std::abs(vt.states[s].A(0, 0) - std::exp(2.0 * I1 * t)) <= 1e-9);
            CHECK(std::abs(vt.states[s].B(0, 0) - I1 * std::exp(2.0 * I1 * t)) <= 1e-9);
        }
    }
    {
        const auto vt = integrate_variational(builtin(HamiltonianKind::free, 1), pt(0, 1), 0.0, dt);
        CHECK(vt.states.back().A(0, 0) == Complex(1, 0));
        CHECK(vt.states.back().B(0, 0) == Complex(0, 1));
    }
}

TEST_CASE("anisotropy Z closed forms and Siegel membership") {
    const double dt = 1e-3;
    {
        const auto vt = integrate_variational(builtin(HamiltonianKind::free, 1), pt(0.2, 0.4), 1.0, dt);
        for (size_t s = 0; s < vt.states.size(); s += 100) {
            const double t = vt.traj.t[s];
            const CMat Z = anisotropy_Z(vt.states[s]);
            CHECK(std::abs(Z(0, 0) - I1 / Complex(1, 2 * t)) <= 1e-9);
            CHECK(check_siegel(Z).ok);
        }
        // t = 0.5: Z = 0.5 + 0.5i ; t = 1: Z = 0.4 + 0.2i
        const auto half = integrate_variational(builtin(HamiltonianKind::free, 1), pt(0, 1), 0.5, dt);
        CHECK(std::abs(anisotropy_Z(half.states.back())(0, 0) - Complex(0.5, 0.5)) <= 1e-9);
        const auto one = integrate_variational(builtin(HamiltonianKind::linear_field, 1), pt(0, 1), 1.0, dt);
        CHECK(std::abs(anisotropy_Z(one.states.back())(0, 0) - Complex(0.4, 0.2)) <= 1e-9);
    }
    {
        const auto vt = integrate_variational(builtin(HamiltonianKind::harmonic, 1), pt(1, 1), 1.0, dt);
        for (size_t s = 0; s < vt.states.size(); s += 100)
            CHECK(std::abs(anisotropy_Z(vt.states[s])(0, 0) - I1) <= 1e-9);
    }
}

TEST_CASE("Riccati residual of the integrated anisotropy") {
    // dZ/dt + Z Hpp Z + Hqp Z + Z Hpq + Hqq = 0, derivative by central
    // differences; |Z'''| ~ 48 near t = 0, so the sample step must satisfy
    // 48 h^2 / 6 <= 1e-6, i.e. h <= 3.5e-4
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const HamiltonianModel m = builtin(k, 1);
        const auto vt = integrate_variational(m, pt(0.3, 0.8), 1.0, 2.5e-4);
        for (size_t s = 1; s + 1 < vt.states.size(); s += 200) {
            const double h = vt.traj.t[s + 1] - vt.traj.t[s];
            const CMat Zp = anisotropy_Z(vt.states[s + 1]);
            const CMat Zm = anisotropy_Z(vt.states[s - 1]);
            const CMat Z = anisotropy_Z(vt.states[s]);
            const CMat dZ = (Zp - Zm) / (2 * h);
            const Mat H = m.hessian(vt.traj.points[s]);
            const Complex res =
                dZ(0, 0) + Z(0, 0) * H(1, 1) * Z(0, 0) + H(0, 1) * Z(0, 0) + Z(0, 0) * H(1, 0) + H(0, 0);
            CHECK(std::abs(res) <= 1e-6);
        }
    }
}

TEST_CASE("anisotropy Q block formula") {
    // closed form: Z = i/(1+2it) gives Q = i/(2(1+it)) [[1, -t], [-t, 1+2it]]
    const double t = 1.0;
    CMat Z(1, 1);
    Z << I1 / Complex(1, 2 * t);
    const CMat Q = anisotropy_Q(Z);
    const Complex f = I1 / (2.0 * Complex(1, t));
    CHECK(std::abs(Q(0, 0) - f) <= 1e-14);
    CHECK(std::abs(Q(0, 1) - f * (-t)) <= 1e-14);
    CHECK(std::abs(Q(1, 0) - f * (-t)) <= 1e-14);
    CHECK(std::abs(Q(1, 1) - f * Complex(1, 2 * t)) <= 1e-14);

    CMat Zi(1, 1);
    Zi << I1;
    const CMat Qi = anisotropy_Q(Zi);
    CHECK((Qi - Complex(0, 0.5) * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(check_scaled_symplectic(Qi));
}

TEST_CASE("anisotropy Q respects Siegel and scaled-symplectic structure on random inputs") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        // random 1x1 or 2x2 Siegel matrix
        const int d = 1 + (trial % 2);
        CMat Z(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) Z(i, j) = Complex(u(rng), u(rng));
        Z = 0.5 * (Z + Z.transpose().eval());
        // shift the imaginary part well into the positive cone
        Z += Complex(0, d + 1.5) * CMat::Identity(d, d);
        REQUIRE(check_siegel(Z).ok);
        const CMat Q = anisotropy_Q(Z);
        CHECK(check_siegel(Q).ok);
        CHECK(check_scaled_symplectic(Q));
    }
}

TEST_CASE("caustic guard") {
    VariationalState s;
    s.A = CMat::Zero(1, 1);
    s.B = I1 * CMat::Identity(1, 1);
    CHECK_THROWS_AS(anisotropy_Z(s), Error);
}

TEST_CASE("branch tracking rejects coarse steps") {
    // harmonic arg(det A) advances by 2*dt per step; dt = 1 jumps by 2 > pi/2
    CHECK_THROWS_AS(integrate_variational(builtin(HamiltonianKind::harmonic, 1), pt(1, 0), 3.0, 1.0),
                    Error);
}

TEST_CASE("divergence error reports last valid time") {
    // inverted quartic: orbits escape in finite time
    const HamiltonianModel m = polynomial_model({0, 0, 0, 0, -1.0});
    try {
        integrate_flow(m, pt(2.0, 1.0), 10.0, 1e-3);
        FAIL("expected divergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::divergence);
        CHECK(std::string(e.what()).find("last valid time") != std::string::npos);
    }
}

TEST_CASE("Ehrenfest diagnostic") {
    const double hbar = 0.01;
    // harmonic: rotation, norm bounded -> exceeds horizon
    CHECK_FALSE(
        ehrenfest_time(builtin(HamiltonianKind::harmonic, 1), pt(0.3, 0.2), hbar, 100.0, 1e-3).has_value());

    // free: closed-form crossing of ||[[1,2t],[0,1]]|| = hbar^{-1/2}:
    // T = (h - 1/h)/2 with h = hbar^{-1/2}
    const auto te = ehrenfest_time(builtin(HamiltonianKind::free, 1), pt(0, 1), hbar, 100.0, 1e-3);
    REQUIRE(te.has_value());
    CHECK(*te == doctest::Approx(4.95).epsilon(0.05));

    const auto te4 = ehrenfest_time(builtin(HamiltonianKind::free, 1), pt(0, 1), hbar / 4, 100.0, 1e-3);
    REQUIRE(te4.has_value());
    CHECK(*te4 == doctest::Approx(9.975).epsilon(0.05));
    const double ratio = *te4 / *te;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}
