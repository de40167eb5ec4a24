#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psdyn/exact.hpp"
#include "psdyn/propagator.hpp"
#include "psdyn/wavepacket.hpp"

using namespace psdyn;

namespace {
const Complex I1(0, 1);

// frozen 30-digit references (closed forms cross-checked against direct
// quadrature of the defining transform integrals)
const Complex kSol1_a(0.44641871276561232, 0.35386749222655699);   // free (1,0.4) t=0.5 hb=0.1
const Complex kSol1_b(0.39640744535885955, 0.093310351748463685);  // free (2,1)   t=0.5 hb=0.1
const Complex kSol2_a(0.25444589991258807, -0.089579138497916338); // linear (1,0) t=1 hb=0.1
const Complex kSol2_b(0.092668387623469639, -0.087788347180132423);  // linear (0.5,-0.6) t=0.5 hb=0.05
const Complex kSol3_a(0.4122176669940369, 0.30607523845676383);    // harmonic (0.5,-0.3) t=0.4 hb=0.1
const Complex kSol3_b(0.30401656244086813, -0.3339515112593804);   // harmonic (1.5,0.1) t=0.4 hb=0.1
const Complex kPsiLin(-0.42349425793804577, -0.10828459371938166); // psi linear (0.6, 0.7) hb=0.1

ComplexField clone_grid_field(const ComplexField& like) {
    return make_field(like.grid, like.hbar, like.time, like.method);
}

}  // namespace

TEST_CASE("closed-form field probes") {
    const ScenarioOracle f = make_oracle(HamiltonianKind::free);
    CHECK(std::abs(f.Psi(1, 0.4, 0.5, 0.1) - kSol1_a) <= 1e-15);
    CHECK(std::abs(f.Psi(2, 1, 0.5, 0.1) - kSol1_b) <= 1e-15);

    const ScenarioOracle l = make_oracle(HamiltonianKind::linear_field);
    CHECK(std::abs(l.Psi(1, 0, 1, 0.1) - kSol2_a) <= 1e-15);
    CHECK(std::abs(l.Psi(0.5, -0.6, 0.5, 0.05) - kSol2_b) <= 1e-15);
    CHECK(std::abs(l.psi(0.6, 0.7, 0.1) - kPsiLin) <= 1e-14);

    const ScenarioOracle h = make_oracle(HamiltonianKind::harmonic);
    CHECK(std::abs(h.Psi(0.5, -0.3, 0.4, 0.1) - kSol3_a) <= 1e-15);
    CHECK(std::abs(h.Psi(1.5, 0.1, 0.4, 0.1) - kSol3_b) <= 1e-15);
}

TEST_CASE("t = 0 reduces to the common initial field") {
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const ScenarioOracle o = make_oracle(k);
        const ScenarioOracle f = make_oracle(HamiltonianKind::free);
        for (double q : {-1.0, 0.3, 1.7})
            for (double p : {-0.8, 0.0, 1.2})
                CHECK(std::abs(o.Psi(q, p, 0.0, 0.1) - f.Psi(q, p, 0.0, 0.1)) <= 1e-14);
    }
}

TEST_CASE("harmonic field near t = pi/2: quarter-period recurrence") {
    // at t = pi/2 the flow is R(pi/2) = -I and the field equals the initial
    // one at the rotated argument times e^{-i pi/2}
    const ScenarioOracle h = make_oracle(HamiltonianKind::harmonic);
    const double eps = 1e-6;
    for (double q : {0.7, -0.4})
        for (double p : {0.2, 0.9}) {
            const Complex pred = h.Psi(-q, -p, 0.0, 0.1) * std::exp(-I1 * M_PI / 2.0);
            CHECK(std::abs(h.Psi(q, p, M_PI / 2 - eps, 0.1) - pred) <= 1e-5);
            CHECK(std::abs(h.Psi(q, p, M_PI / 2 + eps, 0.1) - pred) <= 1e-5);
        }
}

TEST_CASE("configuration-space solutions satisfy their Schrodinger equations") {
    // i hbar psi_t = -hbar^2 psi_xx + V psi with V = 0, x, x^2
    const double hbar = 0.1, h = 1e-5;
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const ScenarioOracle o = make_oracle(k);
        for (double x : {0.3, -0.6})
            for (double t : {0.4, 0.8}) {
                const Complex pt_ = (o.psi(x, t + h, hbar) - o.psi(x, t - h, hbar)) / (2 * h);
                const Complex pxx =
                    (o.psi(x + h, t, hbar) - 2.0 * o.psi(x, t, hbar) + o.psi(x - h, t, hbar)) / (h * h);
                double V = 0;
                if (k == HamiltonianKind::linear_field) V = x;
                if (k == HamiltonianKind::harmonic) V = x * x;
                const Complex res = I1 * hbar * pt_ - (-hbar * hbar * pxx + V * o.psi(x, t, hbar));
                CHECK(std::abs(res) <= 1e-6);
            }
    }
}

TEST_CASE("exact fields are unit norm") {
    GridSpec g{-8, 8, -8, 8, 321, 321};
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        for (double t : {0.0, 0.3, 0.7})
            for (double hb : {0.1, 0.05})
                CHECK(std::abs(exact_field(k, g, t, hb).l2_norm() - 1.0) <= 1e-4);
    }
}

TEST_CASE("exact fields satisfy the phase-space equation (FD residual)") {
    const double hbar = 0.1, dt = 2e-4;
    GridSpec g{-3, 3, -3, 3, 401, 401};
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const HamiltonianModel m = builtin(k, 1);
        const double t = 0.5;
        const ComplexField f = exact_field(k, g, t, hbar);
        const ComplexField fp = exact_field(k, g, t + dt, hbar);
        const ComplexField fm = exact_field(k, g, t - dt, hbar);
        const ComplexField Hf = apply_phase_space_hamiltonian(f, m, hbar);
        double num = 0, den = 0;
        for (int i = 2; i < g.nq - 2; ++i)
            for (int j = 2; j < g.np - 2; ++j) {
                const Complex dt_ = I1 * hbar * (fp.at(i, j) - fm.at(i, j)) / (2 * dt);
                num += std::norm(dt_ - Hf.at(i, j));
                den += std::norm(Hf.at(i, j));
            }
        CHECK(std::sqrt(num / den) <= 1e-4);
    }
}

TEST_CASE("error_norms basics") {
    GridSpec g{-2, 2, -2, 2, 41, 41};
    ComplexField a = exact_field(HamiltonianKind::free, g, 0.3, 0.1);

    SUBCASE("identical fields") {
        const ErrorNorms n = error_norms(a, a);
        CHECK(n.rel_l2 == 0.0);
        CHECK(n.sup == 0.0);
        CHECK(n.phase_sup <= 1e-15);
    }
    SUBCASE("global phase factor") {
        const double theta = 0.3;
        ComplexField b = clone_grid_field(a);
        for (size_t k = 0; k < a.values.size(); ++k) b.values[k] = a.values[k] * std::exp(I1 * theta);
        const ErrorNorms n = error_norms(b, a);
        CHECK(n.rel_l2 == doctest::Approx(std::abs(std::exp(I1 * theta) - 1.0)).epsilon(1e-12));
        CHECK(n.phase_sup == doctest::Approx(theta).epsilon(1e-12));
    }
    SUBCASE("grid mismatch is rejected") {
        GridSpec g2{-2, 2, -2, 2, 41, 43};
        const ComplexField b = exact_field(HamiltonianKind::free, g2, 0.3, 0.1);
        CHECK_THROWS_AS(error_norms(a, b), Error);
    }
}

TEST_CASE("closed-form flow, nearest point and tube distance agree internally") {
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const ScenarioOracle o = make_oracle(k);
        for (double t : {0.0, 0.3, 0.7}) {
            for (double q : {0.9, -0.4})
                for (double p : {0.5, -0.2}) {
                    const double a = o.alpha_star(q, p, t);
                    const Vec Xa = o.chart(a, t);
                    // orthogonality of the residual against the chart tangent
                    const Vec Xa2 = o.chart(a + 1e-6, t);
                    const Vec tangent = (Xa2 - Xa) / 1e-6;
                    Vec X(2);
                    X << q, p;
                    CHECK(std::abs((X - Xa).dot(tangent)) <= 1e-5);
                    // distance matches the closed form
                    CHECK(std::abs((X - Xa).norm() - o.eps(q, p, t)) <= 1e-9);
                }
        }
    }
}

TEST_CASE("beam closed forms: phase vanishes on the manifold") {
    for (HamiltonianKind k :
         {HamiltonianKind::free, HamiltonianKind::linear_field, HamiltonianKind::harmonic}) {
        const ScenarioOracle o = make_oracle(k);
        for (double t : {0.2, 0.5})
            for (double a : {-1.0, 0.4, 1.3}) {
                const Vec X = o.chart(a, t);
                CHECK(std::abs(o.beam_phase(X[0], X[1], t).imag()) <= 1e-12);
            }
    }
    // free motion: the phase is identically zero on the manifold
    const ScenarioOracle f = make_oracle(HamiltonianKind::free);
    const Vec X = f.chart(0.8, 0.5);
    CHECK(std::abs(f.beam_phase(X[0], X[1], 0.5)) <= 1e-12);
    // at t = 0 the beam phase is theta0
    CHECK(std::abs(f.beam_phase(1, 0, 0) - Complex(0.25, 0.25)) <= 1e-14);
}
