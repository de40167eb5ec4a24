#pragma once

#include "psdyn/hamiltonian.hpp"

namespace psdyn {

// Closed-form reference solutions for the three sub-quadratic scenarios
// (d = 1), used as validation oracles: configuration-space wavefunction,
// phase-space wavefunction, transported manifold chart, nearest-point and
// narrow-beam closed forms.
struct ScenarioOracle {
    HamiltonianKind kind = HamiltonianKind::free;

    Complex psi(double x, double t, double hbar) const;
    Complex Psi(double q, double p, double t, double hbar) const;

    // g_t closed form
    Vec flow(double q, double p, double t) const;
    // chart of Lambda_t and its single-sheet q-projection inverse
    Vec chart(double alpha, double t) const;
    double alpha_star(double q, double p, double t) const;
    double eps(double q, double p, double t) const;
    Complex beam_phase(double q, double p, double t) const;
    Complex beam_amplitude(double q, double p, double t, double hbar) const;
};

ScenarioOracle make_oracle(HamiltonianKind kind);

ComplexField exact_field(HamiltonianKind kind, const GridSpec& targets, double t, double hbar);

struct ErrorNorms {
    double rel_l2 = 0.0;
    double sup = 0.0;
    double phase_sup = 0.0;  // over the joint relative-amplitude mask
};

// a compared against the reference b on identical grids.
ErrorNorms error_norms(const ComplexField& a, const ComplexField& b);

}  // namespace psdyn
