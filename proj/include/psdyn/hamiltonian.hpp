#pragma once

#include "psdyn/core.hpp"

namespace psdyn {

enum class HamiltonianKind { free, linear_field, harmonic, polynomial, custom };

// Hamiltonian H(X) on phase space, X = (q,p) in R^{2d}, with exact first and
// second derivatives and an entire continuation to complex arguments. The
// kinetic part of every built-in is |p|^2 (so free motion moves at dq/dt = 2p).
struct HamiltonianModel {
    HamiltonianKind kind = HamiltonianKind::custom;
    int dim = 1;
    // Degree of H as a polynomial in X, or -1 when not polynomial. Degree <= 2
    // keeps the phase-space Hamiltonian operator a genuine differential
    // operator, which the propagator's PDE-residual path requires.
    int polynomial_degree = -1;
    // Potential coefficients for kind == polynomial: V(q) = sum_k coeff[k] q^k (d = 1).
    std::vector<double> coefficients;

    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
    std::function<Complex(const CVec&)> value_c;
    std::function<CVec(const CVec&)> gradient_c;  // needed by complex stationary solves
    std::function<CMat(const CVec&)> hessian_c;

    bool has_complex_flow() const { return static_cast<bool>(gradient_c) && static_cast<bool>(hessian_c); }
};

HamiltonianModel builtin(HamiltonianKind kind, int dim);

// H = |p|^2 + V(q) with polynomial V (d = 1): coeffs[k] multiplies q^k.
HamiltonianModel polynomial_model(const std::vector<double>& coeffs);

// Weyl symbol in double phase space: H(X/2 - J P). On the invariant plane
// P = (1/2) J X this reduces to H(X).
double double_phase_symbol(const HamiltonianModel& model, const Vec& X, const Vec& P);

}  // namespace psdyn
