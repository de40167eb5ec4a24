#pragma once

#include "psdyn/propagator.hpp"
#include "psdyn/wavepacket.hpp"

namespace psdyn {

struct FourierPhaseEval {
    Complex value{0, 0};
    CVec gradY;  // length 2d
    CMat hessY;  // 2d x 2d (filled when requested)
};

// Quadratic complex phase of the Fourier-integral representation:
//   F = theta0(Y) + A(Y,t) + (xi.eta - xi_t.eta_t)/2 + (1/2) X.J Y_t
//       + (1/2) (X - Y_t) . Q(Y,t) (X - Y_t)
// at a (possibly complex) base point Y. theta0 contributes analytic
// derivatives; the flow-dependent pieces are differentiated by central
// differences with one Richardson pass (step 1e-5 for the gradient).
FourierPhaseEval fourier_phase(const Vec& X, const CVec& Y, double t, const HamiltonianModel& model,
                               const WKBInitialData& data, double dt, bool want_hessian = false);

// Newton solve of dF/dY = 0 over the analytic continuation; tol 1e-10,
// at most 50 iterations. Throws an outside-neighborhood error on divergence
// (the field is O(hbar^inf) there).
CVec solve_stationary_point(const Vec& X, double t, const HamiltonianModel& model,
                            const WKBInitialData& data, const Vec& initial_guess, double dt);

// Quadrature evaluation of the Fourier integral: identical superposition to
// propagate_aga acting on the stationary-phase approximation of the initial
// data.
ComplexField eval_fourier_integral(const GridSpec& targets, double t, const HamiltonianModel& model,
                                   const WKBInitialData& data, double hbar, const SourceQuad& quad,
                                   int threads = 1);

// Leading stationary-phase term at a target on the transported manifold; the
// joint square-root branch is continued in t from the t = 0 value.
Complex leading_term_on_manifold(const Vec& X, double t, const HamiltonianModel& model,
                                 const WKBInitialData& data, double hbar, double dt);

}  // namespace psdyn
