#pragma once

#include "psdyn/classical.hpp"

namespace psdyn {

// Everything the kernel needs that depends only on the source point and time;
// computed once per quadrature node and reused for every target.
struct SourceCache {
    Vec Y;        // source (eta, xi)
    Vec Yt;       // g_t(Y)
    double t = 0;
    double action = 0;
    CMat A, B;
    Complex log_det_AmiB{0, 0};
    CMat Q;                    // 2d x 2d double-phase anisotropy
    Complex prefactor{1, 0};   // (det(A - iB)/2^d)^{-1/2}, branch-tracked
    double phase_const = 0;    // action + (xi.eta - xi_t.eta_t)/2
    double lambda_min_imQ = 0; // smallest eigenvalue of Im Q (pruning bound)
};

SourceCache make_source_cache(const HamiltonianModel& model, const Vec& Y, double t, double dt);

struct KernelEvaluation {
    Complex value{0, 0};
    Complex prefactor_branch{1, 0};
    double action_term = 0;     // A + (xi.eta - xi_t.eta_t)/2
    double midpoint_term = 0;   // (1/2) X . J Y_t
    Complex quad_term{0, 0};    // (1/2) Delta . Q Delta (Im >= 0)
};

// Anisotropic-Gaussian phase-space kernel at (target X | source cache).
KernelEvaluation kernel_KZ(const Vec& X, const SourceCache& cache, double t, double hbar);

// Closed-form Gaussian overlap (2 pi hbar)^{-d} <G_X, G_Y>.
Complex bergmann_kernel(const Vec& X, const Vec& Y, double hbar);

enum class KernelType { aga, frozen };

struct SourceQuad {
    // lattice box; if max <= min on an axis the box is chosen automatically
    double qmin = 0, qmax = 0, pmin = 0, pmax = 0;
    double spacing = 0;        // 0 = auto oscillation rule
    double prune_rel = 1e-9;   // drop nodes with |Psi0| below this times the max
    double cache_dt = 2.5e-3;  // RK4 step for the per-source caches
    double initial_halfwidth = 8.0;  // auto-box hint for the initial support
};

using InitialFn = std::function<Complex(const Vec&)>;

// Superposition of kernel-propagated initial data over target grid points:
// Psi(X, t) = sum_nodes w * K(X, Y_node, t) * Psi0(Y_node).
ComplexField propagate_aga(const InitialFn& psi0, const GridSpec& targets, double t,
                           const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                           int threads = 1);
ComplexField propagate_frozen(const InitialFn& psi0, const GridSpec& targets, double t,
                              const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                              int threads = 1);

// Same superposition with a sampled field as initial data; the field's grid
// nodes are the quadrature lattice (trapezoid weights).
ComplexField propagate_aga(const ComplexField& initial, const GridSpec& targets, double t,
                           const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                           int threads = 1);

// Phase-space Hamiltonian operator for H = |p|^2 + V(q) with deg V <= 2:
//   H^ Psi = (p/2 - i hbar d_q)^2 Psi + V(q/2 + i hbar d_p) Psi
// via 4th-order central differences; two edge layers of the result are zero.
ComplexField apply_phase_space_hamiltonian(const ComplexField& field, const HamiltonianModel& model,
                                           double hbar);

}  // namespace psdyn
