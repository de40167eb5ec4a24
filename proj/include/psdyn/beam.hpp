#pragma once

#include "psdyn/wavepacket.hpp"

namespace psdyn {

// Parametrized initial Lagrangian manifold (graph of grad S0).
struct LagrangianChart {
    int dim = 1;
    std::function<Vec(const Vec&)> X0;       // alpha in R^d -> point on Lambda_0 in R^{2d}
    std::function<Mat(const Vec&)> tangent;  // 2d x d Jacobian dX0/dalpha
    Vec alpha_min, alpha_max;                // sampling box
};

// Chart alpha -> (alpha, grad S0(alpha)) induced by the WKB phase.
LagrangianChart graph_chart(const WKBInitialData& data, double alpha_min, double alpha_max);

// Everything transported along one ray alpha = const.
struct BeamRay {
    Vec alpha;
    Vec X0, Xt;
    Vec Pt;               // momentum (1/2) J X_t on the invariant plane
    double Aw = 0;        // symmetrized action
    double action = 0;    // plain action (for the A_w identity)
    Complex theta0{0, 0};
    Complex chi0_tilde{0, 0};  // R0 / sqrt(det(I - i S0'')), no hbar factor
    CMat theta0_hess;     // D(0)
    CMat C, D;
    Complex log_det_C{0, 0};
    CMat Qt;              // D C^{-1}
    double P_residual = 0;  // max |P_t - (1/2) J X_t| when the full system is integrated
};

struct BeamCache {
    HamiltonianModel model;
    WKBInitialData data;
    LagrangianChart chart;
    double t = 0, dt = 1e-3;
    double tube_radius = 0.5;
    std::vector<BeamRay> rays;  // dense alpha samples (Newton seeding, diagnostics)
};

// Integrates the reduced double-phase system along n_alpha rays: X by the
// classical flow, P = (1/2) J X enforced algebraically (the conserved
// constraint), C/D by the double-phase variational system with C(0) = I,
// D(0) = theta0''(X0(alpha)). debug_full_P additionally integrates the raw
// momentum equation and records the constraint drift.
BeamCache build_beam_cache(const LagrangianChart& chart, int n_alpha, double t, double dt,
                           const HamiltonianModel& model, const WKBInitialData& data,
                           bool debug_full_P = false);

// Fresh ray at an arbitrary alpha (same machinery as the cache rays).
BeamRay integrate_ray(const BeamCache& cache, const Vec& alpha, bool debug_full_P = false);

// Narrow-beam anisotropy at alpha: D C^{-1} (symmetric, checked).
CMat beam_Q(const BeamCache& cache, const Vec& alpha);

struct NearestPointResult {
    Vec alpha;
    double eps = 0;
    bool in_tube = false;
};

// Orthogonality system (X - X_t(alpha)) . dX_t/dalpha = 0, Newton from the
// best dense sample. Throws outside the neighborhood.
NearestPointResult nearest_point(const BeamCache& cache, const Vec& X);

Complex beam_phase(const BeamCache& cache, const Vec& X);
Complex beam_amplitude(const BeamCache& cache, const Vec& X, double hbar);

struct BeamFieldResult {
    ComplexField field;
    double tube_coverage = 0;  // fraction of targets inside the tube
};

BeamFieldResult beam_field(const BeamCache& cache, const GridSpec& targets, double hbar, int threads = 1);

struct ManifoldRestriction {
    double S = 0;    // real phase on Lambda_t
    Complex R{0, 0}; // amplitude on Lambda_t
    Vec alpha;
};

// Restriction at the manifold point over configuration position q (single
// sheet). Throws a chart error when the q-projection degenerates.
ManifoldRestriction on_manifold_restriction(const BeamCache& cache, double q, double hbar);

}  // namespace psdyn
