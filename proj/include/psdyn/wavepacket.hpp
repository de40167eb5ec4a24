#pragma once

#include "psdyn/classical.hpp"

namespace psdyn {

// WKB initial data: analytic phase S0 and amplitude R0 with entire
// continuations. The configuration dimension is d; the worked scenarios use
// d = 1 with S0 = x^2/2, R0 = pi^{-1/4} e^{-x^2/2}.
struct WKBInitialData {
    int dim = 1;
    std::function<double(const Vec&)> S0;
    std::function<Vec(const Vec&)> gradS0;
    std::function<Mat(const Vec&)> hessS0;
    std::function<Complex(const CVec&)> S0_c;
    std::function<CVec(const CVec&)> gradS0_c;
    std::function<CMat(const CVec&)> hessS0_c;
    std::function<double(const Vec&)> R0;
    std::function<Complex(const CVec&)> R0_c;
    double support_radius = 6.0;  // effective support of R0
};

// S0 = x^2/2, R0 = pi^{-1/4} e^{-x^2/2} (d = 1).
WKBInitialData standard_gaussian_wkb();

// Checks int R0^2 dx = 1 (1e-8) and det S0'' != 0 over the support grid.
void validate_wkb(const WKBInitialData& data);

// Isotropic Gaussian wave packet G_X(x).
Complex eval_isotropic_packet(const Vec& X, const Vec& x, double hbar);

// Propagated anisotropic packet from a trajectory/variational pair sharing
// the same base point and time.
Complex eval_anisotropic_packet(const Vec& X0, const TrajectoryRecord& traj, const VariationalState& var,
                                const Vec& x, double hbar);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct TransformQuad {
    int nodes = 0;          // 0 = auto from the oscillation rule
    double half_width = 0;  // 0 = auto: max(6 sqrt(hbar), support + 4 sqrt(hbar))
};

// Phase-space image of a configuration-space function by overlap with the
// isotropic packets, evaluated per grid point with tensor Gauss-Legendre
// quadrature (d = 1 fields).
ComplexField wave_packet_transform(const std::function<Complex(double)>& psi, double support_radius,
                                   const GridSpec& grid, double hbar, const TransformQuad& quad = {},
                                   int threads = 1);

// Inverse resolution at a configuration point from a sampled field
// (trapezoid weights over the field grid).
Complex wave_packet_superpose(const ComplexField& field, double x);

// Relative L2 norm of ((q/2 - i hbar d_p) - i(p/2 + i hbar d_q)) Psi with
// 4th-order central differences; two edge layers excluded.
double fock_bargmann_residual(const ComplexField& field);

struct WKBPointData {
    Complex value;   // Psi_0^h(q,p)
    CVec z;          // complex stationary point
    Complex theta0;  // complex phase
    Complex chi0;    // complex amplitude (includes (pi hbar)^{-d/4})
    bool z_in_support = true;
};

// Stationary-phase preparation of the phase-space image of the WKB state.
WKBPointData prepare_wkb_initial(const WKBInitialData& data, const Vec& X, double hbar);

// theta0 and its derivatives at a complex base point Y = (Q,P), via the inner
// stationary point z(Y). Used by the Fourier-integral machinery.
struct Theta0Eval {
    CVec z;
    Complex theta0;
    CVec grad;   // length 2d
    CMat hess;   // 2d x 2d
    Complex chi0_tilde;  // R0(z)/sqrt(det(I - i S0''(z))), no (pi hbar)^{-d/4}
};
Theta0Eval eval_theta0(const WKBInitialData& data, const CVec& Y);

}  // namespace psdyn
