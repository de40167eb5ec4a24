#pragma once

#include <cmath>
#include <optional>

#include "psdyn/hamiltonian.hpp"

namespace psdyn {

struct TrajectoryRecord {
    std::vector<double> t;
    std::vector<Vec> points;      // X_tau = (q,p)
    std::vector<double> action;   // A(q,p,tau)
    std::vector<double> sym_action;  // A_w(q,p,tau)
    int dim = 1;

    const Vec& initial() const { return points.front(); }
    const Vec& final_point() const { return points.back(); }
};

struct VariationalState {
    CMat A, B;
    Complex log_det_A{0, 0};     // branch-tracked log det A
    Complex log_det_AmiB{0, 0};  // branch-tracked log det(A - iB)
    bool caustic_flag = false;
    double t = 0.0;
};

struct VariationalTrajectory {
    TrajectoryRecord traj;
    std::vector<VariationalState> states;
};

TrajectoryRecord integrate_flow(const HamiltonianModel& model, const Vec& X0, double t_final, double dt);
VariationalTrajectory integrate_variational(const HamiltonianModel& model, const Vec& X0, double t_final,
                                            double dt);

// Z = B A^{-1}; symmetric with positive definite imaginary part away from
// caustics. Throws a caustic error when A is singular.
CMat anisotropy_Z(const VariationalState& state);

// 2d x 2d double-phase anisotropy from the d x d anisotropy Z:
//   [[iI - iW, I/2 - W], [I/2 - W, iW]],  W = (I - iZ)^{-1}.
CMat anisotropy_Q(const CMat& Z);

// First time the spectral norm of the real linearized flow reaches
// hbar^{-1/2}; nullopt when the norm stays below it on [0, horizon].
std::optional<double> ehrenfest_time(const HamiltonianModel& model, const Vec& X0, double hbar, double horizon,
                                     double dt);

// ---------------------------------------------------------------------------
// Templated co-integration of the flow, both action integrals, and the
// variational pair (A,B). Scalar = double for real trajectories, Complex for
// the analytic continuation used by the stationary-point machinery.
// ---------------------------------------------------------------------------

template <typename Scalar>
struct FlowVarState {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> Y;  // (q,p), length 2d
    Scalar action{};
    Scalar sym_action{};
    CMat A, B;
    Complex log_det_A{0, 0};
    Complex log_det_AmiB{0, 0};
    bool caustic_flag = false;
    double t = 0.0;
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename V>
bool all_finite(const V& v) {
    for (int i = 0; i < v.size(); ++i)
        if (!finite(v[i])) return false;
    return true;
}

template <typename Scalar>
struct FlowVarDeriv {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dY;
    Scalar dact{}, dsym{};
    CMat dA, dB;
};

// One derivative evaluation. grad/hess take the 2d-vector Y; H0 is the
// (conserved) initial energy entering both action integrands.
template <typename Scalar, typename GradF, typename HessF>
FlowVarDeriv<Scalar> flow_var_rhs(const FlowVarState<Scalar>& s, const GradF& grad, const HessF& hess,
                                  const Scalar& H0, int d) {
    FlowVarDeriv<Scalar> out;
    const auto g = grad(s.Y);
    out.dY.resize(2 * d);
    for (int k = 0; k < d; ++k) {
        out.dY[k] = g[d + k];       // dq/dt =  dH/dp
        out.dY[d + k] = -g[k];      // dp/dt = -dH/dq
    }
    Scalar pqdot{}, qpdot{};
    for (int k = 0; k < d; ++k) {
        pqdot += s.Y[d + k] * out.dY[k];
        qpdot += s.Y[k] * out.dY[d + k];
    }
    out.dact = pqdot - H0;
    out.dsym = Scalar(0.5) * (pqdot - qpdot) - H0;

    const auto H = hess(s.Y);
    const CMat Hqq = H.topLeftCorner(d, d).template cast<Complex>();
    const CMat Hqp = H.topRightCorner(d, d).template cast<Complex>();
    const CMat Hpq = H.bottomLeftCorner(d, d).template cast<Complex>();
    const CMat Hpp = H.bottomRightCorner(d, d).template cast<Complex>();
    out.dA = Hpq * s.A + Hpp * s.B;
    out.dB = -(Hqq * s.A) - Hqp * s.B;
    return out;
}

template <typename Scalar>
void axpy(FlowVarState<Scalar>& s, double c, const FlowVarDeriv<Scalar>& d_) {
    s.Y += c * d_.dY;
    s.action += Scalar(c) * d_.dact;
    s.sym_action += Scalar(c) * d_.dsym;
    s.A += c * d_.dA;
    s.B += c * d_.dB;
}

}  // namespace detail

// Fixed-step RK4 on the combined system. The branch of log det A and of
// log det(A - iB) advances by the per-step argument increment, which must stay
// below pi/2 or the step size is declared too coarse. on_step(state) fires
// after every accepted step. H0 is the initial energy entering both action
// integrands.
template <typename Scalar, typename GradF, typename HessF, typename StepCb>
void advance_flow_var(FlowVarState<Scalar>& st, const GradF& grad, const HessF& hess, const Scalar& H0,
                      double t_final, double dt, const StepCb& on_step) {
    const int d = static_cast<int>(st.Y.size()) / 2;
    if (!(dt > 0)) throw Error(ErrorKind::config, "integrator needs dt > 0");
    if (t_final == 0.0) return;

    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(t_final) / dt - 1e-12)));
    const double h = t_final / nsteps;

    Complex det_A_prev = st.A.determinant();
    Complex det_AmiB_prev = (st.A - Complex(0, 1) * st.B).determinant();

    for (int step = 0; step < nsteps; ++step) {
        const FlowVarState<Scalar> s0 = st;
        const auto k1 = detail::flow_var_rhs(s0, grad, hess, H0, d);
        FlowVarState<Scalar> s = s0;
        detail::axpy(s, h / 2, k1);
        const auto k2 = detail::flow_var_rhs(s, grad, hess, H0, d);
        s = s0;
        detail::axpy(s, h / 2, k2);
        const auto k3 = detail::flow_var_rhs(s, grad, hess, H0, d);
        s = s0;
        detail::axpy(s, h, k3);
        const auto k4 = detail::flow_var_rhs(s, grad, hess, H0, d);

        detail::axpy(st, h / 6, k1);
        detail::axpy(st, h / 3, k2);
        detail::axpy(st, h / 3, k3);
        detail::axpy(st, h / 6, k4);
        st.t = s0.t + h;

        if (!detail::all_finite(st.Y) || !detail::finite(st.action))
            throw Error(ErrorKind::divergence,
                        "trajectory diverged; last valid time t=" + std::to_string(s0.t));

        const Complex det_A = st.A.determinant();
        const Complex det_AmiB = (st.A - Complex(0, 1) * st.B).determinant();
        if (std::abs(det_AmiB) < 1e-12)
            throw Error(ErrorKind::invariant_violation, "det(A - iB) collapsed below 1e-12");
        if (std::abs(det_A) < 1e-12) {
            st.caustic_flag = true;  // Z must not be formed at this time
            st.log_det_A = Complex(std::log(1e-300), st.log_det_A.imag());
        } else {
            const Complex r = det_A / det_A_prev;
            const double darg = std::arg(r);
            if (std::abs(darg) >= M_PI / 2)
                throw Error(ErrorKind::step_size, "det A branch jump >= pi/2 in one step; reduce dt");
            st.log_det_A += Complex(std::log(std::abs(r)), darg);
        }
        {
            const Complex r = det_AmiB / det_AmiB_prev;
            const double darg = std::arg(r);
            if (std::abs(darg) >= M_PI / 2)
                throw Error(ErrorKind::step_size, "det(A-iB) branch jump >= pi/2 in one step; reduce dt");
            st.log_det_AmiB += Complex(std::log(std::abs(r)), darg);
        }
        det_A_prev = det_A;
        det_AmiB_prev = det_AmiB;
        on_step(st);
    }
}

// Real-trajectory convenience wrapper around the model's evaluators.
FlowVarState<double> advance_real(const HamiltonianModel& model, const Vec& X0, double t_final, double dt);

// Complex continuation of the same system (affine/polynomial models).
FlowVarState<Complex> advance_complex(const HamiltonianModel& model, const CVec& Y0, double t_final,
                                      double dt);

}  // namespace psdyn
