#include "psdyn/classical.hpp"

#include <Eigen/SVD>

namespace psdyn {

FlowVarState<double> advance_real(const HamiltonianModel& model, const Vec& X0, double t_final, double dt) {
    const int d = model.dim;
    if (X0.size() != 2 * d) throw Error(ErrorKind::dimension, "initial point has wrong length");
    FlowVarState<double> st;
    st.Y = X0;
    st.A = CMat::Identity(d, d);
    st.B = Complex(0, 1) * CMat::Identity(d, d);
    st.log_det_AmiB = Complex(d * std::log(2.0), 0.0);  // det(I - i(iI)) = 2^d
    const double H0 = model.value(X0);
    advance_flow_var(
        st, [&](const Vec& Y) { return model.gradient(Y); }, [&](const Vec& Y) { return model.hessian(Y); },
        H0, t_final, dt, [](const FlowVarState<double>&) {});
    return st;
}

FlowVarState<Complex> advance_complex(const HamiltonianModel& model, const CVec& Y0, double t_final,
                                      double dt) {
    if (!model.has_complex_flow())
        throw Error(ErrorKind::unsupported, "model lacks complex-argument derivatives");
    const int d = model.dim;
    if (Y0.size() != 2 * d) throw Error(ErrorKind::dimension, "initial point has wrong length");
    FlowVarState<Complex> st;
    st.Y = Y0;
    st.A = CMat::Identity(d, d);
    st.B = Complex(0, 1) * CMat::Identity(d, d);
    st.log_det_AmiB = Complex(d * std::log(2.0), 0.0);
    const Complex H0 = model.value_c(Y0);
    advance_flow_var(
        st, [&](const CVec& Y) { return model.gradient_c(Y); },
        [&](const CVec& Y) { return model.hessian_c(Y); }, H0, t_final, dt,
        [](const FlowVarState<Complex>&) {});
    return st;
}

TrajectoryRecord integrate_flow(const HamiltonianModel& model, const Vec& X0, double t_final, double dt) {
    const int d = model.dim;
    if (X0.size() != 2 * d) throw Error(ErrorKind::dimension, "initial point has wrong length");
    if (t_final < 0) throw Error(ErrorKind::config, "integrate_flow: t_final must be >= 0");

    TrajectoryRecord rec;
    rec.dim = d;
    rec.t.push_back(0.0);
    rec.points.push_back(X0);
    rec.action.push_back(0.0);
    rec.sym_action.push_back(0.0);
    if (t_final == 0.0) return rec;

    FlowVarState<double> st;
    st.Y = X0;
    st.A = CMat::Identity(d, d);
    st.B = Complex(0, 1) * CMat::Identity(d, d);
    st.log_det_AmiB = Complex(d * std::log(2.0), 0.0);
    const double H0 = model.value(X0);
    advance_flow_var(
        st, [&](const Vec& Y) { return model.gradient(Y); }, [&](const Vec& Y) { return model.hessian(Y); },
        H0, t_final, dt, [&](const FlowVarState<double>& s) {
            rec.t.push_back(s.t);
            rec.points.push_back(s.Y);
            rec.action.push_back(s.action);
            rec.sym_action.push_back(s.sym_action);
        });
    return rec;
}

VariationalTrajectory integrate_variational(const HamiltonianModel& model, const Vec& X0, double t_final,
                                            double dt) {
    const int d = model.dim;
    if (X0.size() != 2 * d) throw Error(ErrorKind::dimension, "initial point has wrong length");
    if (t_final < 0) throw Error(ErrorKind::config, "integrate_variational: t_final must be >= 0");

    VariationalTrajectory out;
    out.traj.dim = d;
    out.traj.t.push_back(0.0);
    out.traj.points.push_back(X0);
    out.traj.action.push_back(0.0);
    out.traj.sym_action.push_back(0.0);

    VariationalState v0;
    v0.A = CMat::Identity(d, d);
    v0.B = Complex(0, 1) * CMat::Identity(d, d);
    v0.log_det_AmiB = Complex(d * std::log(2.0), 0.0);
    out.states.push_back(v0);
    if (t_final == 0.0) return out;

    FlowVarState<double> st;
    st.Y = X0;
    st.A = v0.A;
    st.B = v0.B;
    st.log_det_AmiB = v0.log_det_AmiB;
    const double H0 = model.value(X0);
    advance_flow_var(
        st, [&](const Vec& Y) { return model.gradient(Y); }, [&](const Vec& Y) { return model.hessian(Y); },
        H0, t_final, dt, [&](const FlowVarState<double>& s) {
            out.traj.t.push_back(s.t);
            out.traj.points.push_back(s.Y);
            out.traj.action.push_back(s.action);
            out.traj.sym_action.push_back(s.sym_action);
            VariationalState v;
            v.A = s.A;
            v.B = s.B;
            v.log_det_A = s.log_det_A;
            v.log_det_AmiB = s.log_det_AmiB;
            v.caustic_flag = s.caustic_flag;
            v.t = s.t;
            out.states.push_back(v);
        });
    return out;
}

CMat anisotropy_Z(const VariationalState& state) {
    const int d = static_cast<int>(state.A.rows());
    Eigen::FullPivLU<CMat> lu(state.A);
    if (state.caustic_flag || !lu.isInvertible() || std::abs(state.A.determinant()) < 1e-12)
        throw Error(ErrorKind::caustic, "A is singular at this time; use det(A - iB) forms instead");
    CMat Z = state.B * lu.inverse();
    Z = 0.5 * (Z + Z.transpose().eval());  // exact symmetry holds analytically
    const SiegelReport rep = check_siegel(Z);
    if (!rep.ok) throw Error(ErrorKind::invariant_violation, "anisotropy matrix left the Siegel half-space: " + rep.what);
    (void)d;
    return Z;
}

CMat anisotropy_Q(const CMat& Z) {
    const int d = static_cast<int>(Z.rows());
    if (Z.cols() != d) throw Error(ErrorKind::dimension, "anisotropy_Q: Z must be square");
    const CMat I_ = CMat::Identity(d, d);
    const CMat M = I_ - Complex(0, 1) * Z;
    Eigen::FullPivLU<CMat> lu(M);
    if (!lu.isInvertible())
        throw Error(ErrorKind::invariant_violation, "I - iZ is singular; anisotropy matrix corrupted");
    const CMat W = lu.inverse();
    CMat Q(2 * d, 2 * d);
    Q.topLeftCorner(d, d) = Complex(0, 1) * (I_ - W);
    Q.topRightCorner(d, d) = 0.5 * I_ - W;
    Q.bottomLeftCorner(d, d) = 0.5 * I_ - W;
    Q.bottomRightCorner(d, d) = Complex(0, 1) * W;
    return Q;
}

std::optional<double> ehrenfest_time(const HamiltonianModel& model, const Vec& X0, double hbar,
                                     double horizon, double dt) {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "ehrenfest_time: hbar must be positive");
    const int d = model.dim;
    const double target = 1.0 / std::sqrt(hbar);
    const Mat J = canonical_J(d);

    // co-integrate the flow with the real linearized flow M' = J H_XX(X_t) M
    Vec X = X0;
    Mat M = Mat::Identity(2 * d, 2 * d);
    auto spec_norm = [](const Mat& A) {
        return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
    };
    double prev_norm = spec_norm(M);
    if (prev_norm >= target) return 0.0;

    const int nsteps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-12)));
    const double h = horizon / nsteps;
    auto rhsX = [&](const Vec& Xs) {
        const Vec g = model.gradient(Xs);
        Vec dX(2 * d);
        dX.head(d) = g.tail(d);
        dX.tail(d) = -g.head(d);
        return dX;
    };
    auto rhsM = [&](const Vec& Xs, const Mat& Ms) { return (J * model.hessian(Xs) * Ms).eval(); };

    double t = 0.0;
    for (int s = 0; s < nsteps; ++s) {
        const Vec k1x = rhsX(X);
        const Mat k1m = rhsM(X, M);
        const Vec x2 = X + 0.5 * h * k1x;
        const Mat m2 = M + 0.5 * h * k1m;
        const Vec k2x = rhsX(x2);
        const Mat k2m = rhsM(x2, m2);
        const Vec x3 = X + 0.5 * h * k2x;
        const Mat m3 = M + 0.5 * h * k2m;
        const Vec k3x = rhsX(x3);
        const Mat k3m = rhsM(x3, m3);
        const Vec x4 = X + h * k3x;
        const Mat m4 = M + h * k3m;
        const Vec k4x = rhsX(x4);
        const Mat k4m = rhsM(x4, m4);
        X += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        M += h / 6 * (k1m + 2 * k2m + 2 * k3m + k4m);
        if (!X.allFinite() || !M.allFinite())
            throw Error(ErrorKind::divergence, "ehrenfest_time: flow diverged at t=" + std::to_string(t));
        const double nt = spec_norm(M);
        const double tn = t + h;
        if (nt >= target) {
            // linear interpolation of the crossing inside the step
            const double frac = (target - prev_norm) / (nt - prev_norm);
            return t + frac * h;
        }
        prev_norm = nt;
        t = tn;
    }
    return std::nullopt;
}

}  // namespace psdyn
