#include "psdyn/fourier.hpp"

#include <cmath>

namespace psdyn {

namespace {
const Complex I1(0, 1);

// Flow-dependent part of the phase (everything except theta0) at complex Y.
Complex flow_phase(const Vec& X, const CVec& Y, double t, const HamiltonianModel& model, double dt) {
    const int d = model.dim;
    CVec Yt;
    Complex action(0, 0);
    CMat Q;
    if (t == 0.0) {
        Yt = Y;
        Q = anisotropy_Q(I1 * CMat::Identity(d, d));
    } else {
        const FlowVarState<Complex> end = advance_complex(model, Y, t, dt);
        Yt = end.Y;
        action = end.action;
        Eigen::FullPivLU<CMat> lu(end.A);
        if (!lu.isInvertible()) throw Error(ErrorKind::caustic, "flow_phase: det A = 0");
        CMat Z = end.B * lu.inverse();
        Z = 0.5 * (Z + Z.transpose().eval());
        Q = anisotropy_Q(Z);
    }
    Complex bil(0, 0), mid(0, 0);
    for (int k = 0; k < d; ++k) {
        bil += Y[d + k] * Y[k] - Yt[d + k] * Yt[k];       // xi.eta - xi_t.eta_t
        mid += X[k] * Yt[d + k] - X[d + k] * Yt[k];       // X . J Y_t
    }
    CVec delta(2 * d);
    for (int k = 0; k < 2 * d; ++k) delta[k] = Complex(X[k], 0) - Yt[k];
    const Complex quad = (delta.transpose() * Q * delta)(0);
    return action + 0.5 * bil + 0.5 * mid + 0.5 * quad;
}

}  // namespace

FourierPhaseEval fourier_phase(const Vec& X, const CVec& Y, double t, const HamiltonianModel& model,
                               const WKBInitialData& data, double dt, bool want_hessian) {
    const int d = model.dim;
    if (X.size() != 2 * d || Y.size() != 2 * d)
        throw Error(ErrorKind::dimension, "fourier_phase: wrong point length");

    const Theta0Eval th = eval_theta0(data, Y);
    FourierPhaseEval out;
    auto G = [&](const CVec& Yp) { return flow_phase(X, Yp, t, model, dt); };
    const Complex G0 = G(Y);
    out.value = th.theta0 + G0;

    // gradient: analytic theta0 part + Richardson central differences of G
    const double h1 = 1e-5;
    out.gradY.resize(2 * d);
    for (int k = 0; k < 2 * d; ++k) {
        auto diff = [&](double h) {
            CVec Yp = Y, Ym = Y;
            Yp[k] += h;
            Ym[k] -= h;
            return (G(Yp) - G(Ym)) / (2.0 * h);
        };
        const Complex dh = diff(h1);
        const Complex dh2 = diff(h1 / 2);
        out.gradY[k] = th.grad[k] + (4.0 * dh2 - dh) / 3.0;
    }

    if (want_hessian) {
        const double h2 = 1e-4;
        out.hessY = CMat::Zero(2 * d, 2 * d);
        auto second = [&](int a, int b, double h) -> Complex {
            if (a == b) {
                CVec Yp = Y, Ym = Y;
                Yp[a] += h;
                Ym[a] -= h;
                return (G(Yp) - 2.0 * G0 + G(Ym)) / (h * h);
            }
            CVec Ypp = Y, Ypm = Y, Ymp = Y, Ymm = Y;
            Ypp[a] += h;
            Ypp[b] += h;
            Ypm[a] += h;
            Ypm[b] -= h;
            Ymp[a] -= h;
            Ymp[b] += h;
            Ymm[a] -= h;
            Ymm[b] -= h;
            return (G(Ypp) - G(Ypm) - G(Ymp) + G(Ymm)) / (4.0 * h * h);
        };
        for (int a = 0; a < 2 * d; ++a) {
            for (int b = a; b < 2 * d; ++b) {
                const Complex dh = second(a, b, h2);
                const Complex dh2 = second(a, b, h2 / 2);
                const Complex v = (4.0 * dh2 - dh) / 3.0;
                out.hessY(a, b) = th.hess(a, b) + v;
                out.hessY(b, a) = out.hessY(a, b);
            }
        }
    }
    return out;
}

CVec solve_stationary_point(const Vec& X, double t, const HamiltonianModel& model,
                            const WKBInitialData& data, const Vec& initial_guess, double dt) {
    const int d = model.dim;
    CVec Z = initial_guess.cast<Complex>();
    for (int it = 0; it < 50; ++it) {
        const FourierPhaseEval ev = fourier_phase(X, Z, t, model, data, dt, true);
        if (ev.gradY.cwiseAbs().maxCoeff() < 1e-10) {
            if (Z.imag().cwiseAbs().maxCoeff() > 0.5)
                throw Error(ErrorKind::outside_neighborhood,
                            "stationary point left the tubular neighborhood (|Im Z| > 0.5)");
            return Z;
        }
        Eigen::FullPivLU<CMat> lu(ev.hessY);
        if (!lu.isInvertible())
            throw Error(ErrorKind::stationary_solve, "singular phase Hessian in the Newton iteration");
        Z -= lu.solve(ev.gradY);
        if (!detail::all_finite(Z))
            throw Error(ErrorKind::outside_neighborhood, "stationary Newton diverged");
    }
    (void)d;
    throw Error(ErrorKind::outside_neighborhood, "stationary Newton did not converge in 50 iterations");
}

ComplexField eval_fourier_integral(const GridSpec& targets, double t, const HamiltonianModel& model,
                                   const WKBInitialData& data, double hbar, const SourceQuad& quad,
                                   int threads) {
    const InitialFn psi0 = [&data, hbar](const Vec& Y) {
        return prepare_wkb_initial(data, Y, hbar).value;
    };
    ComplexField f = propagate_aga(psi0, targets, t, model, hbar, quad, threads);
    f.method = Method::fourier;
    return f;
}

Complex leading_term_on_manifold(const Vec& X, double t, const HamiltonianModel& model,
                                 const WKBInitialData& data, double hbar, double dt) {
    const int d = model.dim;

    // pull the target back and refine; on the manifold the stationary point is real
    const Vec guess = t == 0.0 ? X : Vec(advance_real(model, X, -t, dt).Y);
    const CVec Z = solve_stationary_point(X, t, model, data, guess, dt);
    if (Z.imag().cwiseAbs().maxCoeff() > 1e-6)
        throw Error(ErrorKind::domain, "target is not on the transported manifold");
    const Vec Ystar = Z.real();

    // branch of sqrt(det d2F/dY2) continued from s = 0 along the pulled-back family
    const int nsub = 24;
    Complex logdet(0, 0);
    Complex prev(0, 0);
    for (int k = 0; k <= nsub; ++k) {
        const double s = t * k / nsub;
        const Vec Xs = s == 0.0 ? Ystar : Vec(advance_real(model, Ystar, s, dt).Y);
        const FourierPhaseEval ev = fourier_phase(Xs, Ystar.cast<Complex>(), s, model, data, dt, true);
        const Complex det = ev.hessY.determinant();
        if (k == 0) {
            // det(theta0'' + (i/2) I) = (-1)^d; anchor the argument at -d*pi
            double arg0 = std::arg(det);
            if (std::abs(det - std::pow(-1.0, d)) < 1e-6) arg0 = -d * M_PI;
            logdet = Complex(std::log(std::abs(det)), arg0);
        } else {
            const Complex r = det / prev;
            logdet += Complex(std::log(std::abs(r)), std::arg(r));
        }
        prev = det;
    }

    // amplitude phi(Y*, t) and phase F(X, Y*, t)
    Complex pref_flow;
    if (t == 0.0) {
        pref_flow = Complex(1, 0);
    } else {
        const FlowVarState<double> end = advance_real(model, Ystar, t, dt);
        pref_flow = std::exp(-0.5 * (end.log_det_AmiB - Complex(d * std::log(2.0), 0.0)));
    }
    const Theta0Eval th = eval_theta0(data, Ystar.cast<Complex>());
    const Complex phi = std::pow(M_PI * hbar, -0.25 * d) * pref_flow * th.chi0_tilde;
    const FourierPhaseEval evF = fourier_phase(X, Ystar.cast<Complex>(), t, model, data, dt, false);

    // i^{-d} from the 2d-dimensional stationary-phase normalization
    const Complex rot = std::exp(Complex(0, -0.5 * M_PI * d));
    return rot * phi * std::exp(I1 / hbar * evF.value) * std::exp(-0.5 * logdet);
}

}  // namespace psdyn
