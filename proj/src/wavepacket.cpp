#include "psdyn/wavepacket.hpp"

#include <cmath>

namespace psdyn {

WKBInitialData standard_gaussian_wkb() {
    WKBInitialData d;
    d.dim = 1;
    d.support_radius = 6.0;
    d.S0 = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    d.gradS0 = [](const Vec& x) {
        Vec g(1);
        g << x[0];
        return g;
    };
    d.hessS0 = [](const Vec&) {
        Mat h(1, 1);
        h << 1.0;
        return h;
    };
    d.S0_c = [](const CVec& z) { return 0.5 * z[0] * z[0]; };
    d.gradS0_c = [](const CVec& z) {
        CVec g(1);
        g << z[0];
        return g;
    };
    d.hessS0_c = [](const CVec&) {
        CMat h(1, 1);
        h << Complex(1, 0);
        return h;
    };
    d.R0 = [](const Vec& x) { return std::pow(M_PI, -0.25) * std::exp(-0.5 * x[0] * x[0]); };
    d.R0_c = [](const CVec& z) { return std::pow(M_PI, -0.25) * std::exp(-0.5 * z[0] * z[0]); };
    return d;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

void validate_wkb(const WKBInitialData& data) {
    if (data.dim != 1) throw Error(ErrorKind::unsupported, "validate_wkb: d=1 only");
    std::vector<double> xs, ws;
    gauss_legendre(256, xs, ws);
    const double R = data.support_radius + 2.0;
    double mass = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
        Vec x(1);
        x << R * xs[k];
        const double r = data.R0(x);
        mass += R * ws[k] * r * r;
        if (std::abs(data.hessS0(x).determinant()) < 1e-12)
            throw Error(ErrorKind::degenerate_phase, "det S0'' vanishes on the support grid");
    }
    if (std::abs(mass - 1.0) > 1e-8)
        throw Error(ErrorKind::config, "R0 is not L2-normalized: int R0^2 = " + std::to_string(mass));
}

Complex eval_isotropic_packet(const Vec& X, const Vec& x, double hbar) {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "hbar must be positive");
    const int d = static_cast<int>(X.size()) / 2;
    if (x.size() != d) throw Error(ErrorKind::dimension, "configuration point has wrong length");
    const auto q = X.head(d);
    const auto p = X.tail(d);
    const Vec dx = x - q;
    const Complex phase(p.dot(q) / 2 + p.dot(dx), 0.5 * dx.squaredNorm());
    return std::pow(M_PI * hbar, -0.25 * d) * std::exp(Complex(0, 1) / hbar * phase);
}

Complex eval_anisotropic_packet(const Vec& X0, const TrajectoryRecord& traj, const VariationalState& var,
                                const Vec& x, double hbar) {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "hbar must be positive");
    const int d = traj.dim;
    if ((traj.initial() - X0).cwiseAbs().maxCoeff() > 1e-12 ||
        std::abs(traj.t.back() - var.t) > 1e-12)
        throw Error(ErrorKind::staleness, "trajectory/variational data do not match the base point and time");
    if (var.caustic_flag && std::abs(var.A.determinant()) < 1e-12)
        throw Error(ErrorKind::caustic, "det A below 1e-12 at this time");

    const Vec Xt = traj.final_point();
    const auto q = X0.head(d);
    const auto p = X0.tail(d);
    const auto qt = Xt.head(d);
    const auto pt = Xt.tail(d);
    const CVec dx = (x - qt).cast<Complex>();

    Eigen::FullPivLU<CMat> lu(var.A);
    const CMat Z = var.B * lu.inverse();
    const Complex quad = dx.transpose() * Z * dx;
    const Complex phase = Complex(p.dot(q) / 2 + traj.action.back() + pt.dot(x - qt), 0) + 0.5 * quad;
    const Complex amp = std::exp(-0.5 * var.log_det_A);  // branch-tracked 1/sqrt(det A)
    return std::pow(M_PI * hbar, -0.25 * d) * amp * std::exp(Complex(0, 1) / hbar * phase);
}

ComplexField wave_packet_transform(const std::function<Complex(double)>& psi, double support_radius,
                                   const GridSpec& grid, double hbar, const TransformQuad& quad,
                                   int threads) {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "hbar must be positive");
    grid.validate();
    const double sh = std::sqrt(hbar);
    const double w = quad.half_width > 0 ? quad.half_width : std::max(6.0 * sh, support_radius + 4.0 * sh);
    const double pscale = std::max({std::abs(grid.pmin), std::abs(grid.pmax), 1.0});
    int n = quad.nodes;
    if (n <= 0) {
        // >= 8 nodes per oscillation of wavelength 2 pi hbar / |p|_max
        n = std::max(64, static_cast<int>(std::ceil(8.0 * 2.0 * w * pscale / (2.0 * M_PI * hbar))));
    }
    std::vector<double> xs, ws;
    gauss_legendre(n, xs, ws);

    ComplexField out = make_field(grid, hbar, 0.0, Method::transform);
    const double norm = std::pow(2.0 * M_PI * hbar, -0.5);

    parallel_for(grid.nq, threads, [&](int lo, int hi) {
        Vec X(2), xv(1);
        for (int i = lo; i < hi; ++i) {
            const double q = grid.q(i);
            // integrand tail: the packet window e^{-w^2/(2 hbar)} times |psi|
            // at the box ends must be negligible against the local scale
            const double window = std::exp(-w * w / (2.0 * hbar));
            const double tail =
                (std::abs(psi(q - w)) + std::abs(psi(q + w))) * window * 2.0 * w;
            if (tail > 1e-8 * std::max(1.0, std::abs(psi(q))))
                throw Error(ErrorKind::tail_mass,
                            "quadrature box too small; suggest half-width >= " + std::to_string(1.5 * w));
            for (int j = 0; j < grid.np; ++j) {
                const double p = grid.p(j);
                X << q, p;
                Complex acc(0, 0);
                for (int k = 0; k < n; ++k) {
                    const double x = q + w * xs[k];
                    xv << x;
                    acc += ws[k] * std::conj(eval_isotropic_packet(X, xv, hbar)) * psi(x);
                }
                out.at(i, j) = norm * w * acc;
            }
        }
    });
    return out;
}

Complex wave_packet_superpose(const ComplexField& field, double x) {
    const GridSpec& g = field.grid;
    Complex acc(0, 0);
    Vec X(2), xv(1);
    xv << x;
    for (int i = 0; i < g.nq; ++i) {
        const double wq = (i == 0 || i == g.nq - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.np; ++j) {
            const double wp = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
            X << g.q(i), g.p(j);
            acc += wq * wp * field.at(i, j) * eval_isotropic_packet(X, xv, field.hbar);
        }
    }
    return std::pow(2.0 * M_PI * field.hbar, -0.5) * acc * g.dq() * g.dp();
}

double fock_bargmann_residual(const ComplexField& field) {
    field.validate();
    const GridSpec& g = field.grid;
    const double hbar = field.hbar;
    const double xscale =
        std::max({std::abs(g.qmin), std::abs(g.qmax), std::abs(g.pmin), std::abs(g.pmax), 1.0});
    // 4 points per wavelength of the dominant carrier k ~ xscale/(2 hbar)
    const double hmax = M_PI * hbar / xscale;
    if (g.dq() > hmax || g.dp() > hmax)
        throw Error(ErrorKind::resolution, "grid too coarse for the Fock-Bargmann stencil");
    if (g.nq < 5 || g.np < 5) throw Error(ErrorKind::resolution, "grid too small for 5-point stencils");

    const double hq = g.dq(), hp = g.dp();
    double num = 0.0, den = 0.0;
    for (int i = 2; i < g.nq - 2; ++i) {
        for (int j = 2; j < g.np - 2; ++j) {
            const Complex dq = (-field.at(i + 2, j) + 8.0 * field.at(i + 1, j) - 8.0 * field.at(i - 1, j) +
                                field.at(i - 2, j)) /
                               (12.0 * hq);
            const Complex dp = (-field.at(i, j + 2) + 8.0 * field.at(i, j + 1) - 8.0 * field.at(i, j - 1) +
                                field.at(i, j - 2)) /
                               (12.0 * hp);
            const Complex v = field.at(i, j);
            const Complex L =
                Complex(g.q(i) / 2, -g.p(j) / 2) * v + hbar * (dq - Complex(0, 1) * dp);
            num += std::norm(L);
            den += std::norm(v);
        }
    }
    if (den == 0.0) throw Error(ErrorKind::domain, "field vanishes on the interior");
    return std::sqrt(num / den);
}

namespace {

// Newton solve of grad S0(z) - P + i(z - Q) = 0 for complex (Q,P).
CVec solve_inner_stationary(const WKBInitialData& data, const CVec& Q, const CVec& P) {
    const int d = data.dim;
    const CMat I_ = CMat::Identity(d, d);
    auto F = [&](const CVec& z) { return (data.gradS0_c(z) - P + Complex(0, 1) * (z - Q)).eval(); };
    auto Jac = [&](const CVec& z) { return (data.hessS0_c(z) + Complex(0, 1) * I_).eval(); };

    auto run = [&](CVec z) -> std::pair<bool, CVec> {
        for (int it = 0; it < 50; ++it) {
            const CVec f = F(z);
            if (f.cwiseAbs().maxCoeff() < 1e-12) return {true, z};
            Eigen::FullPivLU<CMat> lu(Jac(z));
            if (!lu.isInvertible()) return {false, z};
            z -= lu.solve(f);
        }
        return {F(z).cwiseAbs().maxCoeff() < 1e-12, z};
    };

    auto [ok, z] = run(Q);
    if (!ok) {
        // first-order guess z = Q - i (I - i S0''(Q))^{-1} (P - S0'(Q))
        const CMat M = I_ - Complex(0, 1) * data.hessS0_c(Q);
        Eigen::FullPivLU<CMat> lu(M);
        if (lu.isInvertible()) {
            const CVec guess = Q - Complex(0, 1) * (lu.solve((P - data.gradS0_c(Q)).eval())).eval();
            std::tie(ok, z) = run(guess);
        }
    }
    if (!ok) throw Error(ErrorKind::stationary_solve, "Newton failed for the inner stationary point");
    return z;
}

Complex theta0_value(const WKBInitialData& data, const CVec& Q, const CVec& P, const CVec& z) {
    const CVec w = z - Q;
    Complex qp(0, 0), pw(0, 0), ww(0, 0);
    for (int k = 0; k < data.dim; ++k) {
        qp += P[k] * Q[k];
        pw += P[k] * w[k];
        ww += w[k] * w[k];
    }
    return data.S0_c(z) - pw + Complex(0, 0.5) * ww - 0.5 * qp;
}

}  // namespace

WKBPointData prepare_wkb_initial(const WKBInitialData& data, const Vec& X, double hbar) {
    const int d = data.dim;
    if (X.size() != 2 * d) throw Error(ErrorKind::dimension, "phase point has wrong length");
    const CVec Q = X.head(d).cast<Complex>();
    const CVec P = X.tail(d).cast<Complex>();

    WKBPointData out;
    out.z = solve_inner_stationary(data, Q, P);
    out.theta0 = theta0_value(data, Q, P, out.z);

    const CMat M = CMat::Identity(d, d) - Complex(0, 1) * data.hessS0_c(out.z);
    const Complex detM = M.determinant();
    if (std::abs(detM) < 1e-12)
        throw Error(ErrorKind::degenerate_phase, "det(I - i S0'') vanishes at the stationary point");
    out.chi0 = std::pow(M_PI * hbar, -0.25 * d) * data.R0_c(out.z) / std::sqrt(detM);
    out.value = out.chi0 * std::exp(Complex(0, 1) / hbar * out.theta0);
    out.z_in_support = out.z.real().cwiseAbs().maxCoeff() <= data.support_radius;
    return out;
}

Theta0Eval eval_theta0(const WKBInitialData& data, const CVec& Y) {
    const int d = data.dim;
    if (Y.size() != 2 * d) throw Error(ErrorKind::dimension, "base point has wrong length");
    const CVec Q = Y.head(d);
    const CVec P = Y.tail(d);

    Theta0Eval out;
    out.z = solve_inner_stationary(data, Q, P);
    out.theta0 = theta0_value(data, Q, P, out.z);

    // stationarity in z gives grad theta0 = (P/2 - i(z-Q); -(z-Q) - Q/2)
    const CVec w = out.z - Q;
    out.grad.resize(2 * d);
    out.grad.head(d) = 0.5 * P - Complex(0, 1) * w;
    out.grad.tail(d) = -w - 0.5 * Q;

    // W = (S0''(z) + iI)^{-1}; hess = [[iI + W, I/2 - iW], [I/2 - iW, -W]]
    const CMat I_ = CMat::Identity(d, d);
    Eigen::FullPivLU<CMat> lu(data.hessS0_c(out.z) + Complex(0, 1) * I_);
    if (!lu.isInvertible())
        throw Error(ErrorKind::degenerate_phase, "S0'' + iI singular at the stationary point");
    const CMat W = lu.inverse();
    out.hess.resize(2 * d, 2 * d);
    out.hess.topLeftCorner(d, d) = Complex(0, 1) * I_ + W;
    out.hess.topRightCorner(d, d) = 0.5 * I_ - Complex(0, 1) * W;
    out.hess.bottomLeftCorner(d, d) = 0.5 * I_ - Complex(0, 1) * W;
    out.hess.bottomRightCorner(d, d) = -W;

    const CMat M = I_ - Complex(0, 1) * data.hessS0_c(out.z);
    const Complex detM = M.determinant();
    if (std::abs(detM) < 1e-12)
        throw Error(ErrorKind::degenerate_phase, "det(I - i S0'') vanishes at the stationary point");
    out.chi0_tilde = data.R0_c(out.z) / std::sqrt(detM);
    return out;
}

}  // namespace psdyn
