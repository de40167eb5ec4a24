#include "psdyn/beam.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace psdyn {

namespace {
const Complex I1(0, 1);
}

LagrangianChart graph_chart(const WKBInitialData& data, double alpha_min, double alpha_max) {
    if (data.dim != 1) throw Error(ErrorKind::unsupported, "graph_chart: d = 1 charts only");
    LagrangianChart ch;
    ch.dim = 1;
    ch.alpha_min = Vec::Constant(1, alpha_min);
    ch.alpha_max = Vec::Constant(1, alpha_max);
    ch.X0 = [&data](const Vec& a) {
        Vec X(2);
        X << a[0], data.gradS0(a)[0];
        return X;
    };
    ch.tangent = [&data](const Vec& a) {
        Mat T(2, 1);
        T << 1.0, data.hessS0(a)(0, 0);
        return T;
    };
    return ch;
}

namespace {

// RK4 on the reduced ray system: X by the classical flow, A_w and the plain
// action by quadrature, C/D by the double-phase variational system
//   d/dt (C;D) = [[J H_XX / 2, -J H_XX J], [-H_XX/4, H_XX J / 2]] (C;D)
// with H_XX at X_t. P is either enforced as (1/2) J X (reduced form) or
// integrated from dP/dt = -(1/2) dH/dX(X) in the debug mode.
struct RayState {
    Vec X;
    Vec P;
    double Aw = 0, action = 0;
    CMat C, D;
};

struct RayDeriv {
    Vec dX, dP;
    double dAw = 0, dact = 0;
    CMat dC, dD;
};

RayDeriv ray_rhs(const RayState& s, const HamiltonianModel& model, double H0, const Mat& J, bool full_P) {
    const int d = model.dim;
    RayDeriv out;
    const Vec g = model.gradient(s.X);
    out.dX.resize(2 * d);
    out.dX.head(d) = g.tail(d);
    out.dX.tail(d) = -g.head(d);
    out.dP = full_P ? Vec(-0.5 * g) : Vec(0.5 * J * out.dX);
    const double pqdot = s.X.tail(d).dot(out.dX.head(d));
    const double qpdot = s.X.head(d).dot(out.dX.tail(d));
    out.dAw = 0.5 * (pqdot - qpdot) - H0;
    out.dact = pqdot - H0;
    const CMat H = model.hessian(s.X).cast<Complex>();
    const CMat Jc = J.cast<Complex>();
    out.dC = 0.5 * Jc * H * s.C - Jc * H * Jc * s.D;
    out.dD = -0.25 * H * s.C + 0.5 * H * Jc * s.D;
    return out;
}

void ray_axpy(RayState& s, double c, const RayDeriv& d_) {
    s.X += c * d_.dX;
    s.P += c * d_.dP;
    s.Aw += c * d_.dAw;
    s.action += c * d_.dact;
    s.C += c * d_.dC;
    s.D += c * d_.dD;
}

BeamRay run_ray(const HamiltonianModel& model, const WKBInitialData& data, const LagrangianChart& chart,
                const Vec& alpha, double t, double dt, bool full_P) {
    const int d = model.dim;
    const Mat J = canonical_J(d);

    BeamRay ray;
    ray.alpha = alpha;
    ray.X0 = chart.X0(alpha);

    const Theta0Eval th = eval_theta0(data, ray.X0.cast<Complex>());
    if (th.z.imag().cwiseAbs().maxCoeff() > 1e-8)
        throw Error(ErrorKind::chart, "chart point is not on the initial manifold");
    ray.theta0 = th.theta0;
    ray.theta0_hess = th.hess;
    ray.chi0_tilde = th.chi0_tilde;

    RayState s;
    s.X = ray.X0;
    s.P = 0.5 * J * ray.X0;
    s.C = CMat::Identity(2 * d, 2 * d);
    s.D = th.hess;

    Complex logdetC(0, 0);
    if (t != 0.0) {
        const double H0 = model.value(s.X);
        const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / dt - 1e-12)));
        const double h = t / nsteps;
        Complex detC_prev = s.C.determinant();
        for (int k = 0; k < nsteps; ++k) {
            const RayState s0 = s;
            const RayDeriv k1 = ray_rhs(s0, model, H0, J, full_P);
            RayState sm = s0;
            ray_axpy(sm, h / 2, k1);
            const RayDeriv k2 = ray_rhs(sm, model, H0, J, full_P);
            sm = s0;
            ray_axpy(sm, h / 2, k2);
            const RayDeriv k3 = ray_rhs(sm, model, H0, J, full_P);
            sm = s0;
            ray_axpy(sm, h, k3);
            const RayDeriv k4 = ray_rhs(sm, model, H0, J, full_P);
            ray_axpy(s, h / 6, k1);
            ray_axpy(s, h / 3, k2);
            ray_axpy(s, h / 3, k3);
            ray_axpy(s, h / 6, k4);
            if (!s.X.allFinite())
                throw Error(ErrorKind::divergence, "beam ray diverged");
            const Complex detC = s.C.determinant();
            if (std::abs(detC) < 1e-12)
                throw Error(ErrorKind::step_size,
                            "det C collapsed along the ray; manifold chart assumption violated");
            const Complex r = detC / detC_prev;
            if (std::abs(std::arg(r)) >= M_PI / 2)
                throw Error(ErrorKind::step_size, "det C branch jump >= pi/2 in one step; reduce dt");
            logdetC += Complex(std::log(std::abs(r)), std::arg(r));
            detC_prev = detC;
        }
    }

    ray.Xt = s.X;
    ray.Pt = full_P ? s.P : Vec(0.5 * J * s.X);
    ray.P_residual = (s.P - 0.5 * J * s.X).cwiseAbs().maxCoeff();
    ray.Aw = s.Aw;
    ray.action = s.action;
    ray.C = s.C;
    ray.D = s.D;
    ray.log_det_C = logdetC;
    Eigen::FullPivLU<CMat> lu(s.C);
    if (!lu.isInvertible()) throw Error(ErrorKind::step_size, "det C = 0 at the final time");
    CMat Qt = s.D * lu.inverse();
    ray.Qt = 0.5 * (Qt + Qt.transpose().eval());
    return ray;
}

}  // namespace

BeamCache build_beam_cache(const LagrangianChart& chart, int n_alpha, double t, double dt,
                           const HamiltonianModel& model, const WKBInitialData& data, bool debug_full_P) {
    if (chart.dim != 1 || model.dim != 1)
        throw Error(ErrorKind::unsupported, "beam caches are d = 1");
    if (n_alpha < 2) throw Error(ErrorKind::config, "need at least 2 rays");

    BeamCache cache;
    cache.model = model;
    cache.data = data;
    cache.chart = chart;
    cache.t = t;
    cache.dt = dt;
    cache.rays.resize(n_alpha);

    // rank and imaginary-rank checks at initialization
    {
        Vec a0 = 0.5 * (chart.alpha_min + chart.alpha_max);
        const Mat T = chart.tangent(a0);
        if (Eigen::JacobiSVD<Mat>(T).singularValues().minCoeff() < 1e-10)
            throw Error(ErrorKind::chart, "chart tangent is rank-deficient");
        const Theta0Eval th = eval_theta0(data, chart.X0(a0).cast<Complex>());
        const Mat imH = th.hess.imag();
        const auto sv = Eigen::JacobiSVD<Mat>(imH).singularValues();
        int rank = 0;
        for (int k = 0; k < sv.size(); ++k)
            if (sv[k] > 1e-10 * sv[0]) ++rank;
        if (rank != model.dim)
            throw Error(ErrorKind::chart, "rank(Im theta0'') != d on the initial manifold");
    }

    const double lo = chart.alpha_min[0], hi = chart.alpha_max[0];
    for (int k = 0; k < n_alpha; ++k) {
        Vec a(1);
        a << lo + (hi - lo) * k / (n_alpha - 1);
        cache.rays[k] = run_ray(model, data, chart, a, t, dt, debug_full_P);
    }
    return cache;
}

BeamRay integrate_ray(const BeamCache& cache, const Vec& alpha, bool debug_full_P) {
    return run_ray(cache.model, cache.data, cache.chart, alpha, cache.t, cache.dt, debug_full_P);
}

CMat beam_Q(const BeamCache& cache, const Vec& alpha) {
    return integrate_ray(cache, alpha).Qt;
}

namespace {

// X_t(alpha) and d X_t / d alpha via the real linearized flow.
std::pair<Vec, Vec> flow_and_tangent(const BeamCache& cache, const Vec& alpha) {
    const Vec X0 = cache.chart.X0(alpha);
    const Mat T0 = cache.chart.tangent(alpha);
    if (cache.t == 0.0) return {X0, Vec(T0.col(0))};
    const int d = cache.model.dim;
    const Mat J = canonical_J(d);
    Vec X = X0;
    Mat M = Mat::Identity(2 * d, 2 * d);
    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(cache.t) / cache.dt - 1e-12)));
    const double h = cache.t / nsteps;
    auto rhsX = [&](const Vec& Xs) {
        const Vec g = cache.model.gradient(Xs);
        Vec dX(2 * d);
        dX.head(d) = g.tail(d);
        dX.tail(d) = -g.head(d);
        return dX;
    };
    for (int k = 0; k < nsteps; ++k) {
        const Vec k1x = rhsX(X);
        const Mat k1m = J * cache.model.hessian(X) * M;
        const Vec x2 = X + 0.5 * h * k1x;
        const Mat m2 = M + 0.5 * h * k1m;
        const Vec k2x = rhsX(x2);
        const Mat k2m = J * cache.model.hessian(x2) * m2;
        const Vec x3 = X + 0.5 * h * k2x;
        const Mat m3 = M + 0.5 * h * k2m;
        const Vec k3x = rhsX(x3);
        const Mat k3m = J * cache.model.hessian(x3) * m3;
        const Vec x4 = X + h * k3x;
        const Mat m4 = M + h * k3m;
        const Vec k4x = rhsX(x4);
        const Mat k4m = J * cache.model.hessian(x4) * m4;
        X += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        M += h / 6 * (k1m + 2 * k2m + 2 * k3m + k4m);
    }
    return {X, Vec(M * T0.col(0))};
}

}  // namespace

NearestPointResult nearest_point(const BeamCache& cache, const Vec& X) {
    if (cache.rays.empty()) throw Error(ErrorKind::config, "empty beam cache");

    // dense seeding: best sample plus an ambiguity check between separated minima
    int best = 0;
    double bestd = 1e300;
    std::vector<double> dist(cache.rays.size());
    for (size_t k = 0; k < cache.rays.size(); ++k) {
        dist[k] = (X - cache.rays[k].Xt).norm();
        if (dist[k] < bestd) {
            bestd = dist[k];
            best = static_cast<int>(k);
        }
    }
    for (size_t k = 0; k + 1 > 0 && k < cache.rays.size(); ++k) {
        const bool is_min = (k == 0 || dist[k] <= dist[k - 1]) &&
                            (k + 1 == cache.rays.size() || dist[k] <= dist[k + 1]);
        if (is_min && std::abs(static_cast<int>(k) - best) > 2 && std::abs(dist[k] - bestd) < 1e-6)
            throw Error(ErrorKind::outside_neighborhood, "ambiguous nearest point on the manifold");
    }

    // Newton on g(alpha) = (X - X_t(alpha)) . dX_t/dalpha
    double a = cache.rays[best].alpha[0];
    auto gfun = [&](double av) {
        Vec al(1);
        al << av;
        auto [Xt, T] = flow_and_tangent(cache, al);
        return std::make_pair((X - Xt).dot(T), Xt);
    };
    bool converged = false;
    Vec Xt_final;
    for (int it = 0; it < 50; ++it) {
        auto [g, Xt] = gfun(a);
        Xt_final = Xt;
        if (std::abs(g) < 1e-10 * (1.0 + X.norm())) {
            converged = true;
            break;
        }
        const double ha = 1e-6 * (1.0 + std::abs(a));
        const double gp = (gfun(a + ha).first - gfun(a - ha).first) / (2.0 * ha);
        if (gp == 0.0) break;
        a -= g / gp;
        if (!std::isfinite(a)) break;
    }
    if (!converged)
        throw Error(ErrorKind::outside_neighborhood, "nearest-point Newton did not converge");

    NearestPointResult out;
    out.alpha = Vec::Constant(1, a);
    out.eps = (X - Xt_final).norm();
    out.in_tube = out.eps < cache.tube_radius;
    return out;
}

Complex beam_phase(const BeamCache& cache, const Vec& X) {
    const NearestPointResult np = nearest_point(cache, X);
    const BeamRay ray = integrate_ray(cache, np.alpha);
    const int d = cache.model.dim;
    const Mat J = canonical_J(d);
    const Vec dX = X - ray.Xt;
    const Vec halfJX = 0.5 * J * ray.Xt;
    const CVec dXc = dX.cast<Complex>();
    const Complex quad = (dXc.transpose() * ray.Qt * dXc)(0);
    return ray.theta0 + Complex(halfJX.dot(dX) + ray.Aw, 0) + 0.5 * quad;
}

Complex beam_amplitude(const BeamCache& cache, const Vec& X, double hbar) {
    const NearestPointResult np = nearest_point(cache, X);
    const BeamRay ray = integrate_ray(cache, np.alpha);
    const Complex chi0 = std::pow(M_PI * hbar, -0.25 * cache.model.dim) * ray.chi0_tilde;
    return chi0 * std::exp(-0.5 * ray.log_det_C);
}

BeamFieldResult beam_field(const BeamCache& cache, const GridSpec& targets, double hbar, int threads) {
    targets.validate();
    BeamFieldResult out;
    out.field = make_field(targets, hbar, cache.t, Method::beam);
    std::vector<int> hits(targets.nq, 0);
    const Mat J = canonical_J(cache.model.dim);

    parallel_for(targets.nq, threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            for (int j = 0; j < targets.np; ++j) {
                Vec X(2);
                X << targets.q(i), targets.p(j);
                NearestPointResult np;
                try {
                    np = nearest_point(cache, X);
                } catch (const Error&) {
                    continue;  // outside the tube: masked to zero
                }
                if (!np.in_tube) continue;
                const BeamRay ray = integrate_ray(cache, np.alpha);
                const Vec dX = X - ray.Xt;
                const Vec halfJX = 0.5 * J * ray.Xt;
                const CVec dXc = dX.cast<Complex>();
                const Complex quad = (dXc.transpose() * ray.Qt * dXc)(0);
                const Complex Phi = ray.theta0 + Complex(halfJX.dot(dX) + ray.Aw, 0) + 0.5 * quad;
                const Complex chi = std::pow(M_PI * hbar, -0.25) * ray.chi0_tilde *
                                    std::exp(-0.5 * ray.log_det_C);
                out.field.at(i, j) = chi * std::exp(I1 / hbar * Phi);
                ++hits[i];
            }
        }
    });
    long total = 0;
    for (int h : hits) total += h;
    out.tube_coverage = static_cast<double>(total) / (static_cast<double>(targets.nq) * targets.np);
    return out;
}

ManifoldRestriction on_manifold_restriction(const BeamCache& cache, double q, double hbar) {
    // solve q_t(alpha) = q on the single-sheeted projection
    double a = 0.5 * (cache.chart.alpha_min[0] + cache.chart.alpha_max[0]);
    {
        // dense seed
        double bestd = 1e300;
        for (const BeamRay& r : cache.rays) {
            const double d_ = std::abs(r.Xt[0] - q);
            if (d_ < bestd) {
                bestd = d_;
                a = r.alpha[0];
            }
        }
    }
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        Vec al(1);
        al << a;
        auto [Xt, T] = flow_and_tangent(cache, al);
        const double g = Xt[0] - q;
        if (std::abs(g) < 1e-12 * (1.0 + std::abs(q))) {
            converged = true;
            break;
        }
        if (std::abs(T[0]) < 1e-10)
            throw Error(ErrorKind::chart, "q-projection of the manifold is degenerate here");
        a -= g / T[0];
        if (!std::isfinite(a)) break;
    }
    if (!converged) throw Error(ErrorKind::chart, "q-projection solve did not converge");

    ManifoldRestriction out;
    out.alpha = Vec::Constant(1, a);
    const BeamRay ray = integrate_ray(cache, out.alpha);
    const Complex S = ray.theta0 + Complex(ray.Aw, 0);  // the offset terms vanish on the manifold
    if (std::abs(S.imag()) > 1e-10)
        throw Error(ErrorKind::invariant_violation, "Im S != 0 on the manifold");
    out.S = S.real();
    out.R = std::pow(M_PI * hbar, -0.25) * ray.chi0_tilde * std::exp(-0.5 * ray.log_det_C);
    return out;
}

}  // namespace psdyn
