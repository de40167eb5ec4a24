#include "psdyn/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace psdyn {

namespace {
const Complex I1(0, 1);

double omega(const Vec& X, const Vec& Y) {
    // X . J Y = q.xi - p.eta
    const int d = static_cast<int>(X.size()) / 2;
    return X.head(d).dot(Y.tail(d)) - X.tail(d).dot(Y.head(d));
}
}  // namespace

SourceCache make_source_cache(const HamiltonianModel& model, const Vec& Y, double t, double dt) {
    const int d = model.dim;
    SourceCache c;
    c.Y = Y;
    c.t = t;
    if (t == 0.0) {
        c.Yt = Y;
        c.action = 0.0;
        c.A = CMat::Identity(d, d);
        c.B = I1 * CMat::Identity(d, d);
        c.log_det_AmiB = Complex(d * std::log(2.0), 0.0);
    } else {
        const FlowVarState<double> end = advance_real(model, Y, t, dt);
        c.Yt = end.Y;
        c.action = end.action;
        c.A = end.A;
        c.B = end.B;
        c.log_det_AmiB = end.log_det_AmiB;
    }
    Eigen::FullPivLU<CMat> lu(c.A);
    if (!lu.isInvertible())
        throw Error(ErrorKind::caustic, "source cache hit a caustic (det A = 0)");
    CMat Z = c.B * lu.inverse();
    Z = 0.5 * (Z + Z.transpose().eval());
    c.Q = anisotropy_Q(Z);
    // (det(A - iB)/2^d)^{-1/2} with the branch continued from t = 0
    c.prefactor = std::exp(-0.5 * (c.log_det_AmiB - Complex(d * std::log(2.0), 0.0)));
    c.phase_const = c.action + 0.5 * (c.Y.tail(d).dot(c.Y.head(d)) - c.Yt.tail(d).dot(c.Yt.head(d)));
    const Mat imQ = 0.5 * (c.Q.imag() + c.Q.imag().transpose());
    c.lambda_min_imQ = Eigen::SelfAdjointEigenSolver<Mat>(imQ).eigenvalues().minCoeff();
    return c;
}

KernelEvaluation kernel_KZ(const Vec& X, const SourceCache& cache, double t, double hbar) {
    if (std::abs(cache.t - t) > 1e-12)
        throw Error(ErrorKind::staleness, "source cache was integrated to a different time");
    const int d = static_cast<int>(X.size()) / 2;
    KernelEvaluation ev;
    ev.prefactor_branch = cache.prefactor;
    ev.action_term = cache.phase_const;
    ev.midpoint_term = 0.5 * omega(X, cache.Yt);
    const CVec delta = (X - cache.Yt).cast<Complex>();
    ev.quad_term = 0.5 * (delta.transpose() * cache.Q * delta)(0);
    const Complex phase = Complex(ev.action_term + ev.midpoint_term, 0) + ev.quad_term;
    ev.value = std::pow(2.0 * M_PI * hbar, -d) * cache.prefactor * std::exp(I1 / hbar * phase);
    return ev;
}

Complex bergmann_kernel(const Vec& X, const Vec& Y, double hbar) {
    if (!(hbar > 0)) throw Error(ErrorKind::config, "hbar must be positive");
    const int d = static_cast<int>(X.size()) / 2;
    return std::pow(2.0 * M_PI * hbar, -d) *
           std::exp(Complex(-(X - Y).squaredNorm() / (4.0 * hbar), 0.5 * omega(X, Y) / hbar));
}

namespace {

struct SourceNode {
    Vec Y;
    Complex amp;  // quadrature weight times Psi0(Y)
};

struct Lattice {
    std::vector<SourceNode> nodes;
    double max_abs_psi0 = 0;
};

double auto_spacing(const GridSpec& targets, double ybound, double t, double hbar) {
    const double xmax = std::max({std::abs(targets.qmin), std::abs(targets.qmax), std::abs(targets.pmin),
                                  std::abs(targets.pmax)});
    const double s = 0.5 * ybound + 2.0 * std::abs(t) * ybound + 0.5 * xmax * (1.0 + 2.0 * std::abs(t)) +
                     8.0 * std::sqrt(hbar);
    return std::min(0.5 * std::sqrt(hbar), 2.0 * M_PI * hbar / s);
}

Lattice build_lattice(const InitialFn& psi0, const GridSpec& targets, double t,
                      const HamiltonianModel& model, double hbar, const SourceQuad& quad, double& dt_used) {
    if (model.dim != 1) throw Error(ErrorKind::unsupported, "field superpositions are d = 1");
    double qlo = quad.qmin, qhi = quad.qmax, plo = quad.pmin, phi = quad.pmax;
    if (!(qhi > qlo) || !(phi > plo)) {
        // pull the target corners back along the flow and cover the initial support
        double w = quad.initial_halfwidth;
        qlo = -w;
        qhi = w;
        plo = -w;
        phi = w;
        for (double qc : {targets.qmin, targets.qmax}) {
            for (double pc : {targets.pmin, targets.pmax}) {
                Vec X(2);
                X << qc, pc;
                const Vec Y = t == 0.0 ? X : advance_real(model, X, -t, quad.cache_dt).Y;
                const double m = 4.0 * std::sqrt(hbar);
                qlo = std::min(qlo, Y[0] - m);
                qhi = std::max(qhi, Y[0] + m);
                plo = std::min(plo, Y[1] - m);
                phi = std::max(phi, Y[1] + m);
            }
        }
    }
    const double ybound = std::max({std::abs(qlo), std::abs(qhi), std::abs(plo), std::abs(phi)});
    const double delta = quad.spacing > 0 ? quad.spacing : auto_spacing(targets, ybound, t, hbar);
    dt_used = quad.cache_dt;

    const int nq = static_cast<int>(std::floor((qhi - qlo) / delta)) + 1;
    const int np = static_cast<int>(std::floor((phi - plo) / delta)) + 1;

    Lattice lat;
    std::vector<std::vector<Complex>> vals(nq, std::vector<Complex>(np));
    double vmax = 0;
    Vec Y(2);
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < np; ++j) {
            Y << qlo + i * delta, plo + j * delta;
            const Complex v = psi0(Y);
            vals[i][j] = v;
            vmax = std::max(vmax, std::abs(v));
        }
    }
    lat.max_abs_psi0 = vmax;
    // boundary ring must be negligible or the box is too small
    double edge = 0;
    for (int i = 0; i < nq; ++i) edge = std::max({edge, std::abs(vals[i][0]), std::abs(vals[i][np - 1])});
    for (int j = 0; j < np; ++j) edge = std::max({edge, std::abs(vals[0][j]), std::abs(vals[nq - 1][j])});
    if (edge > 1e-7 * vmax)
        throw Error(ErrorKind::tail_mass, "initial data not covered by the source box; enlarge it");

    const double w2 = delta * delta;
    const double cut = quad.prune_rel * vmax;
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < np; ++j)
            if (std::abs(vals[i][j]) >= cut) {
                Vec Yn(2);
                Yn << qlo + i * delta, plo + j * delta;
                lat.nodes.push_back({Yn, w2 * vals[i][j]});
            }
    return lat;
}

ComplexField superpose(const Lattice& lat, const GridSpec& targets, double t, const HamiltonianModel& model,
                       double hbar, double cache_dt, KernelType type, int threads, Method tag) {
    targets.validate();
    const int d = model.dim;
    const int n = static_cast<int>(lat.nodes.size());

    // per-source caches (parallel over sources)
    std::vector<SourceCache> caches(n);
    parallel_for(n, threads, [&](int lo, int hi) {
        for (int k = lo; k < hi; ++k) caches[k] = make_source_cache(model, lat.nodes[k].Y, t, cache_dt);
    });

    struct Packed {
        double ytq, ytp;          // Y_t
        Complex camp;             // (2 pi hbar)^{-d} pref e^{i phase_const/hbar} w Psi0
        Complex q11, q12, q22;    // (i/2hbar) Q  (quadratic form, folded constants)
        double prune_log;         // log|camp|
        double lam;               // lambda_min(Im Q)/(2 hbar)
    };
    std::vector<Packed> packed(n);
    const double norm = std::pow(2.0 * M_PI * hbar, -d);
    for (int k = 0; k < n; ++k) {
        const SourceCache& c = caches[k];
        Packed pk;
        pk.ytq = c.Yt[0];
        pk.ytp = c.Yt[1];
        if (type == KernelType::aga) {
            pk.camp = norm * c.prefactor * std::exp(I1 * c.phase_const / hbar) * lat.nodes[k].amp;
            pk.q11 = I1 / (2.0 * hbar) * c.Q(0, 0);
            pk.q12 = I1 / (2.0 * hbar) * c.Q(0, 1);
            pk.q22 = I1 / (2.0 * hbar) * c.Q(1, 1);
            pk.lam = c.lambda_min_imQ / (2.0 * hbar);
        } else {
            // frozen: e^{iA/hbar} b(X, Y_t) -- rigid packet, action phase only
            pk.camp = norm * std::exp(I1 * c.action / hbar) * lat.nodes[k].amp;
            pk.q11 = pk.q22 = Complex(-1.0 / (4.0 * hbar), 0);
            pk.q12 = Complex(0, 0);
            pk.lam = 1.0 / (4.0 * hbar);
        }
        pk.prune_log = std::log(std::max(std::abs(pk.camp), 1e-300));
        packed[k] = pk;
    }

    ComplexField out = make_field(targets, hbar, t, tag);
    // skip a source when its Gaussian bound is below this relative to scale
    double logmax = -1e300;
    for (const Packed& pk : packed) logmax = std::max(logmax, pk.prune_log);
    const double logcut = logmax + std::log(1e-14);

    parallel_for(targets.nq, threads, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const double q = targets.q(i);
            for (int j = 0; j < targets.np; ++j) {
                const double p = targets.p(j);
                Complex acc(0, 0);
                for (const Packed& pk : packed) {
                    const double dq = q - pk.ytq;
                    const double dp = p - pk.ytp;
                    const double r2 = dq * dq + dp * dp;
                    if (pk.prune_log - pk.lam * r2 < logcut) continue;
                    const double mid = 0.5 * (q * pk.ytp - p * pk.ytq) / hbar;
                    const Complex expo =
                        Complex(0, mid) + pk.q11 * (dq * dq) + 2.0 * pk.q12 * (dq * dp) + pk.q22 * (dp * dp);
                    acc += pk.camp * std::exp(expo);
                }
                out.at(i, j) = acc;
            }
        }
    });
    return out;
}

}  // namespace

ComplexField propagate_aga(const InitialFn& psi0, const GridSpec& targets, double t,
                           const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                           int threads) {
    double dt_used = quad.cache_dt;
    const Lattice lat = build_lattice(psi0, targets, t, model, hbar, quad, dt_used);
    return superpose(lat, targets, t, model, hbar, dt_used, KernelType::aga, threads, Method::aga);
}

ComplexField propagate_frozen(const InitialFn& psi0, const GridSpec& targets, double t,
                              const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                              int threads) {
    double dt_used = quad.cache_dt;
    const Lattice lat = build_lattice(psi0, targets, t, model, hbar, quad, dt_used);
    return superpose(lat, targets, t, model, hbar, dt_used, KernelType::frozen, threads, Method::frozen);
}

ComplexField propagate_aga(const ComplexField& initial, const GridSpec& targets, double t,
                           const HamiltonianModel& model, double hbar, const SourceQuad& quad,
                           int threads) {
    initial.validate();
    if (initial.hbar != hbar) throw Error(ErrorKind::grid_mismatch, "initial field has a different hbar");
    Lattice lat;
    const GridSpec& g = initial.grid;
    const double w2 = g.dq() * g.dp();
    double vmax = 0;
    for (const Complex& v : initial.values) vmax = std::max(vmax, std::abs(v));
    lat.max_abs_psi0 = vmax;
    const double cut = quad.prune_rel * vmax;
    for (int i = 0; i < g.nq; ++i) {
        const double wq = (i == 0 || i == g.nq - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.np; ++j) {
            const double wp = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
            const Complex v = initial.at(i, j);
            if (std::abs(v) < cut) continue;
            Vec Y(2);
            Y << g.q(i), g.p(j);
            lat.nodes.push_back({Y, wq * wp * w2 * v});
        }
    }
    return superpose(lat, targets, t, model, hbar, quad.cache_dt, KernelType::aga, threads, Method::aga);
}

ComplexField apply_phase_space_hamiltonian(const ComplexField& field, const HamiltonianModel& model,
                                           double hbar) {
    field.validate();
    if (model.dim != 1) throw Error(ErrorKind::unsupported, "d = 1 fields only");
    if (model.polynomial_degree < 0 || model.polynomial_degree > 2)
        throw Error(ErrorKind::unsupported,
                    "potential degree > 2: phase-space operator is non-local, not a differential operator");

    // V(q) = c0 + c1 q + c2 q^2 from the model kind
    double c0 = 0, c1 = 0, c2 = 0;
    switch (model.kind) {
        case HamiltonianKind::free: break;
        case HamiltonianKind::linear_field: c1 = 1; break;
        case HamiltonianKind::harmonic: c2 = 1; break;
        case HamiltonianKind::polynomial: {
            const auto& cf = model.coefficients;
            if (cf.size() > 0) c0 = cf[0];
            if (cf.size() > 1) c1 = cf[1];
            if (cf.size() > 2) c2 = cf[2];
            break;
        }
        default: throw Error(ErrorKind::unsupported, "unknown potential decomposition");
    }

    const GridSpec& g = field.grid;
    const double xscale =
        std::max({std::abs(g.qmin), std::abs(g.qmax), std::abs(g.pmin), std::abs(g.pmax), 1.0});
    // 8 points per wavelength of the dominant carrier k ~ xscale/(2 hbar)
    const double hmax = M_PI * hbar / (2.0 * xscale);
    if (g.dq() > hmax || g.dp() > hmax)
        throw Error(ErrorKind::resolution, "grid too coarse to resolve the oscillations");
    if (g.nq < 5 || g.np < 5) throw Error(ErrorKind::resolution, "grid too small for 5-point stencils");

    ComplexField out = make_field(g, field.hbar, field.time, field.method);
    const double hq = g.dq(), hp = g.dp();
    for (int i = 2; i < g.nq - 2; ++i) {
        const double q = g.q(i);
        for (int j = 2; j < g.np - 2; ++j) {
            const double p = g.p(j);
            const Complex v = field.at(i, j);
            const Complex dq = (-field.at(i + 2, j) + 8.0 * field.at(i + 1, j) - 8.0 * field.at(i - 1, j) +
                                field.at(i - 2, j)) /
                               (12.0 * hq);
            const Complex dqq = (-field.at(i + 2, j) + 16.0 * field.at(i + 1, j) - 30.0 * v +
                                 16.0 * field.at(i - 1, j) - field.at(i - 2, j)) /
                                (12.0 * hq * hq);
            const Complex dp = (-field.at(i, j + 2) + 8.0 * field.at(i, j + 1) - 8.0 * field.at(i, j - 1) +
                                field.at(i, j - 2)) /
                               (12.0 * hp);
            const Complex dpp = (-field.at(i, j + 2) + 16.0 * field.at(i, j + 1) - 30.0 * v +
                                 16.0 * field.at(i, j - 1) - field.at(i, j - 2)) /
                                (12.0 * hp * hp);
            Complex acc = 0.25 * p * p * v - I1 * hbar * p * dq - hbar * hbar * dqq;  // (p/2 - i h d_q)^2
            acc += c0 * v;
            acc += c1 * (0.5 * q * v + I1 * hbar * dp);
            acc += c2 * (0.25 * q * q * v + I1 * hbar * q * dp - hbar * hbar * dpp);
            out.at(i, j) = acc;
        }
    }
    return out;
}

}  // namespace psdyn
