#include "psdyn/hamiltonian.hpp"

namespace psdyn {

namespace {

template <typename VecT>
auto kinetic(const VecT& X, int d) {
    using S = typename VecT::Scalar;
    S acc(0);
    for (int k = 0; k < d; ++k) acc += X[d + k] * X[d + k];
    return acc;
}

HamiltonianModel make_quadratic_family(HamiltonianKind kind, int dim, double lin_q, double quad_q) {
    // H = |p|^2 + lin_q * sum q_k + quad_q * |q|^2
    HamiltonianModel m;
    m.kind = kind;
    m.dim = dim;
    m.polynomial_degree = 2;  // the |p|^2 term dominates
    const int d = dim;
    m.value = [d, lin_q, quad_q](const Vec& X) {
        double v = kinetic(X, d);
        for (int k = 0; k < d; ++k) v += lin_q * X[k] + quad_q * X[k] * X[k];
        return v;
    };
    m.gradient = [d, lin_q, quad_q](const Vec& X) {
        Vec g = Vec::Zero(2 * d);
        for (int k = 0; k < d; ++k) {
            g[k] = lin_q + 2.0 * quad_q * X[k];
            g[d + k] = 2.0 * X[d + k];
        }
        return g;
    };
    m.hessian = [d, quad_q](const Vec&) {
        Mat H = Mat::Zero(2 * d, 2 * d);
        for (int k = 0; k < d; ++k) {
            H(k, k) = 2.0 * quad_q;
            H(d + k, d + k) = 2.0;
        }
        return H;
    };
    m.value_c = [d, lin_q, quad_q](const CVec& X) {
        Complex v = kinetic(X, d);
        for (int k = 0; k < d; ++k) v += lin_q * X[k] + quad_q * X[k] * X[k];
        return v;
    };
    m.gradient_c = [d, lin_q, quad_q](const CVec& X) {
        CVec g = CVec::Zero(2 * d);
        for (int k = 0; k < d; ++k) {
            g[k] = lin_q + 2.0 * quad_q * X[k];
            g[d + k] = 2.0 * X[d + k];
        }
        return g;
    };
    m.hessian_c = [d, quad_q](const CVec&) {
        CMat H = CMat::Zero(2 * d, 2 * d);
        for (int k = 0; k < d; ++k) {
            H(k, k) = 2.0 * quad_q;
            H(d + k, d + k) = 2.0;
        }
        return H;
    };
    return m;
}

}  // namespace

HamiltonianModel builtin(HamiltonianKind kind, int dim) {
    if (dim < 1) throw Error(ErrorKind::config, "builtin: dim must be >= 1");
    switch (kind) {
        case HamiltonianKind::free: return make_quadratic_family(kind, dim, 0.0, 0.0);
        case HamiltonianKind::linear_field: return make_quadratic_family(kind, dim, 1.0, 0.0);
        case HamiltonianKind::harmonic: return make_quadratic_family(kind, dim, 0.0, 1.0);
        default: throw Error(ErrorKind::config, "builtin: unsupported kind");
    }
}

HamiltonianModel polynomial_model(const std::vector<double>& coeffs) {
    HamiltonianModel m;
    m.kind = HamiltonianKind::polynomial;
    m.dim = 1;
    m.coefficients = coeffs;
    int degV = 0;
    for (size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) degV = static_cast<int>(k);
    m.polynomial_degree = std::max(2, degV);

    auto V = [coeffs](auto q) {
        using S = decltype(q);
        S acc(0), mono(1);
        for (double c : coeffs) {
            acc += c * mono;
            mono *= q;
        }
        return acc;
    };
    auto dV = [coeffs](auto q) {
        using S = decltype(q);
        S acc(0), mono(1);
        for (size_t k = 1; k < coeffs.size(); ++k) {
            acc += static_cast<double>(k) * coeffs[k] * mono;
            mono *= q;
        }
        return acc;
    };
    auto d2V = [coeffs](auto q) {
        using S = decltype(q);
        S acc(0), mono(1);
        for (size_t k = 2; k < coeffs.size(); ++k) {
            acc += static_cast<double>(k * (k - 1)) * coeffs[k] * mono;
            mono *= q;
        }
        return acc;
    };

    m.value = [V](const Vec& X) { return X[1] * X[1] + V(X[0]); };
    m.gradient = [dV](const Vec& X) {
        Vec g(2);
        g << dV(X[0]), 2.0 * X[1];
        return g;
    };
    m.hessian = [d2V](const Vec& X) {
        Mat H = Mat::Zero(2, 2);
        H(0, 0) = d2V(X[0]);
        H(1, 1) = 2.0;
        return H;
    };
    m.value_c = [V](const CVec& X) { return X[1] * X[1] + V(X[0]); };
    m.gradient_c = [dV](const CVec& X) {
        CVec g(2);
        g << dV(X[0]), 2.0 * X[1];
        return g;
    };
    m.hessian_c = [d2V](const CVec& X) {
        CMat H = CMat::Zero(2, 2);
        H(0, 0) = d2V(X[0]);
        H(1, 1) = 2.0;
        return H;
    };
    return m;
}

double double_phase_symbol(const HamiltonianModel& model, const Vec& X, const Vec& P) {
    const int d = model.dim;
    if (X.size() != 2 * d || P.size() != 2 * d)
        throw Error(ErrorKind::dimension, "double_phase_symbol: X,P must have length 2*dim");
    const Mat J = canonical_J(d);
    return model.value(0.5 * X - J * P);
}

}  // namespace psdyn
