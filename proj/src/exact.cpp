#include "psdyn/exact.hpp"

#include <cmath>

namespace psdyn {

namespace {

const Complex I1(0, 1);

double quarter_root_norm(double hbar) { return std::pow(M_PI, -0.25) * std::pow(M_PI * hbar, -0.25); }

Complex sqrt_right_half(Complex z, const char* what) {
    // principal branch; the scenarios keep these arguments in Re > 0, so no
    // branch crossing can occur -- asserted at runtime
    if (!(z.real() > 0))
        throw Error(ErrorKind::domain, std::string("sqrt argument left the right half-plane in ") + what);
    return std::sqrt(z);
}

Complex psi_free(double x, double t, double hbar) {
    const Complex D = 1.0 + 2.0 * Complex(1, hbar) * t;
    return std::pow(M_PI, -0.25) / sqrt_right_half(D, "psi free") *
           std::exp(I1 / hbar * Complex(1, hbar) / D * (0.5 * x * x));
}

Complex psi_linear(double x, double t, double hbar) {
    const Complex D = 1.0 + 2.0 * Complex(1, hbar) * t;
    const Complex ph = (2.0 * Complex(1, hbar) * x * x - 2.0 * x * t - t * t * t) / (4.0 * D) -
                       0.5 * t * x - t * t * t / 12.0;
    return std::pow(M_PI, -0.25) / sqrt_right_half(D, "psi linear") * std::exp(I1 / hbar * ph);
}

Complex psi_harmonic(double x, double t, double hbar) {
    const double c = std::cos(2 * t), s = std::sin(2 * t);
    const Complex den = c + Complex(1, hbar) * s;
    const Complex coef = (Complex(1, hbar) * c - s) / den;
    return std::pow(M_PI, -0.25) / sqrt_right_half(den, "psi harmonic") *
           std::exp(I1 / hbar * coef * (0.5 * x * x));
}

Complex Psi_free(double q, double p, double t, double hbar) {
    const Complex den = Complex(1, -1) + hbar + 2.0 * Complex(1, hbar) * t;
    const Complex qip(q, -p);
    const Complex ph = I1 / hbar * Complex(0.5 * p * q, 0.5 * q * q) +
                       I1 / hbar * (Complex(0, -0.5) * (1.0 + 2.0 * Complex(1, hbar) * t) / den * qip * qip);
    return quarter_root_norm(hbar) / sqrt_right_half(den, "Psi free") * std::exp(ph);
}

Complex Psi_linear(double q, double p, double t, double hbar) {
    const Complex den = Complex(1, -1) + 2.0 * t + Complex(1.0, 2.0 * t) * hbar;
    const Complex A = Complex(-1, -1) - I1 * hbar + 2.0 * Complex(hbar, -1) * t;
    const Complex qip(q, -p);
    const Complex inner = t * t * (0.5 + (Complex(1, 1) + I1 * hbar) / 3.0 * t + Complex(-hbar, 1) / 6.0 * t * t) +
                          t * (I1 + Complex(-hbar, 1) * t) * qip -
                          0.5 * (1.0 + 2.0 * t + 2.0 * hbar * t * I1) * qip * qip;
    return quarter_root_norm(hbar) / sqrt_right_half(den, "Psi linear") *
           std::exp(I1 / hbar * Complex(0.5 * p * q, 0.5 * q * q)) * std::exp(I1 / hbar * inner / A);
}

Complex Psi_harmonic(double q, double p, double t, double hbar) {
    const Complex den = Complex(1, -1) + hbar;
    const double c = std::cos(2 * t), s = std::sin(2 * t);
    // (1 + i hbar + cot 2t) / ((1+i+i hbar)(i + cot 2t)) rewritten pole-free
    const Complex coef = std::exp(-2.0 * I1 * t) * (Complex(1, hbar) * s + c) / Complex(1, 1 + hbar);
    const Complex qip(q, -p);
    return quarter_root_norm(hbar) / sqrt_right_half(den, "Psi harmonic") * std::exp(-I1 * t) *
           std::exp(I1 / hbar * Complex(0.5 * p * q, 0.5 * q * q)) *
           std::exp(I1 / hbar * coef * (0.5 * qip * qip));
}

}  // namespace

Complex ScenarioOracle::psi(double x, double t, double hbar) const {
    switch (kind) {
        case HamiltonianKind::free: return psi_free(x, t, hbar);
        case HamiltonianKind::linear_field: return psi_linear(x, t, hbar);
        case HamiltonianKind::harmonic: return psi_harmonic(x, t, hbar);
        default: throw Error(ErrorKind::unsupported, "no closed-form psi for this kind");
    }
}

Complex ScenarioOracle::Psi(double q, double p, double t, double hbar) const {
    switch (kind) {
        case HamiltonianKind::free: return Psi_free(q, p, t, hbar);
        case HamiltonianKind::linear_field: return Psi_linear(q, p, t, hbar);
        case HamiltonianKind::harmonic: return Psi_harmonic(q, p, t, hbar);
        default: throw Error(ErrorKind::unsupported, "no closed-form Psi for this kind");
    }
}

Vec ScenarioOracle::flow(double q, double p, double t) const {
    Vec X(2);
    switch (kind) {
        case HamiltonianKind::free: X << q + 2 * t * p, p; break;
        case HamiltonianKind::linear_field: X << q + 2 * t * p - t * t, p - t; break;
        case HamiltonianKind::harmonic: {
            const double c = std::cos(2 * t), s = std::sin(2 * t);
            X << c * q + s * p, -s * q + c * p;
            break;
        }
        default: throw Error(ErrorKind::unsupported, "no closed-form flow for this kind");
    }
    return X;
}

Vec ScenarioOracle::chart(double alpha, double t) const {
    return flow(alpha, alpha, t);
}

double ScenarioOracle::alpha_star(double q, double p, double t) const {
    switch (kind) {
        case HamiltonianKind::free: {
            const double m = 1 + 2 * t;
            return (m * q + p) / (1 + m * m);
        }
        case HamiltonianKind::linear_field: {
            const double m = 1 + 2 * t;
            return (t + m * t * t + m * q + p) / (1 + m * m);
        }
        case HamiltonianKind::harmonic: {
            const double c = std::cos(2 * t), s = std::sin(2 * t);
            return 0.5 * ((c + s) * q + (c - s) * p);
        }
        default: throw Error(ErrorKind::unsupported, "no closed-form nearest point for this kind");
    }
}

double ScenarioOracle::eps(double q, double p, double t) const {
    switch (kind) {
        case HamiltonianKind::free:
            return std::abs(p - q + 2 * t * p) / std::sqrt(2.0) / std::sqrt(1 + 2 * t * (1 + t));
        case HamiltonianKind::linear_field:
            // distance to the line q = (1+2t)p + t + t^2 induced by the chart
            return std::abs(p - q + 2 * t * p + t + t * t) / std::sqrt(2.0) /
                   std::sqrt(1 + 2 * t * (1 + t));
        case HamiltonianKind::harmonic: {
            const double c = std::cos(2 * t), s = std::sin(2 * t);
            return std::abs((p - q) * c + (p + q) * s) / std::sqrt(2.0);
        }
        default: throw Error(ErrorKind::unsupported, "no closed-form distance for this kind");
    }
}

Complex ScenarioOracle::beam_phase(double q, double p, double t) const {
    const Complex qip(q, -p);
    switch (kind) {
        case HamiltonianKind::free:
            return -Complex(1, 1) / 4.0 * (p - q + 2 * t * p) / (1.0 + Complex(1, 1) * t) * qip;
        case HamiltonianKind::linear_field: {
            const Complex pre = 1.0 / (12.0 * (1.0 + Complex(1, 1) * t));
            return pre * ((Complex(-3, 3) - 4.0 * t - Complex(1, 1) * t * t) * t * t -
                          6.0 * Complex(1, 1) * (p / Complex(1, 1) + (1.0 + p) * t + t * t) * qip +
                          3.0 * Complex(1, 1) * qip * qip);
        }
        case HamiltonianKind::harmonic:
            return 0.25 * (I1 * (p * p + q * q) + std::exp(-4.0 * I1 * t) * qip * qip);
        default: throw Error(ErrorKind::unsupported, "no closed-form beam phase for this kind");
    }
}

Complex ScenarioOracle::beam_amplitude(double q, double p, double t, double hbar) const {
    const double a = alpha_star(q, p, t);
    const Complex chi0 = quarter_root_norm(hbar) * std::exp(-0.5 * a * a) / std::sqrt(Complex(1, -1));
    switch (kind) {
        case HamiltonianKind::free:
        case HamiltonianKind::linear_field:
            return chi0 / sqrt_right_half(1.0 + Complex(1, 1) * t, "beam amplitude");
        case HamiltonianKind::harmonic:
            return chi0 * std::exp(-I1 * t);  // det C = e^{2it}
        default: throw Error(ErrorKind::unsupported, "no closed-form beam amplitude for this kind");
    }
}

ScenarioOracle make_oracle(HamiltonianKind kind) {
    if (kind != HamiltonianKind::free && kind != HamiltonianKind::linear_field &&
        kind != HamiltonianKind::harmonic)
        throw Error(ErrorKind::unsupported, "closed-form oracle exists only for the built-in scenarios");
    ScenarioOracle o;
    o.kind = kind;
    return o;
}

ComplexField exact_field(HamiltonianKind kind, const GridSpec& targets, double t, double hbar) {
    const ScenarioOracle o = make_oracle(kind);
    ComplexField f = make_field(targets, hbar, t, Method::exact);
    for (int i = 0; i < targets.nq; ++i)
        for (int j = 0; j < targets.np; ++j) f.at(i, j) = o.Psi(targets.q(i), targets.p(j), t, hbar);
    return f;
}

ErrorNorms error_norms(const ComplexField& a, const ComplexField& b) {
    if (!(a.grid == b.grid) || a.hbar != b.hbar || a.time != b.time)
        throw Error(ErrorKind::grid_mismatch, "error_norms: fields live on different grids");
    ErrorNorms out;
    double num = 0.0, den = 0.0, amax = 0.0;
    for (size_t k = 0; k < a.values.size(); ++k)
        amax = std::max({amax, std::abs(a.values[k]), std::abs(b.values[k])});
    const double mask = 1e-3 * amax;
    const GridSpec& g = a.grid;
    for (int i = 0; i < g.nq; ++i) {
        const double wq = (i == 0 || i == g.nq - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.np; ++j) {
            const double wp = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
            const Complex va = a.at(i, j), vb = b.at(i, j);
            num += wq * wp * std::norm(va - vb);
            den += wq * wp * std::norm(vb);
            out.sup = std::max(out.sup, std::abs(va - vb));
            if (std::abs(va) > mask && std::abs(vb) > mask)
                out.phase_sup = std::max(out.phase_sup, std::abs(std::arg(va / vb)));
        }
    }
    out.rel_l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    return out;
}

}  // namespace psdyn
