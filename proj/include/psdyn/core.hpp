#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psdyn {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Error taxonomy. The category drives the CLI exit code (config -> 2, the
// rest -> 3).
enum class ErrorKind {
    config,
    dimension,
    divergence,
    step_size,
    caustic,
    staleness,
    tail_mass,
    resolution,
    stationary_solve,
    degenerate_phase,
    outside_neighborhood,
    domain,
    chart,
    grid_mismatch,
    unsupported,
    invariant_violation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct SemiclassicalConfig {
    double hbar = 1.0;
    int dim = 1;

    SemiclassicalConfig() = default;
    SemiclassicalConfig(double hbar_, int dim_) : hbar(hbar_), dim(dim_) {
        if (!(hbar > 0.0)) throw Error(ErrorKind::config, "hbar must be positive");
        if (dim < 1) throw Error(ErrorKind::config, "dim must be >= 1");
    }
};

// Point X = (q,p) in R^{2d}. Stored flat with q in the first d slots.
struct PhasePoint {
    Vec x;  // size 2d

    PhasePoint() = default;
    explicit PhasePoint(Vec v) : x(std::move(v)) {
        if (x.size() % 2 != 0) throw Error(ErrorKind::dimension, "phase point needs even length");
        if (!x.allFinite()) throw Error(ErrorKind::domain, "phase point has non-finite entries");
    }
    PhasePoint(double q, double p) : x(2) { x << q, p; }

    int dim() const { return static_cast<int>(x.size()) / 2; }
    auto q() const { return x.head(dim()); }
    auto p() const { return x.tail(dim()); }
};

// Point (X,P) in double phase space R^{4d}.
struct DoublePhasePoint {
    Vec X;  // size 2d
    Vec P;  // size 2d

    DoublePhasePoint(Vec X_, Vec P_) : X(std::move(X_)), P(std::move(P_)) {
        if (X.size() != P.size() || X.size() % 2 != 0)
            throw Error(ErrorKind::dimension, "double phase point needs matching even lengths");
        if (!X.allFinite() || !P.allFinite())
            throw Error(ErrorKind::domain, "double phase point has non-finite entries");
    }

    // On the invariant plane, P = (1/2) J X exactly.
    bool on_plane(double tol = 0.0) const;
};

struct GridSpec {
    double qmin = -1, qmax = 1, pmin = -1, pmax = 1;
    int nq = 2, np = 2;

    void validate() const {
        if (nq < 2 || np < 2) throw Error(ErrorKind::config, "grid needs nq,np >= 2");
        if (!(qmax > qmin) || !(pmax > pmin)) throw Error(ErrorKind::config, "grid needs max > min");
    }
    double dq() const { return (qmax - qmin) / (nq - 1); }
    double dp() const { return (pmax - pmin) / (np - 1); }
    double q(int i) const { return qmin + i * dq(); }
    double p(int j) const { return pmin + j * dp(); }
    bool operator==(const GridSpec& o) const {
        return qmin == o.qmin && qmax == o.qmax && pmin == o.pmin && pmax == o.pmax && nq == o.nq && np == o.np;
    }
};

enum class Method { exact, aga, frozen, fourier, beam, transform };

const char* method_name(Method m);
Method method_from_name(const std::string& s);

// Samples of a phase-space wavefunction over a rectangular grid.
// values[i*np + j] is the sample at (q_i, p_j).
struct ComplexField {
    GridSpec grid;
    std::vector<Complex> values;
    double hbar = 1.0;
    double time = 0.0;
    Method method = Method::exact;

    Complex& at(int i, int j) { return values[static_cast<size_t>(i) * grid.np + j]; }
    const Complex& at(int i, int j) const { return values[static_cast<size_t>(i) * grid.np + j]; }
    void validate() const;

    // L2 norm with trapezoid weights.
    double l2_norm() const;
};

ComplexField make_field(const GridSpec& grid, double hbar, double time, Method method);

// Canonical symplectic matrix [[0, I], [-I, 0]] of size 2d x 2d.
Mat canonical_J(int dim);

struct SiegelReport {
    bool ok = false;
    double symmetry_defect = 0.0;  // relative ||M - M^T||
    double min_imag_eig = 0.0;     // smallest eigenvalue of the symmetrized Im M
    std::string what;
};

// Siegel upper half-space membership: M symmetric (1e-12 relative) and
// Im M positive definite (min eigenvalue > 1e-12).
SiegelReport check_siegel(const CMat& M);

// True iff ((2/i) M)^T J ((2/i) M) = J within tol.
bool check_scaled_symplectic(const CMat& M, double tol = 1e-10);

// Deterministic parallel map over [0, n): each worker handles a contiguous
// slice, so results are identical for any thread count.
void parallel_for(int n, int threads, const std::function<void(int, int)>& body);

int resolve_threads(int requested);

}  // namespace psdyn
