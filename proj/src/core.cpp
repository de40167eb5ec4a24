#include "psdyn/core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <thread>

namespace psdyn {

bool DoublePhasePoint::on_plane(double tol) const {
    const Mat J = canonical_J(static_cast<int>(X.size()) / 2);
    return (P - 0.5 * J * X).cwiseAbs().maxCoeff() <= tol;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::aga: return "aga";
        case Method::frozen: return "frozen";
        case Method::fourier: return "fourier";
        case Method::beam: return "beam";
        case Method::transform: return "transform";
    }
    return "?";
}

Method method_from_name(const std::string& s) {
    for (Method m : {Method::exact, Method::aga, Method::frozen, Method::fourier, Method::beam, Method::transform})
        if (s == method_name(m)) return m;
    throw Error(ErrorKind::config, "unknown method '" + s + "'");
}

void ComplexField::validate() const {
    grid.validate();
    if (values.size() != static_cast<size_t>(grid.nq) * grid.np)
        throw Error(ErrorKind::grid_mismatch, "field size does not match grid");
    for (const Complex& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::domain, "field has non-finite values");
}

double ComplexField::l2_norm() const {
    double acc = 0.0;
    for (int i = 0; i < grid.nq; ++i) {
        const double wq = (i == 0 || i == grid.nq - 1) ? 0.5 : 1.0;
        for (int j = 0; j < grid.np; ++j) {
            const double wp = (j == 0 || j == grid.np - 1) ? 0.5 : 1.0;
            acc += wq * wp * std::norm(at(i, j));
        }
    }
    return std::sqrt(acc * grid.dq() * grid.dp());
}

ComplexField make_field(const GridSpec& grid, double hbar, double time, Method method) {
    grid.validate();
    ComplexField f;
    f.grid = grid;
    f.values.assign(static_cast<size_t>(grid.nq) * grid.np, Complex(0, 0));
    f.hbar = hbar;
    f.time = time;
    f.method = method;
    return f;
}

Mat canonical_J(int dim) {
    if (dim < 1) throw Error(ErrorKind::dimension, "canonical_J: dim must be >= 1");
    Mat J = Mat::Zero(2 * dim, 2 * dim);
    J.topRightCorner(dim, dim) = Mat::Identity(dim, dim);
    J.bottomLeftCorner(dim, dim) = -Mat::Identity(dim, dim);
    return J;
}

SiegelReport check_siegel(const CMat& M) {
    SiegelReport rep;
    if (M.rows() != M.cols()) throw Error(ErrorKind::dimension, "check_siegel: matrix must be square");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    rep.symmetry_defect = (M - M.transpose()).cwiseAbs().maxCoeff() / scale;

    const Mat imS = 0.5 * (M.imag() + M.imag().transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(imS);
    rep.min_imag_eig = es.eigenvalues().minCoeff();

    if (rep.symmetry_defect > 1e-12) {
        rep.what = "not symmetric";
    } else if (rep.min_imag_eig <= 1e-12) {
        rep.what = "imaginary part not positive definite";
    } else {
        rep.ok = true;
    }
    return rep;
}

bool check_scaled_symplectic(const CMat& M, double tol) {
    if (M.rows() != M.cols()) throw Error(ErrorKind::dimension, "check_scaled_symplectic: matrix must be square");
    if (M.rows() % 2 != 0) throw Error(ErrorKind::dimension, "check_scaled_symplectic: needs even dimension");
    const int d = static_cast<int>(M.rows()) / 2;
    const CMat S = (2.0 / Complex(0, 1)) * M;
    const CMat J = canonical_J(d).cast<Complex>();
    return (S.transpose() * J * S - J).cwiseAbs().maxCoeff() <= tol;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
        const int lo = k * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace psdyn
