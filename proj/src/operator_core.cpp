#include "fcs/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fcs {

SiteDims::SiteDims(std::vector<Index> dims) : dims_(std::move(dims)) {
    for (Index d : dims_) {
        if (d < 1) throw ShapeError("SiteDims: factor dimension must be positive");
        total_ *= d;
    }
}

SiteDims SiteDims::uniform(Index d, std::size_t n) {
    return SiteDims(std::vector<Index>(n, d));
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw InvalidDensityError("density matrix must be square and non-empty");
    if (!m_.allFinite()) throw InvalidDensityError("density matrix has non-finite entries");
    const double herm = hermiticity_defect(m_);
    if (herm > tol.herm) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (defect " << herm << ")";
        throw InvalidDensityError(os.str());
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream os;
        os << "density matrix trace " << tr << " differs from 1";
        throw InvalidDensityError(os.str());
    }
    const double lo = min_eigenvalue(m_);
    if (lo < -tol.psd) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << lo;
        throw InvalidDensityError(os.str());
    }
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix kron_power(const Matrix& a, std::size_t n) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

Matrix partial_trace(const Matrix& x, const SiteDims& dims, std::span<const std::size_t> keep) {
    if (x.rows() != x.cols() || x.rows() != dims.total())
        throw ShapeError("partial_trace: matrix dimension does not match site dimensions");
    const std::size_t nf = dims.size();
    std::vector<bool> kept(nf, false);
    for (std::size_t k : keep) {
        if (k >= nf) throw ShapeError("partial_trace: kept factor index out of range");
        kept[k] = true;
    }

    Index dk = 1, dt = 1;
    for (std::size_t f = 0; f < nf; ++f) (kept[f] ? dk : dt) *= dims[f];

    // full[kr * dt + t] = linear index of (kept multi-index kr, traced multi-index t)
    std::vector<Index> full(static_cast<std::size_t>(dims.total()));
    for (Index i = 0; i < dims.total(); ++i) {
        Index rem = i, kr = 0, t = 0, ks = 1, ts = 1;
        for (std::size_t f = nf; f-- > 0;) {
            const Index digit = rem % dims[f];
            rem /= dims[f];
            if (kept[f]) {
                kr += digit * ks;
                ks *= dims[f];
            } else {
                t += digit * ts;
                ts *= dims[f];
            }
        }
        full[static_cast<std::size_t>(kr * dt + t)] = i;
    }

    Matrix out = Matrix::Zero(dk, dk);
    for (Index r = 0; r < dk; ++r)
        for (Index c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (Index t = 0; t < dt; ++t)
                acc += x(full[static_cast<std::size_t>(r * dt + t)],
                         full[static_cast<std::size_t>(c * dt + t)]);
            out(r, c) = acc;
        }
    return out;
}

Matrix trace_out(const Matrix& x, const SiteDims& dims, std::size_t factor) {
    std::vector<std::size_t> keep;
    for (std::size_t f = 0; f < dims.size(); ++f)
        if (f != factor) keep.push_back(f);
    return partial_trace(x, dims, keep);
}

HermitianSpectrum hermitian_eigen(const Matrix& x) {
    if (x.rows() != x.cols()) throw ShapeError("hermitian_eigen: matrix is not square");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
    if (solver.info() != Eigen::Success) throw NumericError("hermitian_eigen: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const Matrix& x) {
    if (x.rows() != x.cols()) throw ShapeError("hermitian_eigenvalues: matrix is not square");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("hermitian_eigenvalues: eigensolver failed");
    return solver.eigenvalues();
}

double eta(double x, double tol) {
    if (x < -tol || x > 1.0 + tol) {
        std::ostringstream os;
        os << "eta: argument " << x << " outside [0, 1]";
        throw DomainError(os.str());
    }
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log(x);
}

namespace {

double entropy_from_values(const RealVector& values) {
    double s = 0.0;
    for (Index i = 0; i < values.size(); ++i) {
        const double p = values[i];
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& d, const Tolerances& tol) {
    RealVector values = hermitian_eigenvalues(d.matrix());
    for (Index i = 0; i < values.size(); ++i) {
        if (values[i] < -tol.psd) throw InvalidDensityError("von_neumann_entropy: negative eigenvalue");
        if (values[i] < 0.0) values[i] = 0.0;
    }
    return entropy_from_values(values);
}

double normalized_entropy(const Matrix& psd, double tol) {
    const double tr = psd.trace().real();
    if (!(tr > 0.0)) throw InvalidDensityError("normalized_entropy: non-positive trace");
    RealVector values = hermitian_eigenvalues(psd) / tr;
    const double floor = -tol * std::max(1.0, values.cwiseAbs().maxCoeff());
    for (Index i = 0; i < values.size(); ++i) {
        if (values[i] < floor) throw InvalidDensityError("normalized_entropy: matrix is not PSD");
        if (values[i] < 0.0) values[i] = 0.0;
    }
    return entropy_from_values(values);
}

double shannon_entropy(std::span<const double> p) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

double hermiticity_defect(const Matrix& x) {
    if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues()(0);
}

double trace_norm_hermitian(const Matrix& x) {
    const Matrix h = 0.5 * (x + x.adjoint());
    return hermitian_eigenvalues(h).cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& hermitian) {
    const Matrix h = 0.5 * (hermitian + hermitian.adjoint());
    return hermitian_eigenvalues(h)(0);
}

Matrix psd_sqrt(const Matrix& x) {
    const HermitianSpectrum sp = hermitian_eigen(0.5 * (x + x.adjoint()));
    const RealVector root = sp.values.cwiseMax(0.0).cwiseSqrt();
    return sp.vectors * root.cast<Complex>().asDiagonal() * sp.vectors.adjoint();
}

Matrix matrix_unit(Index dim, Index i, Index j) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, j) = 1.0;
    return e;
}

}  // namespace fcs
