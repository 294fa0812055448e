#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fcs/errors.hpp"

namespace fcs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances threaded explicitly through the library.
struct Tolerances {
    double psd = 1e-10;     // eigenvalues in [-psd, 0] are clipped to zero
    double herm = 1e-10;    // max |X - X^*| entry for Hermitian inputs
    double trace = 1e-9;    // |Tr D - 1| for density matrices
    double inv = 1e-8;      // FCS acceptance (CP, unitality, rho-invariance)
    double weight = 1e-12;  // conditional-state normalisation floor
    double rank = 1e-12;    // Choi eigencomponents at or below this are dropped
};

/// Tensor-factor dimensions of a composite space, outermost factor first.
class SiteDims {
public:
    SiteDims() = default;
    explicit SiteDims(std::vector<Index> dims);
    /// n copies of the same local dimension.
    static SiteDims uniform(Index d, std::size_t n);

    std::size_t size() const { return dims_.size(); }
    Index operator[](std::size_t i) const { return dims_[i]; }
    Index total() const { return total_; }
    std::span<const Index> dims() const { return dims_; }

private:
    std::vector<Index> dims_;
    Index total_ = 1;
};

/// Validated density matrix: Hermitian, PSD and unit trace within tolerance.
class DensityMatrix {
public:
    /// Throws InvalidDensityError when the matrix is not a density.
    explicit DensityMatrix(Matrix m, const Tolerances& tol = {});

    const Matrix& matrix() const { return m_; }
    Index dim() const { return m_.rows(); }

    static DensityMatrix maximally_mixed(Index d);

private:
    Matrix m_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_power(const Matrix& a, std::size_t n);

/// Trace out every factor not listed in `keep`. The result's factors appear in
/// increasing index order regardless of the order in `keep`.
Matrix partial_trace(const Matrix& x, const SiteDims& dims, std::span<const std::size_t> keep);

/// Trace out the factor with index `factor`.
Matrix trace_out(const Matrix& x, const SiteDims& dims, std::size_t factor);

struct HermitianSpectrum {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns
};

/// Eigen-decomposition of a Hermitian matrix. Only the lower triangle is read.
HermitianSpectrum hermitian_eigen(const Matrix& x);
RealVector hermitian_eigenvalues(const Matrix& x);

/// eta(x) = -x log x with eta(0) = 0. Throws DomainError outside [0, 1].
double eta(double x, double tol = 1e-12);

/// von Neumann entropy in nats.
double von_neumann_entropy(const DensityMatrix& d, const Tolerances& tol = {});

/// Entropy of an unnormalised PSD matrix after normalising by its trace.
/// Negative eigenvalues above -tol * scale are treated as rounding noise.
double normalized_entropy(const Matrix& psd, double tol = 1e-10);

/// -sum p log p over a probability vector, clipping rounding noise.
double shannon_entropy(std::span<const double> p);

double hermiticity_defect(const Matrix& x);
double operator_norm(const Matrix& x);
/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm_hermitian(const Matrix& x);
double min_eigenvalue(const Matrix& hermitian);

/// Principal square root of a PSD matrix (negative noise clipped).
Matrix psd_sqrt(const Matrix& x);

/// e_{ij} in M_dim.
Matrix matrix_unit(Index dim, Index i, Index j);

/// Nats to the requested unit.
inline double to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace fcs
