#include "fcs/cp_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcs/random.hpp"

namespace fcs {

CpMap::CpMap(Index d, Matrix choi, const Tolerances& tol) : d_(d), choi_(std::move(choi)) {
    if (d < 1) throw ShapeError("CpMap: d must be positive");
    const Index n = d * d * d;
    if (choi_.rows() != n || choi_.cols() != n) {
        std::ostringstream os;
        os << "CpMap: Choi matrix must be " << n << "x" << n << ", got " << choi_.rows() << "x" << choi_.cols();
        throw ShapeError(os.str());
    }
    if (!choi_.allFinite()) throw InputError("CpMap: Choi matrix has non-finite entries");
    if (hermiticity_defect(choi_) > tol.herm * std::max(1.0, choi_.cwiseAbs().maxCoeff()))
        throw InputError("CpMap: Choi matrix is not Hermitian, the map is not Hermiticity preserving");
}

Matrix CpMap::apply(const Matrix& x) const {
    const Index d = d_, d2 = d * d;
    if (x.rows() != d2 || x.cols() != d2) throw ShapeError("apply_E: input must be d^2 x d^2");
    Matrix out = Matrix::Zero(d, d);
    for (Index u = 0; u < d2; ++u)
        for (Index v = 0; v < d2; ++v) {
            const Complex xv = x(u, v);
            if (xv == Complex(0.0)) continue;
            out += xv * choi_.block(u * d, v * d, d, d);
        }
    return out;
}

Matrix CpMap::apply_dual(const Matrix& sigma) const {
    const Index d = d_, d2 = d * d;
    if (sigma.rows() != d || sigma.cols() != d) throw ShapeError("apply_dual: input must be d x d");
    Matrix out(d2, d2);
    for (Index u = 0; u < d2; ++u)
        for (Index v = 0; v < d2; ++v)
            // (E_* s)[v,u] = sum_{ij} s(j,i) C(u d + i, v d + j) = Tr(s^T-contract of block (u,v))
            out(v, u) = (choi_.block(u * d, v * d, d, d).cwiseProduct(sigma.transpose())).sum();
    return out;
}

Matrix CpMap::transfer(const Matrix& c) const {
    return apply(kron(Matrix::Identity(d_, d_), c));
}

Matrix CpMap::transfer_dual(const Matrix& sigma) const {
    const SiteDims dims = SiteDims::uniform(d_, 2);
    return trace_out(apply_dual(sigma), dims, 0);
}

Matrix CpMap::unit_image() const {
    Matrix out = Matrix::Zero(d_, d_);
    for (Index u = 0; u < d_ * d_; ++u) out += choi_.block(u * d_, u * d_, d_, d_);
    return out;
}

Matrix apply_E(const CpMap& e, const Matrix& x) { return e.apply(x); }

CpMap choi_of(Index d, const std::function<Matrix(const Matrix&)>& apply, std::uint64_t seed) {
    const Index d2 = d * d;
    Matrix choi(d2 * d, d2 * d);
    for (Index u = 0; u < d2; ++u)
        for (Index v = 0; v < d2; ++v) {
            const Matrix img = apply(matrix_unit(d2, u, v));
            if (img.rows() != d || img.cols() != d) throw ShapeError("choi_of: map must return d x d matrices");
            choi.block(u * d, v * d, d, d) = img;
        }
    CpMap map(d, std::move(choi), Tolerances{.herm = 1e-9});

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix x = random_ginibre(rng, d2, d2);
        const Matrix y = random_ginibre(rng, d2, d2);
        const Complex a(normal(rng), normal(rng));
        const Matrix lhs = apply(a * x + y);
        const Matrix viaChoi = map.apply(a * x + y);
        const double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
        const double additive = (lhs - (a * apply(x) + apply(y))).cwiseAbs().maxCoeff();
        const double recon = (lhs - viaChoi).cwiseAbs().maxCoeff();
        if (additive > 1e-10 * scale || recon > 1e-10 * scale)
            throw InputError("choi_of: supplied map is not linear on sampled inputs");
    }
    return map;
}

CpMap choi_from_standard_kraus(Index d, const std::vector<Matrix>& v) {
    const Index d2 = d * d;
    Matrix choi = Matrix::Zero(d2 * d, d2 * d);
    for (const Matrix& vm : v) {
        if (vm.rows() != d2 || vm.cols() != d) throw ShapeError("standard Kraus operators must be d^2 x d");
        // vec[(u,i)] = conj(V[u,i]); row-major reshape of conj(V)
        Vector vec(d2 * d);
        for (Index u = 0; u < d2; ++u)
            for (Index i = 0; i < d; ++i) vec(u * d + i) = std::conj(vm(u, i));
        choi.noalias() += vec * vec.adjoint();
    }
    return CpMap(d, std::move(choi));
}

CpMap choi_from_kraus(const KrausPacked& k) {
    const Index d = k.d, d2 = d * d;
    Matrix choi = Matrix::Zero(d2 * d, d2 * d);
    for (const Matrix& kj : k.kraus) {
        if (kj.rows() != d2 || kj.cols() != d2) throw ShapeError("packed Kraus operators must be d^2 x d^2");
        // C(u d + i, v d + j) = sum_s conj(K[u, i d + s]) K[v, j d + s]
        for (Index s = 0; s < d; ++s) {
            Vector vec(d2 * d);
            for (Index u = 0; u < d2; ++u)
                for (Index i = 0; i < d; ++i) vec(u * d + i) = std::conj(kj(u, i * d + s));
            choi.noalias() += vec * vec.adjoint();
        }
    }
    return CpMap(d, std::move(choi));
}

namespace {

// Fix the global phase so the first entry above 1e-9 in magnitude is real positive.
void fix_phase(Eigen::Ref<Vector> v) {
    for (Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-9) {
            v *= std::conj(v(i)) / mag;
            return;
        }
    }
}

// Replace the columns of q (an orthonormal basis of one eigenspace) by the
// Gram-Schmidt orthonormalisation of P e_0, P e_1, ... where P = q q^*.
Matrix canonical_basis(const Matrix& q) {
    const Index n = q.rows(), m = q.cols();
    Matrix out(n, m);
    Index found = 0;
    for (Index k = 0; k < n && found < m; ++k) {
        Vector v = q * q.row(k).adjoint();
        for (Index c = 0; c < found; ++c) v -= out.col(c) * out.col(c).dot(v);
        const double norm = v.norm();
        if (norm > 1e-6) out.col(found++) = v / norm;
    }
    if (found < m) return q;  // cannot happen for an orthonormal q; keep solver basis
    return out;
}

}  // namespace

KrausPacked kraus_from_choi(const CpMap& e, double tol_rank, const Tolerances& tol) {
    const Index d = e.d(), d2 = d * d;
    const HermitianSpectrum sp = hermitian_eigen(0.5 * (e.choi() + e.choi().adjoint()));
    const double lmax = std::max(1.0, sp.values.cwiseAbs().maxCoeff());
    if (sp.values(0) < -tol.psd * lmax) {
        std::ostringstream os;
        os << "kraus_from_choi: Choi matrix has eigenvalue " << sp.values(0) << ", map is not completely positive";
        throw NotCpError(os.str());
    }

    // descending order, dropping negligible components
    std::vector<Index> order;
    for (Index i = sp.values.size(); i-- > 0;)
        if (sp.values(i) > tol_rank * lmax) order.push_back(i);

    std::vector<double> lambda;
    std::vector<Vector> vecs;
    const double cluster_tol = 1e-9 * lmax;
    for (std::size_t a = 0; a < order.size();) {
        std::size_t b = a + 1;
        while (b < order.size() && sp.values(order[b - 1]) - sp.values(order[b]) <= cluster_tol) ++b;
        Matrix q(sp.vectors.rows(), static_cast<Index>(b - a));
        for (std::size_t c = a; c < b; ++c) q.col(static_cast<Index>(c - a)) = sp.vectors.col(order[c]);
        if (b - a > 1) q = canonical_basis(q);
        for (std::size_t c = a; c < b; ++c) {
            Vector v = q.col(static_cast<Index>(c - a));
            fix_phase(v);
            lambda.push_back(sp.values(order[c]));
            vecs.push_back(std::move(v));
        }
        a = b;
    }

    KrausPacked out;
    out.d = d;
    const Index r = static_cast<Index>(vecs.size());
    const Index l = (r + d - 1) / d;
    for (Index m = 0; m < l * d; ++m) {
        Matrix vm = Matrix::Zero(d2, d);
        if (m < r) {
            const double root = std::sqrt(lambda[static_cast<std::size_t>(m)]);
            for (Index u = 0; u < d2; ++u)
                for (Index i = 0; i < d; ++i) vm(u, i) = root * std::conj(vecs[static_cast<std::size_t>(m)](u * d + i));
        }
        out.standard.push_back(std::move(vm));
    }
    for (Index j = 0; j < l; ++j) {
        Matrix kj = Matrix::Zero(d2, d2);
        for (Index s = 0; s < d; ++s) {
            const Matrix& vm = out.standard[static_cast<std::size_t>(j * d + s)];
            for (Index x = 0; x < d; ++x) kj.col(x * d + s) = vm.col(x);
        }
        out.kraus.push_back(std::move(kj));
    }
    return out;
}

CovarianceCheck check_g_covariance(const CpMap& e, const GaugeGroup& g, double tol) {
    const Index d = e.d(), d2 = d * d;
    if (g.d() != d) throw ShapeError("check_g_covariance: group dimension differs from the map's site dimension");
    CovarianceCheck out;
    for (const Matrix& u : g.elements()) {
        const Matrix u2 = kron(u, u);
        for (Index a = 0; a < d2; ++a)
            for (Index b = 0; b < d2; ++b) {
                const Matrix x = matrix_unit(d2, a, b);
                const Matrix lhs = e.apply(u2 * x * u2.adjoint());
                const Matrix rhs = u * e.apply(x) * u.adjoint();
                out.max_violation = std::max(out.max_violation, operator_norm(lhs - rhs));
            }
    }
    out.pass = out.max_violation <= tol;
    return out;
}

double invariance_residual(const CpMap& e, const Matrix& w) {
    const Index d = e.d();
    double worst = 0.0;
    for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) {
            const Matrix c = matrix_unit(d, a, b);
            const Complex lhs = (w * e.transfer(c)).trace();
            const Complex rhs = (w * c).trace();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst;
}

InvariantState invariant_state(const CpMap& e, const Tolerances& tol) {
    const Index d = e.d(), d2 = d * d;
    // superoperator of the transfer dual on column-major vec
    Matrix t(d2, d2);
    for (Index k = 0; k < d2; ++k) {
        const Matrix img = e.transfer_dual(matrix_unit(d, k % d, k / d));
        t.col(k) = img.reshaped();
    }
    const Matrix n = t - Matrix::Identity(d2, d2);
    Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double null_tol = 1e-9 * std::max(1.0, sv(0));
    Index k = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= null_tol) ++k;
    if (k == 0) throw NumericError("invariant_state: transfer map has no fixed point (is E unital?)");

    // Singular values are sorted decreasingly, so the null spaces are the trailing columns.
    const Matrix right = svd.matrixV().rightCols(k);
    const Matrix left = svd.matrixU().rightCols(k);
    const Matrix overlap = left.adjoint() * right;
    Eigen::FullPivLU<Matrix> lu(overlap);
    if (!lu.isInvertible()) throw NumericError("invariant_state: eigenvalue 1 is not semisimple");
    const Matrix projector = right * lu.solve(left.adjoint());

    const Vector start = (Matrix::Identity(d, d) / static_cast<double>(d)).reshaped();
    Matrix w = (projector * start).reshaped(d, d);
    w = 0.5 * (w + w.adjoint());
    w /= w.trace().real();

    const double residual = invariance_residual(e, w);
    if (residual > tol.inv) {
        std::ostringstream os;
        os << "invariant_state: invariance residual " << residual << " exceeds " << tol.inv;
        throw NumericError(os.str());
    }
    const double lo = min_eigenvalue(w);
    if (lo < -tol.psd) throw NumericError("invariant_state: fixed point is not positive");
    if (lo < 0.0) {
        const HermitianSpectrum sp = hermitian_eigen(w);
        w = sp.vectors * sp.values.cwiseMax(0.0).cast<Complex>().asDiagonal() * sp.vectors.adjoint();
        w /= w.trace().real();
    }
    return {DensityMatrix(w, tol), k, residual};
}

FcsDiagnostics check_fcs_conditions(const FCState& s) {
    FcsDiagnostics out;
    out.cp_violation = std::max(0.0, -min_eigenvalue(s.map.choi()));
    out.unitality_violation = operator_norm(s.map.unit_image() - Matrix::Identity(s.d(), s.d()));
    out.invariance_violation = invariance_residual(s.map, s.W.matrix());
    return out;
}

}  // namespace fcs
