#include "fcs/models.hpp"

namespace fcs::models {

CpMap product_map(const Matrix& omega) {
    const Index d = omega.rows();
    const HermitianSpectrum sp = hermitian_eigen(omega);
    std::vector<Matrix> v;
    for (Index k = 0; k < d; ++k) {
        const double lambda = sp.values(k);
        if (lambda <= 0.0) continue;
        // V_k |c> = sqrt(lambda_k) |psi_k> (x) |c>
        v.push_back(std::sqrt(lambda) * kron(sp.vectors.col(k), Matrix::Identity(d, d)));
    }
    return choi_from_standard_kraus(d, v);
}

FCState product_state(const Matrix& omega) {
    return {product_map(omega), DensityMatrix(omega)};
}

CpMap classical_chain_map(const Eigen::MatrixXd& p) {
    const Index d = p.rows();
    std::vector<Matrix> v;
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            if (p(i, j) <= 0.0) continue;
            Matrix vm = Matrix::Zero(d * d, d);
            vm(i * d + j, i) = std::sqrt(p(i, j));
            v.push_back(std::move(vm));
        }
    return choi_from_standard_kraus(d, v);
}

FCState classical_chain(const Eigen::MatrixXd& p) { return with_invariant_state(classical_chain_map(p)); }

CpMap random_unital_map(Rng& rng, Index d, Index rank) {
    std::vector<Matrix> v;
    Matrix s = Matrix::Zero(d, d);
    for (Index k = 0; k < rank; ++k) {
        v.push_back(random_ginibre(rng, d * d, d));
        s += v.back().adjoint() * v.back();
    }
    // V -> V S^{-1/2} makes sum V^* V = 1
    const HermitianSpectrum sp = hermitian_eigen(s);
    const Matrix inv_root =
        sp.vectors * sp.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * sp.vectors.adjoint();
    for (Matrix& vm : v) vm = vm * inv_root;
    return choi_from_standard_kraus(d, v);
}

CpMap random_covariant_map(Rng& rng, const GaugeGroup& g, Index rank) {
    const CpMap base = random_unital_map(rng, g.d(), rank);
    const auto twirled = [&](const Matrix& x) {
        Matrix acc = Matrix::Zero(g.d(), g.d());
        for (const Matrix& u : g.elements()) {
            const Matrix u2 = kron(u, u);
            acc += u.adjoint() * base.apply(u2 * x * u2.adjoint()) * u;
        }
        return Matrix(acc / static_cast<double>(g.size()));
    };
    const CpMap raw = choi_of(g.d(), twirled);
    return CpMap(g.d(), 0.5 * (raw.choi() + raw.choi().adjoint()));
}

FCState with_invariant_state(CpMap e) {
    InvariantState inv = invariant_state(e);
    return {std::move(e), std::move(inv.W)};
}

}  // namespace fcs::models
