#include "fcs/random.hpp"

namespace fcs {

Matrix random_ginibre(Rng& rng, Index rows, Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

Matrix random_hermitian(Rng& rng, Index dim) {
    const Matrix g = random_ginibre(rng, dim, dim);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Rng& rng, Index dim) {
    const Matrix g = random_ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

Matrix random_density(Rng& rng, Index dim, Index rank) {
    if (rank <= 0 || rank > dim) rank = dim;
    const Matrix g = random_ginibre(rng, dim, rank);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

Matrix random_psd(Rng& rng, Index dim) {
    const Matrix g = random_ginibre(rng, dim, dim);
    return g * g.adjoint();
}

}  // namespace fcs
