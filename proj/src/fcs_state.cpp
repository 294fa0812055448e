#include "fcs/fcs_state.hpp"

#include <cmath>
#include <sstream>

#include "fcs/kernels.hpp"

namespace fcs {

namespace {

void check_volume(Index d, Index n, Index max_dim) {
    if (n < 1) throw InputError("volume must be at least 1");
    double dim = 1.0;
    for (Index k = 0; k < n; ++k) dim *= static_cast<double>(d);
    if (dim > static_cast<double>(max_dim)) {
        std::ostringstream os;
        os << "volume " << n << " gives dimension " << dim << " above the cap " << max_dim;
        throw ResourceError(os.str());
    }
}

}  // namespace

std::vector<Matrix> marginal_matrices(const FCState& s, Index n_max, Index max_dim) {
    check_volume(s.d(), n_max, max_dim);
    const DualOperators ops(s.map);
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n_max));
    Matrix with_aux = s.W.matrix();  // sites (x) aux, starting with aux only
    for (Index n = 1; n <= n_max; ++n) {
        Matrix d = parallel::site_step(ops, with_aux);
        out.push_back(0.5 * (d + d.adjoint()));
        if (n < n_max) with_aux = parallel::dual_step(ops, with_aux);
    }
    return out;
}

Matrix marginal_matrix(const FCState& s, Index n, Index max_dim) {
    return marginal_matrices(s, n, max_dim).back();
}

DensityMatrix marginal_density(const FCState& s, Index n, Index max_dim) {
    return DensityMatrix(marginal_matrix(s, n, max_dim), Tolerances{.trace = 1e-8});
}

EntropySequence entropy_sequence(const FCState& s, Index n_max, Index max_dim) {
    const std::vector<Matrix> marginals = marginal_matrices(s, n_max, max_dim);
    EntropySequence seq;
    for (const Matrix& m : marginals) seq.values.push_back(von_neumann_entropy(DensityMatrix(m, Tolerances{.trace = 1e-8})));
    return seq;
}

MeanEntropyEstimate mean_entropy_estimate(const EntropySequence& seq) {
    const Index n = seq.n_max();
    if (n < 2) throw InputError("mean_entropy_estimate: need at least two volumes");
    MeanEntropyEstimate out;
    out.cesaro = seq.at(n) / static_cast<double>(n);
    out.increment = seq.at(n) - seq.at(n - 1);
    out.spread = std::abs(out.cesaro - out.increment);
    return out;
}

double check_stationarity(const FCState& s, Index n, Index max_dim) {
    const std::vector<Matrix> m = marginal_matrices(s, n + 1, max_dim);
    const Matrix& small = m[static_cast<std::size_t>(n - 1)];
    const Matrix& big = m[static_cast<std::size_t>(n)];
    const SiteDims dims = SiteDims::uniform(s.d(), static_cast<std::size_t>(n + 1));
    const double left = trace_norm_hermitian(trace_out(big, dims, 0) - small);
    const double right = trace_norm_hermitian(trace_out(big, dims, static_cast<std::size_t>(n)) - small);
    return std::max(left, right);
}

Complex evaluate_word(const FCState& s, const std::vector<Matrix>& ops) {
    const Index d = s.d();
    Matrix x = Matrix::Identity(d, d);
    for (std::size_t k = ops.size(); k-- > 0;) x = s.map.apply(kron(ops[k], x));
    return (s.W.matrix() * x).trace();
}

}  // namespace fcs
