#include "fcs/gauge_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "fcs/kernels.hpp"
#include "fcs/random.hpp"

namespace fcs {

Index BlockStructure::max_multiplicity() const {
    Index m = 0;
    for (const auto& b : blocks) m = std::max(m, b.multiplicity);
    return m;
}

Index BlockStructure::sum_dim_multiplicity() const {
    Index s = 0;
    for (const auto& b : blocks) s += b.dim * b.multiplicity;
    return s;
}

Index BlockStructure::sum_dim_squared() const {
    Index s = 0;
    for (const auto& b : blocks) s += b.dim * b.dim;
    return s;
}

Index BlockStructure::ambient_dim() const {
    Index s = 1;
    for (Index k = 0; k < n; ++k) s *= d;
    return s;
}

double RestrictedState::entropy() const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = std::clamp(weights[i], 0.0, 1.0);
        if (w <= 0.0) continue;
        s += eta(w) + w * normalized_entropy(densities[i]);
    }
    return s;
}

std::vector<Matrix> group_powers(const GaugeGroup& g, Index n) {
    std::vector<Matrix> out;
    out.reserve(g.size());
    for (const Matrix& u : g.elements()) out.push_back(kron_power(u, static_cast<std::size_t>(n)));
    return out;
}

Matrix twirl(const Matrix& x, const GaugeGroup& g, Index n) {
    Index dim = 1;
    for (Index k = 0; k < n; ++k) dim *= g.d();
    if (x.rows() != dim || x.cols() != dim) throw ShapeError("twirl: matrix dimension is not d^n");
    return parallel::twirl(group_powers(g, n), x);
}

namespace {

// Orthonormal bases of the joint eigenspaces found so far.
using Cluster = Matrix;

// Split q into eigenspaces of the Hermitian compression q^* y q.
std::vector<Cluster> split(const Cluster& q, const Matrix& y, double gap) {
    const Matrix c = q.adjoint() * y * q;
    const HermitianSpectrum sp = hermitian_eigen(0.5 * (c + c.adjoint()));
    std::vector<Cluster> out;
    Index start = 0;
    for (Index i = 1; i <= sp.values.size(); ++i) {
        if (i == sp.values.size() || sp.values(i) - sp.values(i - 1) > gap) {
            out.push_back(q * sp.vectors.middleCols(start, i - start));
            start = i;
        }
    }
    return out;
}

bool compresses_to_scalar(const Cluster& q, const Matrix& y, double tol) {
    const Matrix c = q.adjoint() * y * q;
    const Complex mean = c.trace() / static_cast<double>(c.rows());
    return (c - mean * Matrix::Identity(c.rows(), c.cols())).cwiseAbs().maxCoeff() <= tol;
}

[[noreturn]] void block_failure(const std::string& what, const GaugeGroup& g, Index n) {
    std::ostringstream os;
    os << "block_structure: " << what << " (|G| = " << g.size() << ", n = " << n << ")";
    throw NumericError(os.str());
}

}  // namespace

BlockStructure block_structure(const GaugeGroup& g, Index n, Index max_dim, std::uint64_t seed) {
    if (n < 1) throw InputError("block_structure: n must be at least 1");
    double dimd = 1.0;
    for (Index k = 0; k < n; ++k) dimd *= static_cast<double>(g.d());
    if (dimd > static_cast<double>(max_dim)) {
        std::ostringstream os;
        os << "block_structure: dimension " << dimd << " above the cap " << max_dim;
        throw ResourceError(os.str());
    }
    const Index dim = static_cast<Index>(dimd);

    BlockStructure out;
    out.d = g.d();
    out.n = n;
    if (g.size() == 1) {
        out.blocks.push_back({dim, 1, Matrix::Identity(dim, dim)});
        return out;
    }

    const std::vector<Matrix> powers = group_powers(g, n);
    Rng rng(seed ^ static_cast<std::uint64_t>(n * 1000003));
    auto sample = [&] { return parallel::twirl(powers, random_hermitian(rng, dim)); };

    // 1. eigenspaces of one generic invariant element
    const Matrix x = sample();
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    const double gap = 1e-6 * scale;
    const double tol = 1e-8 * scale;
    std::vector<Cluster> clusters = split(Matrix::Identity(dim, dim), x, gap);

    // 2. refine accidental degeneracies with further samples until a sample
    //    compresses to a scalar on every cluster
    bool stable = false;
    for (int round = 0; round < 6 && !stable; ++round) {
        const Matrix y = sample();
        stable = true;
        std::vector<Cluster> next;
        for (const Cluster& q : clusters) {
            if (q.cols() == 1 || compresses_to_scalar(q, y, tol)) {
                next.push_back(q);
                continue;
            }
            stable = false;
            for (Cluster& part : split(q, y, gap)) next.push_back(std::move(part));
        }
        clusters = std::move(next);
    }
    if (!stable) block_failure("eigenspaces did not separate after refinement", g, n);

    // 3. clusters linked by an invariant element belong to the same block
    const Matrix link = parallel::twirl(powers, random_ginibre(rng, dim, dim));
    const std::size_t nc = clusters.size();
    std::vector<Index> offset(nc + 1, 0);
    for (std::size_t a = 0; a < nc; ++a) offset[a + 1] = offset[a] + clusters[a].cols();
    Matrix all(dim, offset[nc]);
    for (std::size_t a = 0; a < nc; ++a) all.middleCols(offset[a], clusters[a].cols()) = clusters[a];
    const Matrix link_c = all.adjoint() * link * all;
    std::vector<std::vector<std::size_t>> adj(nc);
    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t b = a + 1; b < nc; ++b) {
            const Index ma = clusters[a].cols(), mb = clusters[b].cols();
            const double norm = std::max(link_c.block(offset[b], offset[a], mb, ma).cwiseAbs().maxCoeff(),
                                         link_c.block(offset[a], offset[b], ma, mb).cwiseAbs().maxCoeff());
            if (norm > tol) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }

    // 4. per connected component: align cluster bases through the link element
    std::vector<bool> seen(nc, false);
    for (std::size_t root = 0; root < nc; ++root) {
        if (seen[root]) continue;
        const Index m = clusters[root].cols();
        std::vector<std::size_t> order{root};
        std::vector<Matrix> basis(nc);
        basis[root] = clusters[root];
        seen[root] = true;
        std::queue<std::size_t> pending;
        pending.push(root);
        while (!pending.empty()) {
            const std::size_t a = pending.front();
            pending.pop();
            for (std::size_t b : adj[a]) {
                if (seen[b]) continue;
                if (clusters[b].cols() != m) block_failure("linked eigenspaces have different dimensions", g, n);
                // Q_b^* Y F_a = c U; F_b = Q_b (c U) / |c| gives F_b^* Y F_a proportional to 1
                const Matrix mab = clusters[b].adjoint() * link * basis[a];
                const double c = std::sqrt((mab.adjoint() * mab).trace().real() / static_cast<double>(m));
                const Matrix unit = mab / c;
                if ((unit.adjoint() * unit - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-6)
                    block_failure("link between eigenspaces is not proportional to a unitary", g, n);
                basis[b] = clusters[b] * unit;
                seen[b] = true;
                order.push_back(b);
                pending.push(b);
            }
        }
        std::sort(order.begin(), order.end());
        AlgebraBlock blk;
        blk.dim = static_cast<Index>(order.size());
        blk.multiplicity = m;
        blk.isometry.resize(dim, blk.dim * m);
        for (std::size_t alpha = 0; alpha < order.size(); ++alpha)
            blk.isometry.middleCols(static_cast<Index>(alpha) * m, m) = basis[order[alpha]];
        out.blocks.push_back(std::move(blk));
    }

    // 5. certificates
    if (out.sum_dim_multiplicity() != dim) block_failure("sum d_i m_i differs from d^n", g, n);
    const double chi = g.character_sum(static_cast<std::size_t>(n));
    if (std::abs(chi - std::round(chi)) >= 0.5 || static_cast<Index>(std::llround(chi)) != out.sum_dim_squared()) {
        std::ostringstream os;
        os << "sum d_i^2 = " << out.sum_dim_squared() << " differs from the character formula " << chi;
        block_failure(os.str(), g, n);
    }
    const Matrix z = sample();
    const std::vector<Matrix> comps = block_components(z, out);
    Matrix rebuilt = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        const AlgebraBlock& blk = out.blocks[i];
        rebuilt += blk.isometry * kron(comps[i], Matrix::Identity(blk.multiplicity, blk.multiplicity)) *
                   blk.isometry.adjoint();
    }
    if ((rebuilt - z).cwiseAbs().maxCoeff() > tol) block_failure("invariant element not reproduced by the blocks", g, n);
    return out;
}

std::vector<Matrix> block_components(const Matrix& z, const BlockStructure& b) {
    std::vector<Matrix> out;
    for (const AlgebraBlock& blk : b.blocks) {
        if (z.rows() != blk.isometry.rows()) throw ShapeError("block_components: dimension mismatch");
        const Matrix c = blk.isometry.adjoint() * z * blk.isometry;
        const SiteDims dims({blk.dim, blk.multiplicity});
        const std::size_t keep[] = {0};
        out.push_back(partial_trace(c, dims, keep) / static_cast<double>(blk.multiplicity));
    }
    return out;
}

RestrictedState restricted_density(const Matrix& psd, const BlockStructure& b) {
    if (psd.rows() != psd.cols() || psd.rows() != b.ambient_dim())
        throw ShapeError("restricted_density: density dimension differs from the block structure");
    const double total = psd.trace().real();
    if (!(total > 0.0)) throw InvalidDensityError("restricted_density: non-positive trace");
    RestrictedState out;
    for (const AlgebraBlock& blk : b.blocks) {
        const Matrix c = blk.isometry.adjoint() * psd * blk.isometry;
        const SiteDims dims({blk.dim, blk.multiplicity});
        const std::size_t keep[] = {0};
        Matrix part = partial_trace(c, dims, keep) / total;
        part = 0.5 * (part + part.adjoint());
        const double w = part.trace().real();
        out.weights.push_back(std::max(w, 0.0));
        out.densities.push_back(w > 0.0 ? Matrix(part / w) : Matrix(Matrix::Zero(blk.dim, blk.dim)));
    }
    return out;
}

RestrictedState restricted_density(const DensityMatrix& d, const BlockStructure& b) {
    return restricted_density(d.matrix(), b);
}

MultiplicityGap multiplicity_gap(const DensityMatrix& d, const BlockStructure& b) {
    MultiplicityGap out;
    out.s_restricted = restricted_density(d, b).entropy();
    out.s_full = von_neumann_entropy(d);
    out.bound = std::log(static_cast<double>(b.k())) + std::log(static_cast<double>(b.max_multiplicity()));
    out.slack = out.s_full + out.bound - out.s_restricted;
    return out;
}

std::vector<GrowthRow> growth_table(const GaugeGroup& g, Index n_min, Index n_max, Index max_dim) {
    std::vector<GrowthRow> rows;
    for (Index n = n_min; n <= n_max; ++n) {
        const BlockStructure b = block_structure(g, n, max_dim);
        rows.push_back({n, b.k(), b.max_multiplicity(), b.sum_dim_squared(), b.ambient_dim(), b.sum_dim_multiplicity(),
                        g.character_sum(static_cast<std::size_t>(n))});
    }
    return rows;
}

RestrictedEntropyReport restricted_entropy_sequence(const FCState& s, const GaugeGroup& g, Index n_max, Index max_dim) {
    RestrictedEntropyReport out;
    out.covariance = check_g_covariance(s.map, g);
    const std::vector<Matrix> marginals = marginal_matrices(s, n_max, max_dim);
    for (Index n = 1; n <= n_max; ++n) {
        const Matrix& m = marginals[static_cast<std::size_t>(n - 1)];
        const BlockStructure b = block_structure(g, n, max_dim);
        const double ambient = von_neumann_entropy(DensityMatrix(m, Tolerances{.trace = 1e-8}));
        const double restricted = restricted_density(m, b).entropy();
        out.ambient.values.push_back(ambient);
        out.restricted.values.push_back(restricted);
        out.k.push_back(b.k());
        out.max_multiplicity.push_back(b.max_multiplicity());
        out.lower_residual.push_back(restricted - ambient);
        out.upper_slack.push_back(ambient + std::log(static_cast<double>(b.k())) +
                                  std::log(static_cast<double>(b.max_multiplicity())) - restricted);
    }
    return out;
}

}  // namespace fcs
