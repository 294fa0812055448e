#include "fcs/markov_extension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcs {

namespace {

Matrix validate_projections(const std::vector<Matrix>& ps, Index d) {
    if (static_cast<Index>(ps.size()) != d) throw InputError("projection basis: expected exactly d projections");
    const double tol = 1e-9;
    Matrix sum = Matrix::Zero(d, d);
    Matrix basis(d, d);
    for (Index a = 0; a < d; ++a) {
        const Matrix& p = ps[static_cast<std::size_t>(a)];
        if (p.rows() != d || p.cols() != d) throw InputError("projection basis: projection is not d x d");
        if (hermiticity_defect(p) > tol) throw InputError("projection basis: projection is not Hermitian");
        if ((p * p - p).cwiseAbs().maxCoeff() > tol) throw InputError("projection basis: operator is not idempotent");
        if (std::abs(p.trace() - Complex(1.0)) > tol) throw InputError("projection basis: projection is not rank one");
        const HermitianSpectrum sp = hermitian_eigen(0.5 * (p + p.adjoint()));
        Vector v = sp.vectors.col(d - 1);
        Index lead = 0;
        while (lead < d && std::abs(v(lead)) <= 1e-9) ++lead;
        if (lead < d) v *= std::conj(v(lead)) / std::abs(v(lead));
        basis.col(a) = v;
        sum += p;
    }
    for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b)
            if ((ps[static_cast<std::size_t>(a)] * ps[static_cast<std::size_t>(b)]).cwiseAbs().maxCoeff() > tol)
                throw InputError("projection basis: projections are not mutually orthogonal");
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        throw InputError("projection basis: projections do not sum to the identity");
    return basis;
}

// T_I(X) applied right to left: X -> T_{I_1}(... T_{I_n}(X)).
Matrix contract(const ExtendedChain& x, const WordLabel& word, Matrix m) {
    for (std::size_t t = word.size(); t-- > 0;) m = x.letters.backward(x.letter(word[t].first, word[t].second), m);
    return m;
}

void check_word(const ExtendedChain& x, const WordLabel& word) {
    for (const auto& [a, b] : word)
        if (a < 0 || a >= x.d() || b < 0 || b >= x.labels()) throw InputError("word letter index out of range");
}

std::uint64_t checked_power(Index base, Index n, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (Index t = 0; t < n; ++t) {
        total *= static_cast<std::uint64_t>(base);
        if (total > cap) {
            std::ostringstream os;
            os << "enumeration of " << base << "^" << n << " words exceeds the word cap of " << cap;
            throw ResourceError(os.str());
        }
    }
    return total;
}

}  // namespace

ExtendedChain build_extension(const FCState& s, const std::optional<std::vector<Matrix>>& projections,
                              const Tolerances& tol) {
    const Index d = s.d();
    ExtendedChain x{s, kraus_from_choi(s.map, tol.rank, tol), Matrix::Identity(d, d), {}, {}, psd_sqrt(s.W.matrix())};
    if (projections) x.basis = validate_projections(*projections, d);
    for (Index a = 0; a < d; ++a) x.projections.push_back(x.basis.col(a) * x.basis.col(a).adjoint());

    const Index l = x.labels();
    x.letters.d = d;
    x.letters.labels = l;
    x.letters.W = s.W.matrix();
    x.letters.blocks.resize(static_cast<std::size_t>(d * l));
    for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < l; ++b) {
            const Matrix& k = x.kraus.kraus[static_cast<std::size_t>(b)];
            Matrix lab = Matrix::Zero(d * d, d);
            for (Index aux = 0; aux < d; ++aux)
                for (Index slot = 0; slot < d; ++slot) lab.col(aux) += x.basis(slot, a) * k.col(aux * d + slot);
            auto& blocks = x.letters.blocks[static_cast<std::size_t>(x.letter(a, b))];
            for (Index site = 0; site < d; ++site) blocks.push_back(lab.block(site * d, 0, d, d));
        }
    }
    return x;
}

Matrix bar_E(const ExtendedChain& x, const Matrix& a, const std::vector<Complex>& label_weights, const Matrix& b) {
    const Index d = x.d();
    if (static_cast<Index>(label_weights.size()) != x.labels()) throw ShapeError("bar_E: label weight count differs from l");
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) throw ShapeError("bar_E: operators must be d x d");
    const Matrix ab = kron(a, b);
    const SiteDims dims = SiteDims::uniform(d, 2);
    const std::size_t keep[] = {0};
    Matrix out = Matrix::Zero(d, d);
    for (Index j = 0; j < x.labels(); ++j) {
        const Complex w = label_weights[static_cast<std::size_t>(j)];
        if (w == Complex(0.0)) continue;
        const Matrix& k = x.kraus.kraus[static_cast<std::size_t>(j)];
        out += w * partial_trace(Matrix(k.adjoint() * ab * k), dims, keep);
    }
    return out;
}

double label_sum_residual(const ExtendedChain& x) {
    const Index d = x.d();
    const Index l = x.labels();
    double worst = 0.0;
    for (Index u = 0; u < d * d; ++u) {
        for (Index v = 0; v < d * d; ++v) {
            const Matrix a = matrix_unit(d, u / d, v / d);
            const Matrix b = matrix_unit(d, u % d, v % d);
            Matrix sum = Matrix::Zero(d, d);
            for (Index j = 0; j < l; ++j) {
                std::vector<Complex> e(static_cast<std::size_t>(l), Complex(0.0));
                e[static_cast<std::size_t>(j)] = 1.0;
                sum += bar_E(x, a, e, b);
            }
            worst = std::max(worst, (sum - x.base.map.apply(kron(a, b))).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Complex bar_state_value(const ExtendedChain& x, const std::vector<BarFactor>& word) {
    const Index d = x.d();
    Matrix m = Matrix::Identity(d, d);
    for (std::size_t i = word.size(); i-- > 0;) m = bar_E(x, word[i].op, word[i].labels, m);
    return (x.base.W.matrix() * m).trace();
}

double word_weight(const ExtendedChain& x, const WordLabel& word) {
    check_word(x, word);
    const Matrix m = contract(x, word, Matrix::Identity(x.d(), x.d()));
    return (x.base.W.matrix() * m).trace().real();
}

std::string format_word(const WordLabel& word, Index d, Index l) {
    const bool wide = d > 9 || l > 9;
    std::ostringstream os;
    for (std::size_t t = 0; t < word.size(); ++t) {
        if (t) os << '.';
        os << word[t].first + 1;
        if (wide) os << ':';
        os << word[t].second + 1;
    }
    return os.str();
}

WordLabel word_from_index(std::uint64_t index, Index n, Index l, Index alphabet) {
    WordLabel out;
    for (Index c : decode_word(index, alphabet, n)) out.emplace_back(c / l, c % l);
    return out;
}

WordLabel ChainDistribution::word(std::size_t i) const { return word_from_index(weights[i].first, n, l, d * l); }

double ChainDistribution::total() const {
    double s = 0.0;
    for (const auto& [idx, w] : weights) s += w;
    return s;
}

ChainDistribution chain_distribution(const ExtendedChain& x, Index n, std::uint64_t word_cap) {
    if (n < 1) throw InputError("chain_distribution: n must be positive");
    ChainSweepOptions opt;
    opt.depth = n;
    opt.word_cap = word_cap;
    opt.collect = true;
    ChainSweep sweep = parallel::chain_sweep(x.letters, opt);
    return {n, x.d(), x.labels(), std::move(sweep.leaves)};
}

ChainEntropyRate chain_entropy_rate(const ExtendedChain& x, Index n_max, std::uint64_t word_cap) {
    if (n_max < 1) throw InputError("chain_entropy_rate: n_max must be positive");
    ChainSweepOptions opt;
    opt.depth = n_max;
    opt.word_cap = word_cap;
    return {parallel::chain_sweep(x.letters, opt).block_entropy};
}

double third_term(const ChainEntropyRate& rates, Index n, Index k) {
    if (n < 1 || k < 1) throw InputError("third_term: n and k must be positive");
    if (n * k > rates.n_max()) throw InputError("third_term: block entropies do not reach n k");
    return (rates.h(n * k) - static_cast<double>(k) * rates.h(n)) / static_cast<double>(k * n);
}

double third_term(const ExtendedChain& x, Index n, Index k, std::uint64_t word_cap) {
    return third_term(chain_entropy_rate(x, n * k, word_cap), n, k);
}

Matrix conditional_gram(const ExtendedChain& x, const WordLabel& word) {
    check_word(x, word);
    const Index d = x.d();
    Matrix gram(d * d, d * d);
    for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
            const Matrix g = x.sqrt_w * contract(x, word, matrix_unit(d, a, b)) * x.sqrt_w;
            gram.block(a * d, b * d, d, d) = g;
        }
    }
    return gram;
}

Matrix conditional_density(const ExtendedChain& x, const WordLabel& word) {
    check_word(x, word);
    const Index d = x.d();
    // psi rows are (sites so far, current aux), columns the purifying copy of W.
    Matrix psi = x.sqrt_w;
    for (const auto& [a, b] : word) {
        const auto& blocks = x.letters.blocks[static_cast<std::size_t>(x.letter(a, b))];
        const Index outer = psi.rows() / d;
        Matrix next(psi.rows() * d, d);
        for (Index p = 0; p < outer; ++p)
            for (Index s = 0; s < d; ++s)
                next.middleRows((p * d + s) * d, d) = blocks[static_cast<std::size_t>(s)] * psi.middleRows(p * d, d);
        psi = std::move(next);
    }
    const Index sites = psi.rows() / d;
    Matrix phi(sites, d * d);
    for (Index p = 0; p < sites; ++p)
        for (Index aux = 0; aux < d; ++aux) phi.block(p, aux * d, 1, d) = psi.row(p * d + aux);
    return phi * phi.adjoint();
}

ConditionalEntropy conditional_state_entropy(const ExtendedChain& x, const WordLabel& word, ConditionalTarget target,
                                             const BlockStructure* blocks, const Tolerances& tol) {
    ConditionalEntropy out;
    const double logd = std::log(static_cast<double>(x.d()));
    out.bound = 4.0 * logd + std::log(static_cast<double>(x.labels()));
    if (target == ConditionalTarget::Sites) {
        const Matrix g = conditional_gram(x, word);
        out.weight = g.trace().real();
        if (out.weight <= tol.weight) throw UndefinedConditionalError("conditional state of a zero-weight word");
        out.entropy = normalized_entropy(0.5 * (g + g.adjoint()), tol.psd);
    } else {
        if (!blocks) throw InputError("conditional_state_entropy: gauge target needs a block structure");
        if (blocks->n != static_cast<Index>(word.size())) throw ShapeError("block structure length differs from the word");
        const Matrix dens = conditional_density(x, word);
        out.weight = dens.trace().real();
        if (out.weight <= tol.weight) throw UndefinedConditionalError("conditional state of a zero-weight word");
        out.entropy = restricted_density(dens, *blocks).entropy();
        out.bound += std::log(static_cast<double>(blocks->k())) + std::log(static_cast<double>(blocks->max_multiplicity()));
    }
    if (out.entropy > out.bound + 1e-8) {
        std::ostringstream os;
        os << "conditional entropy " << out.entropy << " exceeds its bound " << out.bound;
        throw NumericError(os.str());
    }
    return out;
}

ConditionalSweep conditional_sweep(const ExtendedChain& x, Index n, ConditionalTarget target,
                                   const BlockStructure* blocks, std::uint64_t word_cap, const Tolerances& tol) {
    if (n < 1) throw InputError("conditional_sweep: n must be positive");
    const Index alphabet = x.alphabet();
    const std::uint64_t count = checked_power(alphabet, n, word_cap);
    std::vector<double> weight(count, 0.0);
    std::vector<double> entropy(count, 0.0);
    std::vector<double> bound(count, 0.0);
    parallel::for_each_index(static_cast<std::int64_t>(count), [&](std::int64_t i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const WordLabel word = word_from_index(idx, n, x.labels(), alphabet);
        const double w = word_weight(x, word);
        if (w <= tol.weight) return;
        const ConditionalEntropy c = conditional_state_entropy(x, word, target, blocks, tol);
        weight[idx] = c.weight;
        entropy[idx] = c.entropy;
        bound[idx] = c.bound;
    });
    ConditionalSweep out;
    out.n = n;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (weight[i] <= 0.0) continue;
        out.weighted_entropy += weight[i] * entropy[i];
        out.total_weight += weight[i];
        out.max_entropy = std::max(out.max_entropy, entropy[i]);
        out.bound = std::max(out.bound, bound[i]);
        ++out.words;
    }
    return out;
}

EntropyLowerBound entropy_lower_bound(const ExtendedChain& x, const GaugeGroup& g, Index n, Index k, std::uint64_t word_cap,
                           Index max_dim) {
    if (n < 1 || k < 1) throw InputError("entropy_lower_bound: n and k must be positive");
    if (g.d() != x.d()) throw ShapeError("gauge group dimension differs from the state");
    EntropyLowerBound out;
    out.n = n;
    out.k = k;
    out.covariance = check_g_covariance(x.base.map, g);
    out.third_term = third_term(x, n, k, word_cap);

    const BlockStructure blocks = block_structure(g, n, max_dim);
    out.restricted_entropy = restricted_density(marginal_matrix(x.base, n, max_dim), blocks).entropy();

    const ConditionalSweep gauge = conditional_sweep(x, n, ConditionalTarget::Gauge, &blocks, word_cap);
    const ConditionalSweep sites = conditional_sweep(x, n, ConditionalTarget::Sites, nullptr, word_cap);
    out.conditional_weighted = gauge.weighted_entropy;
    out.conditional_sites = sites.weighted_entropy;
    out.conditional_max = gauge.max_entropy;
    out.conditional_bound = gauge.bound;
    out.value = out.third_term + (out.restricted_entropy - out.conditional_weighted) / static_cast<double>(n);
    return out;
}

}  // namespace fcs
