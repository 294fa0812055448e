#include <sstream>

#include "fcs/kernels.hpp"

namespace fcs {

DualOperators::DualOperators(const CpMap& e) : d(e.d()) {
    const Index d2 = d * d;
    const Matrix& c = e.choi();
    dual.resize(d2 * d2, d2);
    site = Matrix::Zero(d2, d2);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const Index col = j + i * d;  // vec index of sigma(j, i)
            for (Index u = 0; u < d2; ++u)
                for (Index v = 0; v < d2; ++v) dual(v + u * d2, col) = c(u * d + i, v * d + j);
            for (Index s = 0; s < d; ++s)
                for (Index sp = 0; sp < d; ++sp) {
                    Complex acc = 0.0;
                    for (Index x = 0; x < d; ++x) acc += c((sp * d + x) * d + i, (s * d + x) * d + j);
                    site(s + sp * d, col) = acc;
                }
        }
}

Matrix ChainLetters::forward(Index letter, const Matrix& sigma) const {
    const auto& ls = blocks[static_cast<std::size_t>(letter)];
    Matrix out = Matrix::Zero(d, d);
    for (const Matrix& l : ls) out.noalias() += l * sigma * l.adjoint();
    return out;
}

Matrix ChainLetters::backward(Index letter, const Matrix& x) const {
    const auto& ls = blocks[static_cast<std::size_t>(letter)];
    Matrix out = Matrix::Zero(d, d);
    for (const Matrix& l : ls) out.noalias() += l.adjoint() * x * l;
    return out;
}

std::vector<Index> decode_word(std::uint64_t index, Index alphabet, Index length) {
    std::vector<Index> out(static_cast<std::size_t>(length));
    for (Index t = length; t-- > 0;) {
        out[static_cast<std::size_t>(t)] = static_cast<Index>(index % static_cast<std::uint64_t>(alphabet));
        index /= static_cast<std::uint64_t>(alphabet);
    }
    return out;
}

std::uint64_t encode_word(const std::vector<Index>& letters, Index alphabet) {
    std::uint64_t idx = 0;
    for (Index c : letters) idx = idx * static_cast<std::uint64_t>(alphabet) + static_cast<std::uint64_t>(c);
    return idx;
}

namespace serial {

Matrix dual_step(const DualOperators& ops, const Matrix& x) {
    const Index d = ops.d, d2 = d * d;
    const Index outer = x.rows() / d;
    if (x.rows() != x.cols() || outer * d != x.rows()) throw ShapeError("dual_step: bad input shape");
    Matrix out(outer * d2, outer * d2);
    for (Index p = 0; p < outer; ++p)
        for (Index q = 0; q < outer; ++q) {
            const Matrix sigma = x.block(p * d, q * d, d, d);
            out.block(p * d2, q * d2, d2, d2) = (ops.dual * sigma.reshaped()).reshaped(d2, d2);
        }
    return out;
}

Matrix site_step(const DualOperators& ops, const Matrix& x) {
    const Index d = ops.d;
    const Index outer = x.rows() / d;
    if (x.rows() != x.cols() || outer * d != x.rows()) throw ShapeError("site_step: bad input shape");
    Matrix out(outer * d, outer * d);
    for (Index p = 0; p < outer; ++p)
        for (Index q = 0; q < outer; ++q) {
            const Matrix sigma = x.block(p * d, q * d, d, d);
            out.block(p * d, q * d, d, d) = (ops.site * sigma.reshaped()).reshaped(d, d);
        }
    return out;
}

Matrix twirl(const std::vector<Matrix>& group_power, const Matrix& x) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const Matrix& u : group_power) {
        if (u.rows() != x.rows()) throw ShapeError("twirl: dimension mismatch");
        out.noalias() += u * x * u.adjoint();
    }
    return out / static_cast<double>(group_power.size());
}

ChainSweep chain_sweep(const ChainLetters& letters, const ChainSweepOptions& opt) {
    const Index a = letters.alphabet();
    ChainSweep out;
    out.block_entropy.assign(static_cast<std::size_t>(opt.depth), 0.0);
    out.total_weight.assign(static_cast<std::size_t>(opt.depth), 0.0);
    const Matrix one = Matrix::Identity(letters.d, letters.d);
    for (Index t = 1; t <= opt.depth; ++t) {
        std::uint64_t count = 1;
        for (Index k = 0; k < t; ++k) count *= static_cast<std::uint64_t>(a);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            const std::vector<Index> word = decode_word(idx, a, t);
            Matrix x = one;
            for (std::size_t k = word.size(); k-- > 0;) x = letters.backward(word[k], x);
            const double w = (letters.W * x).trace().real();
            if (w <= opt.prune) continue;
            out.block_entropy[static_cast<std::size_t>(t - 1)] += eta(std::min(w, 1.0));
            out.total_weight[static_cast<std::size_t>(t - 1)] += w;
            if (t == opt.depth) {
                if (++out.support > opt.word_cap) {
                    std::ostringstream os;
                    os << "chain enumeration exceeds the word cap of " << opt.word_cap;
                    throw ResourceError(os.str());
                }
                if (opt.collect) out.leaves.emplace_back(idx, w);
            }
        }
    }
    return out;
}

void for_each_index(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
}

}  // namespace serial
}  // namespace fcs
