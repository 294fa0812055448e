#include <atomic>
#include <exception>
#include <sstream>

#include <omp.h>

#include "fcs/kernels.hpp"

namespace fcs {

void set_thread_count(int jobs) {
    if (jobs > 0) omp_set_num_threads(jobs);
}

namespace parallel {

Matrix dual_step(const DualOperators& ops, const Matrix& x) {
    const Index d = ops.d, d2 = d * d;
    const Index outer = x.rows() / d;
    if (x.rows() != x.cols() || outer * d != x.rows()) throw ShapeError("dual_step: bad input shape");
    Matrix out(outer * d2, outer * d2);
#pragma omp parallel for schedule(static)
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
#pragma omp parallel for schedule(static)
    for (Index p = 0; p < outer; ++p)
        for (Index q = 0; q < outer; ++q) {
            const Matrix sigma = x.block(p * d, q * d, d, d);
            out.block(p * d, q * d, d, d) = (ops.site * sigma.reshaped()).reshaped(d, d);
        }
    return out;
}

Matrix twirl(const std::vector<Matrix>& group_power, const Matrix& x) {
    const Index n = x.rows();
    for (const Matrix& u : group_power)
        if (u.rows() != n) throw ShapeError("twirl: dimension mismatch");
    constexpr Index chunk = 16;
    const Index chunks = (n + chunk - 1) / chunk;
    Matrix out = Matrix::Zero(n, n);
    // each column chunk sums the group terms in list order
#pragma omp parallel for schedule(dynamic)
    for (Index c = 0; c < chunks; ++c) {
        const Index c0 = c * chunk, w = std::min(chunk, n - c0);
        Matrix acc = Matrix::Zero(n, w);
        for (const Matrix& u : group_power) acc.noalias() += u * (x * u.adjoint().middleCols(c0, w));
        out.middleCols(c0, w) = acc;
    }
    return out / static_cast<double>(group_power.size());
}

namespace {

struct TaskResult {
    std::vector<double> entropy;
    std::vector<double> weight;
    std::uint64_t support = 0;
    std::vector<std::pair<std::uint64_t, double>> leaves;
};

}  // namespace

ChainSweep chain_sweep(const ChainLetters& letters, const ChainSweepOptions& opt) {
    const Index a = letters.alphabet();
    const Index depth = opt.depth;
    const std::size_t nd = static_cast<std::size_t>(depth);
    const Index prefix_len = std::min<Index>(depth, 2);

    ChainSweep out;
    out.block_entropy.assign(nd, 0.0);
    out.total_weight.assign(nd, 0.0);

    // depths up to prefix_len serially
    std::vector<Matrix> prefix_state;
    std::vector<std::uint64_t> prefix_index;
    {
        std::vector<Matrix> level{letters.W};
        std::vector<std::uint64_t> index{0};
        for (Index t = 1; t <= prefix_len; ++t) {
            std::vector<Matrix> next;
            std::vector<std::uint64_t> next_index;
            for (std::size_t k = 0; k < level.size(); ++k)
                for (Index c = 0; c < a; ++c) {
                    Matrix s = letters.forward(c, level[k]);
                    const double w = s.trace().real();
                    if (w <= opt.prune) continue;
                    out.block_entropy[static_cast<std::size_t>(t - 1)] += eta(std::min(w, 1.0));
                    out.total_weight[static_cast<std::size_t>(t - 1)] += w;
                    next.push_back(std::move(s));
                    next_index.push_back(index[k] * static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(c));
                }
            level = std::move(next);
            index = std::move(next_index);
        }
        prefix_state = std::move(level);
        prefix_index = std::move(index);
    }

    std::atomic<std::uint64_t> support{0};
    std::atomic<bool> overflow{false};
    auto count_leaf = [&]() {
        if (support.fetch_add(1, std::memory_order_relaxed) + 1 > opt.word_cap) overflow.store(true);
    };

    if (prefix_len == depth) {
        for (std::size_t k = 0; k < prefix_state.size(); ++k) {
            count_leaf();
            if (opt.collect) out.leaves.emplace_back(prefix_index[k], prefix_state[k].trace().real());
        }
    } else {
        std::vector<TaskResult> results(prefix_state.size());
        const std::int64_t tasks = static_cast<std::int64_t>(prefix_state.size());
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < tasks; ++k) {
            TaskResult& r = results[static_cast<std::size_t>(k)];
            r.entropy.assign(nd, 0.0);
            r.weight.assign(nd, 0.0);
            std::vector<Matrix> stack(nd + 1);
            stack[static_cast<std::size_t>(prefix_len)] = prefix_state[static_cast<std::size_t>(k)];
            // explicit recursion over (depth, letter)
            std::function<void(Index, std::uint64_t)> visit = [&](Index t, std::uint64_t idx) {
                if (overflow.load(std::memory_order_relaxed)) return;
                for (Index c = 0; c < a; ++c) {
                    Matrix& s = stack[static_cast<std::size_t>(t + 1)];
                    s = letters.forward(c, stack[static_cast<std::size_t>(t)]);
                    const double w = s.trace().real();
                    if (w <= opt.prune) continue;
                    r.entropy[static_cast<std::size_t>(t)] += eta(std::min(w, 1.0));
                    r.weight[static_cast<std::size_t>(t)] += w;
                    const std::uint64_t child = idx * static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(c);
                    if (t + 1 == depth) {
                        ++r.support;
                        count_leaf();
                        if (opt.collect) r.leaves.emplace_back(child, w);
                    } else {
                        visit(t + 1, child);
                    }
                }
            };
            visit(prefix_len, prefix_index[static_cast<std::size_t>(k)]);
        }
        for (const TaskResult& r : results) {
            for (std::size_t t = static_cast<std::size_t>(prefix_len); t < nd; ++t) {
                out.block_entropy[t] += r.entropy[t];
                out.total_weight[t] += r.weight[t];
            }
            if (opt.collect) out.leaves.insert(out.leaves.end(), r.leaves.begin(), r.leaves.end());
        }
    }
    if (overflow.load()) {
        std::ostringstream os;
        os << "chain enumeration exceeds the word cap of " << opt.word_cap;
        throw ResourceError(os.str());
    }
    out.support = support.load();
    return out;
}

void for_each_index(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(fcs_for_each_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace parallel
}  // namespace fcs
