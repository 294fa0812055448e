#pragma once

// Data-parallel kernels. Every kernel has a serial reference in fcs::serial and
// an OpenMP version in fcs::parallel with the same signature and the same
// result independent of the thread count (reductions run in a fixed order).

#include <cstdint>
#include <functional>
#include <vector>

#include "fcs/cp_map.hpp"

namespace fcs {

/// Superoperator matrices of the trace dual of E acting on column-major vec.
struct DualOperators {
    Index d = 0;
    Matrix dual;  // d^4 x d^2: vec(sigma) -> vec(E_*(sigma)) on (site, aux)
    Matrix site;  // d^2 x d^2: vec(sigma) -> vec(Tr_aux E_*(sigma))

    explicit DualOperators(const CpMap& e);
};

/// Classical alphabet of an unravelled chain: letter c = a * l + b carries the
/// site blocks L_{c,s} (d x d, s = site outcome) of the operator
/// L_{ab} = K_b (1 (x) |p_a>), so that sum_c sum_s L_{c,s}^* X L_{c,s} = E(1 (x) X).
struct ChainLetters {
    Index d = 0;
    Index labels = 0;                           // l
    std::vector<std::vector<Matrix>> blocks;    // [letter][site outcome]
    Matrix W;                                   // boundary density

    Index alphabet() const { return static_cast<Index>(blocks.size()); }
    /// sigma -> Tr_site(L sigma L^*)
    Matrix forward(Index letter, const Matrix& sigma) const;
    /// X -> L^* (1 (x) X) L
    Matrix backward(Index letter, const Matrix& x) const;
};

struct ChainSweepOptions {
    Index depth = 1;
    double prune = 1e-15;          // prefixes with weight <= prune are dropped
    std::uint64_t word_cap = 1000000;
    bool collect = false;          // keep (word index, weight) of surviving leaves
};

struct ChainSweep {
    std::vector<double> block_entropy;          // H_t for t = 1..depth, index t-1
    std::vector<double> total_weight;           // sum of weights at each depth
    std::uint64_t support = 0;                  // surviving words at full depth
    std::vector<std::pair<std::uint64_t, double>> leaves;  // lexicographic order
};

namespace serial {

/// (id (x) E_*) on the last factor of x, with x of size (outer d) x (outer d).
Matrix dual_step(const DualOperators& ops, const Matrix& x);
/// Same followed by the partial trace of the new auxiliary factor.
Matrix site_step(const DualOperators& ops, const Matrix& x);
/// (1/|G|) sum_g U_g x U_g^* with the U_g already tensor powered.
Matrix twirl(const std::vector<Matrix>& group_power, const Matrix& x);
/// Exhaustive enumeration of all alphabet^depth words, each weight computed
/// independently by the right-to-left contraction.
ChainSweep chain_sweep(const ChainLetters& letters, const ChainSweepOptions& opt);
void for_each_index(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace serial

namespace parallel {

Matrix dual_step(const DualOperators& ops, const Matrix& x);
Matrix site_step(const DualOperators& ops, const Matrix& x);
Matrix twirl(const std::vector<Matrix>& group_power, const Matrix& x);
/// Left-to-right depth-first enumeration with pruning of zero-weight prefixes,
/// parallel over fixed two-letter prefixes.
ChainSweep chain_sweep(const ChainLetters& letters, const ChainSweepOptions& opt);
void for_each_index(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace parallel

/// Decode a lexicographic word index into letters (most significant first).
std::vector<Index> decode_word(std::uint64_t index, Index alphabet, Index length);
std::uint64_t encode_word(const std::vector<Index>& letters, Index alphabet);

void set_thread_count(int jobs);

}  // namespace fcs
