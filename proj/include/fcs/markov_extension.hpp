#pragma once

// Labelled extension of a finitely correlated state and the classical chain of
// Kraus trajectories it induces.
//
// Site-indexing convention used throughout this module. A word of length n is a
// sequence of letters (a_t, b_t), t = 1..n. Step t maps the auxiliary system
// carried over from step t-1 into (site t) (x) (auxiliary t) through the packed
// Kraus operator K_{b_t}, with the traced input slot of K_{b_t} fixed to the
// minimal projection P_{a_t}:
//     L_{ab} = K_b (1 (x) |p_a>),   T_{ab}(X) = L_{ab}^* (1 (x) X) L_{ab}
//                                            = Tr^(2)((1 (x) P_a) K_b^* (1 (x) X) K_b).
// The boundary density W enters as the auxiliary input of step 1 and the
// auxiliary output of step n is traced. Letter (a, b) is therefore the full
// Kraus index of one step, sum_{ab} T_{ab}(X) = E(1 (x) X), and the weights
//     mu(I) = Tr(W T_{a_1 b_1}(... T_{a_n b_n}(1)))
// define a stationary probability measure on words. The conditional functional
// of a word I restricted to sites 1..n is the state of those sites along the
// trajectory I; it has rank at most d^2.

#include <optional>
#include <string>
#include <vector>

#include "fcs/gauge_algebra.hpp"
#include "fcs/kernels.hpp"

namespace fcs {

/// Letters (a, b), zero based: a in [0, d), b in [0, l).
using WordLabel = std::vector<std::pair<Index, Index>>;

inline constexpr std::uint64_t kDefaultWordCap = 1000000;

struct ExtendedChain {
    FCState base;
    KrausPacked kraus;
    Matrix basis;                     // column a is the unit vector p_a of P_a
    std::vector<Matrix> projections;  // P_a
    ChainLetters letters;
    Matrix sqrt_w;

    Index d() const { return base.d(); }
    Index labels() const { return kraus.labels(); }
    Index alphabet() const { return letters.alphabet(); }
    Index letter(Index a, Index b) const { return a * labels() + b; }
};

/// Builds the packed Kraus family and the letter operators. Without
/// projections the computational basis is used; supplied projections must be
/// mutually orthogonal rank-one projections summing to 1 (InputError otherwise).
ExtendedChain build_extension(const FCState& s, const std::optional<std::vector<Matrix>>& projections = std::nullopt,
                              const Tolerances& tol = {});

/// Ebar(A (x) D (x) B) = sum_j D_j Tr^(2)(K_j^* (A (x) B) K_j).
Matrix bar_E(const ExtendedChain& x, const Matrix& a, const std::vector<Complex>& label_weights, const Matrix& b);

/// max over matrix units |sum_j Ebar(A (x) e_j (x) B) - E(A (x) B)|.
double label_sum_residual(const ExtendedChain& x);

struct BarFactor {
    Matrix op;                   // A_i
    std::vector<Complex> labels; // D_i as weights over e_1..e_l
};

/// phibar(A_1 (x) D_1 (x) ... (x) A_n (x) D_n) by right-to-left nesting.
Complex bar_state_value(const ExtendedChain& x, const std::vector<BarFactor>& word);

/// mu(I) by the right-to-left contraction from X = 1.
double word_weight(const ExtendedChain& x, const WordLabel& word);

/// "a1b1.a2b2..." with one-based indices; ':' separates a and b when d or l exceeds 9.
std::string format_word(const WordLabel& word, Index d, Index l);
WordLabel word_from_index(std::uint64_t index, Index n, Index l, Index alphabet);

struct ChainDistribution {
    Index n = 0;
    Index d = 0;
    Index l = 0;
    std::vector<std::pair<std::uint64_t, double>> weights;  // non-zero words, lexicographic

    WordLabel word(std::size_t i) const;
    double total() const;
};

ChainDistribution chain_distribution(const ExtendedChain& x, Index n, std::uint64_t word_cap = kDefaultWordCap);

struct ChainEntropyRate {
    std::vector<double> block_entropy;  // H_n, index n-1

    Index n_max() const { return static_cast<Index>(block_entropy.size()); }
    double h(Index n) const { return n == 0 ? 0.0 : block_entropy[static_cast<std::size_t>(n - 1)]; }
    double cesaro(Index n) const { return h(n) / static_cast<double>(n); }
    double increment(Index n) const { return h(n) - h(n - 1); }
};

ChainEntropyRate chain_entropy_rate(const ExtendedChain& x, Index n_max, std::uint64_t word_cap = kDefaultWordCap);

/// (1/kn) (H_{nk} - k H_n).
double third_term(const ExtendedChain& x, Index n, Index k, std::uint64_t word_cap = kDefaultWordCap);
double third_term(const ChainEntropyRate& rates, Index n, Index k);

enum class ConditionalTarget { Sites, Gauge };

struct ConditionalEntropy {
    double weight = 0.0;
    double entropy = 0.0;
    double bound = 0.0;  // 4 log d + log l (+ log k(n) + log max m(n) for the gauge target)
};

/// Gram matrix G[(x,c),(y,c')] of the trajectory amplitude; its non-zero
/// spectrum is that of the unnormalised conditional site density, Tr G = mu(I).
Matrix conditional_gram(const ExtendedChain& x, const WordLabel& word);

/// Unnormalised conditional density on sites 1..n (d^n x d^n).
Matrix conditional_density(const ExtendedChain& x, const WordLabel& word);

/// Entropy of the normalised conditional state restricted to the sites or to
/// the gauge-invariant algebra (blocks required for Gauge). Throws
/// UndefinedConditionalError when mu(I) <= tol.weight, NumericError if the
/// entropy exceeds its bound by more than 1e-8.
ConditionalEntropy conditional_state_entropy(const ExtendedChain& x, const WordLabel& word, ConditionalTarget target,
                                             const BlockStructure* blocks = nullptr, const Tolerances& tol = {});

struct ConditionalSweep {
    Index n = 0;
    double weighted_entropy = 0.0;  // sum_I mu(I) S(I)
    double max_entropy = 0.0;
    double bound = 0.0;
    double total_weight = 0.0;
    std::uint64_t words = 0;  // words above the weight floor
};

/// All words of length n in lexicographic order; words with weight <= tol.weight skipped.
ConditionalSweep conditional_sweep(const ExtendedChain& x, Index n, ConditionalTarget target,
                                   const BlockStructure* blocks = nullptr, std::uint64_t word_cap = kDefaultWordCap,
                                   const Tolerances& tol = {});

struct EntropyLowerBound {
    Index n = 0;
    Index k = 0;
    double third_term = 0.0;
    double restricted_entropy = 0.0;     // S(phi_[1,n]) on the gauge algebra
    double conditional_weighted = 0.0;   // sum_I mu(I) S(phihat_I | gauge algebra)
    double conditional_sites = 0.0;      // same on the full site algebra
    double conditional_max = 0.0;
    double conditional_bound = 0.0;
    double value = 0.0;                  // per site
    CovarianceCheck covariance;
};

/// Per-site value of
///   H_{nk} - k H_n + k S(phi_[1,n]) - k sum_I mu(I) S(phihat_I | A_[1,n])
/// divided by kn.
EntropyLowerBound entropy_lower_bound(const ExtendedChain& x, const GaugeGroup& g, Index n, Index k,
                           std::uint64_t word_cap = kDefaultWordCap, Index max_dim = kDefaultMaxDim);

}  // namespace fcs
