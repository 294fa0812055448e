#pragma once

#include <vector>

#include "fcs/cp_map.hpp"

namespace fcs {

/// Default cap on the marginal dimension d^n.
inline constexpr Index kDefaultMaxDim = 4096;

/// Entropies S_n for n = 1..n_max (nats).
struct EntropySequence {
    std::vector<double> values;  // values[n-1] = S_n

    Index n_max() const { return static_cast<Index>(values.size()); }
    double at(Index n) const { return values[static_cast<std::size_t>(n - 1)]; }
    /// S_n - S_{n-1}, with S_0 = 0.
    double increment(Index n) const { return n == 1 ? at(1) : at(n) - at(n - 1); }
};

struct MeanEntropyEstimate {
    double cesaro = 0.0;     // S_{n_max} / n_max
    double increment = 0.0;  // S_{n_max} - S_{n_max - 1}, the headline estimate
    double spread = 0.0;     // |cesaro - increment|
};

/// Density of the n-site marginal of the finitely correlated state.
///
/// Built in the Schroedinger picture: W sits on the auxiliary factor, the trace
/// dual of E is applied site by site (each step appends one site in front of the
/// auxiliary factor) and the auxiliary factor is traced at the end. Site 1 is the
/// outermost tensor factor. Throws ResourceError when d^n > max_dim.
DensityMatrix marginal_density(const FCState& s, Index n, Index max_dim = kDefaultMaxDim);

/// Same contraction without forming a DensityMatrix (no validation).
Matrix marginal_matrix(const FCState& s, Index n, Index max_dim = kDefaultMaxDim);

/// Marginals for n = 1..n_max sharing the contraction prefix.
std::vector<Matrix> marginal_matrices(const FCState& s, Index n_max, Index max_dim = kDefaultMaxDim);

EntropySequence entropy_sequence(const FCState& s, Index n_max, Index max_dim = kDefaultMaxDim);

/// Requires n_max >= 2 (InputError otherwise).
MeanEntropyEstimate mean_entropy_estimate(const EntropySequence& seq);

/// Max trace-norm distance between D_n and both one-site reductions of D_{n+1}.
double check_stationarity(const FCState& s, Index n, Index max_dim = kDefaultMaxDim);

/// phi(A_1 (x) ... (x) A_n) by the nested Heisenberg formula rho(E(A_1 (x) E(...))).
Complex evaluate_word(const FCState& s, const std::vector<Matrix>& ops);

}  // namespace fcs
