#pragma once

#include <cstdint>
#include <vector>

#include "fcs/fcs_state.hpp"
#include "fcs/gauge_group.hpp"

namespace fcs {

/// One simple summand M_{d_i} of the fixed-point algebra, embedded with
/// multiplicity m_i: every invariant operator Z satisfies
///     isometry^* Z isometry = a (x) 1_{m_i},  a in M_{d_i},
/// with the isometry's column index alpha * m_i + r.
struct AlgebraBlock {
    Index dim = 0;           // d_i
    Index multiplicity = 0;  // m_i
    Matrix isometry;         // d^n x (d_i m_i)
};

/// Decomposition of (M_d^{(x) n})^G into blocks.
struct BlockStructure {
    Index d = 0;
    Index n = 0;
    std::vector<AlgebraBlock> blocks;

    Index k() const { return static_cast<Index>(blocks.size()); }
    Index max_multiplicity() const;
    Index sum_dim_multiplicity() const;  // sum d_i m_i
    Index sum_dim_squared() const;       // sum d_i^2
    Index ambient_dim() const;           // d^n
};

/// Block-diagonal restriction of a state to the fixed-point algebra.
struct RestrictedState {
    std::vector<double> weights;   // weight_i
    std::vector<Matrix> densities; // normalised d_i x d_i densities (zero when weight_i = 0)

    /// sum eta(w_i) + sum w_i S(rho_i)
    double entropy() const;
};

struct MultiplicityGap {
    double s_restricted = 0.0;
    double s_full = 0.0;
    double bound = 0.0;  // log k + log max m_i
    double slack = 0.0;  // s_full + bound - s_restricted
};

struct GrowthRow {
    Index n = 0;
    Index k = 0;
    Index max_multiplicity = 0;
    Index sum_dim_squared = 0;
    Index ambient_dim = 0;
    Index sum_dim_multiplicity = 0;
    double character_sum = 0.0;
};

struct RestrictedEntropyReport {
    EntropySequence restricted;  // S_n(phi), phi the restriction to the gauge algebra
    EntropySequence ambient;     // S_n(phi~)
    std::vector<Index> k;
    std::vector<Index> max_multiplicity;
    CovarianceCheck covariance;
    /// S_n(phi) - S_n(phi~): non-negative in all observed cases, reported only.
    std::vector<double> lower_residual;
    /// S_n(phi~) + log k(n) + log max m(n) - S_n(phi) >= 0.
    std::vector<double> upper_slack;
};

/// (1/|G|) sum_g g^{(x)n} X g^{(x)n *}.
Matrix twirl(const Matrix& x, const GaugeGroup& g, Index n);

/// Tensor powers g^{(x)n} of every group element.
std::vector<Matrix> group_powers(const GaugeGroup& g, Index n);

/// Numerical block decomposition of the fixed-point algebra, certified by the
/// dimension identities and a reconstruction test. Deterministic for a seed.
BlockStructure block_structure(const GaugeGroup& g, Index n, Index max_dim = kDefaultMaxDim,
                               std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Restriction of an (unnormalised) PSD matrix; weights are normalised by its trace.
RestrictedState restricted_density(const Matrix& psd, const BlockStructure& b);
RestrictedState restricted_density(const DensityMatrix& d, const BlockStructure& b);

/// Conditional expectation onto the fixed algebra in block coordinates:
/// a_i = Tr_{m_i}(U_i^* Z U_i) / m_i.
std::vector<Matrix> block_components(const Matrix& z, const BlockStructure& b);

MultiplicityGap multiplicity_gap(const DensityMatrix& d, const BlockStructure& b);

std::vector<GrowthRow> growth_table(const GaugeGroup& g, Index n_min, Index n_max, Index max_dim = kDefaultMaxDim);

RestrictedEntropyReport restricted_entropy_sequence(const FCState& s, const GaugeGroup& g, Index n_max,
                                                    Index max_dim = kDefaultMaxDim);

}  // namespace fcs
