#pragma once

#include "fcs/cp_map.hpp"
#include "fcs/random.hpp"

namespace fcs::models {

/// E(A (x) B) = omega(A) B: the product state omega^{(x) N}.
CpMap product_map(const Matrix& omega);
FCState product_state(const Matrix& omega);

/// Embedded classical chain E(A (x) B) = sum_{ij} p_ij A_ii B_jj |i><i| with
/// stationary distribution as boundary state.
CpMap classical_chain_map(const Eigen::MatrixXd& p);
FCState classical_chain(const Eigen::MatrixXd& p);

/// Random unital CP map with `rank` standard Kraus operators.
CpMap random_unital_map(Rng& rng, Index d, Index rank);

/// Group average g^* E(g^{(x)2} X g^{(x)2 *}) g of a random unital map; covariant by construction.
CpMap random_covariant_map(Rng& rng, const GaugeGroup& g, Index rank);

/// FCState with the boundary state from invariant_state.
FCState with_invariant_state(CpMap e);

}  // namespace fcs::models
