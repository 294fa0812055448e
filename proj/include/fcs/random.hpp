#pragma once

#include <cstdint>
#include <random>

#include "fcs/operator_core.hpp"

namespace fcs {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. standard complex Gaussian entries.
Matrix random_ginibre(Rng& rng, Index rows, Index cols);
Matrix random_hermitian(Rng& rng, Index dim);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Matrix random_unitary(Rng& rng, Index dim);
/// Random density of the given rank (rank <= 0 means full rank).
Matrix random_density(Rng& rng, Index dim, Index rank = 0);
/// Random PSD matrix, not normalised.
Matrix random_psd(Rng& rng, Index dim);

}  // namespace fcs
