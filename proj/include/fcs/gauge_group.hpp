#pragma once

#include <cstddef>
#include <vector>

#include "fcs/operator_core.hpp"

namespace fcs {

/// Finite group of d x d unitaries acting on each site by conjugation.
class GaugeGroup {
public:
    /// Checks unitarity (1e-10), presence of the identity and closure (1e-8).
    GaugeGroup(Index d, std::vector<Matrix> elements, std::size_t max_size = 256);

    static GaugeGroup trivial(Index d);

    Index d() const { return d_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<Matrix>& elements() const { return elements_; }
    const Matrix& operator[](std::size_t i) const { return elements_[i]; }

    /// (1/|G|) sum_g |Tr g|^{2n}: the dimension of the commutant of g^{\otimes n}.
    double character_sum(std::size_t n) const;

    std::vector<Matrix> generators;  // as supplied to group_closure, for serialisation

private:
    Index d_;
    std::vector<Matrix> elements_;
};

/// Smallest set closed under multiplication containing the generators and the
/// identity. Elements are matched up to 1e-8 in max-entry distance.
GaugeGroup group_closure(Index d, const std::vector<Matrix>& generators, std::size_t max_size = 256);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

}  // namespace fcs
