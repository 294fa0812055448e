#include "fcs/gauge_group.hpp"

#include <cmath>
#include <sstream>

namespace fcs {

namespace {

constexpr double kMatchTol = 1e-8;

bool same(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() <= kMatchTol; }

std::ptrdiff_t find(const std::vector<Matrix>& set, const Matrix& x) {
    for (std::size_t i = 0; i < set.size(); ++i)
        if (same(set[i], x)) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

void check_unitary(const Matrix& g, Index d) {
    if (g.rows() != d || g.cols() != d) throw ShapeError("gauge group element has the wrong dimension");
    const double defect = (g.adjoint() * g - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        std::ostringstream os;
        os << "gauge group element is not unitary (defect " << defect << ")";
        throw InputError(os.str());
    }
}

}  // namespace

GaugeGroup::GaugeGroup(Index d, std::vector<Matrix> elements, std::size_t max_size)
    : d_(d), elements_(std::move(elements)) {
    if (d < 1) throw ShapeError("GaugeGroup: d must be positive");
    if (elements_.empty()) throw InputError("GaugeGroup: no elements");
    if (elements_.size() > max_size) throw SizeError("GaugeGroup: more elements than the size cap");
    for (const Matrix& g : elements_) check_unitary(g, d);
    if (find(elements_, Matrix::Identity(d, d)) < 0) throw InputError("GaugeGroup: identity is missing");
    for (const Matrix& a : elements_)
        for (const Matrix& b : elements_)
            if (find(elements_, a * b) < 0) throw InputError("GaugeGroup: element list is not closed under multiplication");
}

GaugeGroup GaugeGroup::trivial(Index d) { return GaugeGroup(d, {Matrix::Identity(d, d)}); }

double GaugeGroup::character_sum(std::size_t n) const {
    double acc = 0.0;
    for (const Matrix& g : elements_) acc += std::pow(std::abs(g.trace()), 2.0 * static_cast<double>(n));
    return acc / static_cast<double>(elements_.size());
}

GaugeGroup group_closure(Index d, const std::vector<Matrix>& generators, std::size_t max_size) {
    for (const Matrix& g : generators) check_unitary(g, d);
    std::vector<Matrix> elements{Matrix::Identity(d, d)};
    // breadth-first: multiply every new element by every generator
    for (std::size_t frontier = 0; frontier < elements.size(); ++frontier) {
        for (const Matrix& g : generators) {
            Matrix next = elements[frontier] * g;
            if (find(elements, next) >= 0) continue;
            if (elements.size() == max_size) {
                std::ostringstream os;
                os << "group_closure: closure exceeds " << max_size << " elements";
                throw SizeError(os.str());
            }
            elements.push_back(std::move(next));
        }
    }
    GaugeGroup out(d, std::move(elements), max_size);
    out.generators = generators;
    return out;
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Matrix y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

}  // namespace fcs
