#include "doctest.h"

#include "fcs/fcs_state.hpp"
#include "fcs/models.hpp"
#include "oracles.hpp"

using namespace fcs;

namespace {

Eigen::Matrix2d chain_p() {
    Eigen::Matrix2d p;
    p << 0.9, 0.1, 0.2, 0.8;
    return p;
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// rho(E(A_1 (x) E(A_2 (x) ... E(A_n (x) 1)))) written out with CpMap::apply only.
Complex nested(const FCState& s, const std::vector<Matrix>& ops) {
    Matrix inner = Matrix::Identity(s.d(), s.d());
    for (std::size_t i = ops.size(); i-- > 0;) inner = s.map.apply(oracle::kron(ops[i], inner));
    return (s.W.matrix() * inner).trace();
}

FCState random_fcs(Rng& rng, Index d, Index rank) { return models::with_invariant_state(models::random_unital_map(rng, d, rank)); }

}  // namespace

TEST_CASE("product marginal factorises") {
    const FCState s = models::product_state(diag2(0.75, 0.25));
    const Matrix m = marginal_matrix(s, 2);
    CHECK((m - oracle::kron(diag2(0.75, 0.25), diag2(0.75, 0.25))).norm() < 1e-12);
}

TEST_CASE("classical chain two-site marginal is diag(pi_i p_ij)") {
    const FCState s = models::classical_chain(chain_p());
    const Eigen::Vector2d pi = oracle::stationary2(chain_p());
    const Matrix m = marginal_matrix(s, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(m(i * 2 + j, i * 2 + j) - pi(i) * chain_p()(i, j)) < 1e-9);
    CHECK(std::abs(m.trace() - Complex(1.0)) < 1e-10);
    CHECK((m - Matrix(m.diagonal().asDiagonal())).norm() < 1e-12);
}

TEST_CASE("marginals agree with the nested formula on all matrix units") {
    Rng rng(31);
    const FCState s = random_fcs(rng, 2, 3);
    for (Index n = 1; n <= 3; ++n) {
        const Matrix m = marginal_matrix(s, n);
        CHECK(std::abs(m.trace() - Complex(1.0)) < 1e-10);
        const Index units = 4;
        Index count = 1;
        for (Index t = 0; t < n; ++t) count *= units;
        double worst = 0.0;
        for (Index w = 0; w < count; ++w) {
            std::vector<Matrix> ops;
            Matrix full = Matrix::Ones(1, 1);
            Index r = w;
            for (Index t = 0; t < n; ++t) {
                const Index u = r % units;
                r /= units;
                ops.push_back(matrix_unit(2, u / 2, u % 2));
            }
            for (const Matrix& op : ops) full = oracle::kron(full, op);
            worst = std::max(worst, std::abs((m * full).trace() - nested(s, ops)));
            worst = std::max(worst, std::abs(evaluate_word(s, ops) - nested(s, ops)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("product entropies are additive") {
    const FCState s = models::product_state(diag2(0.75, 0.25));
    const double h = oracle::shannon({0.75, 0.25});
    const EntropySequence seq = entropy_sequence(s, 5);
    for (Index n = 1; n <= 5; ++n) CHECK(std::abs(seq.at(n) - static_cast<double>(n) * h) < 1e-9);
    const MeanEntropyEstimate m = mean_entropy_estimate(seq);
    CHECK(std::abs(m.increment - h) < 1e-9);
    CHECK(m.spread < 1e-10);
}

TEST_CASE("classical chain entropies equal Shannon block entropies") {
    const FCState s = models::classical_chain(chain_p());
    const Eigen::Vector2d pi = oracle::stationary2(chain_p());
    const EntropySequence seq = entropy_sequence(s, 8);
    for (int n = 1; n <= 8; ++n) CHECK(std::abs(seq.at(n) - oracle::shannon(oracle::path_probabilities(chain_p(), pi, n))) < 1e-9);
    CHECK(std::abs(mean_entropy_estimate(seq).increment - oracle::markov_rate(chain_p(), pi)) < 1e-6);
}

TEST_CASE("pure and maximally mixed product states") {
    const EntropySequence pure = entropy_sequence(models::product_state(diag2(1.0, 0.0)), 4);
    for (double v : pure.values) CHECK(std::abs(v) < 1e-10);
    const EntropySequence mixed = entropy_sequence(models::product_state(diag2(0.5, 0.5)), 4);
    CHECK(std::abs(mean_entropy_estimate(mixed).increment - std::log(2.0)) < 1e-10);
}

TEST_CASE("mean entropy estimate needs two volumes") {
    EntropySequence seq;
    seq.values = {0.3};
    CHECK_THROWS_AS(mean_entropy_estimate(seq), InputError);
}

TEST_CASE("stationarity of valid and broken states") {
    Rng rng(32);
    for (int t = 0; t < 5; ++t) {
        const FCState s = random_fcs(rng, 2, 2 + t);
        for (Index n = 1; n <= 4; ++n) CHECK(check_stationarity(s, n) < 1e-9);
    }
    const FCState broken{models::classical_chain_map(chain_p()), DensityMatrix::maximally_mixed(2)};
    CHECK(check_stationarity(broken, 2) >= 1e-3);
    CHECK(check_stationarity(models::product_state(diag2(0.75, 0.25)), 3) < 1e-14);
}

TEST_CASE("entropy sequences are bounded with non-increasing increments") {
    Rng rng(33);
    for (int t = 0; t < 8; ++t) {
        const Index d = 2;
        const FCState s = random_fcs(rng, d, 1 + t % 6);
        const EntropySequence seq = entropy_sequence(s, 6);
        for (Index n = 1; n <= 6; ++n) {
            CHECK(seq.at(n) >= -1e-12);
            CHECK(seq.at(n) / static_cast<double>(n) <= std::log(static_cast<double>(d)) + 1e-12);
            if (n >= 2) CHECK(seq.increment(n) <= seq.increment(n - 1) + 1e-9);
        }
    }
}

TEST_CASE("volume cap") {
    const FCState s = models::product_state(diag2(0.75, 0.25));
    CHECK_THROWS_AS(marginal_density(s, 13), ResourceError);
    CHECK_THROWS_AS(marginal_density(s, 5, 16), ResourceError);
    CHECK_NOTHROW(marginal_density(s, 4, 16));
}
