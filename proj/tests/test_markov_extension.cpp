#include "doctest.h"

#include <algorithm>
#include <map>

#include "fcs/markov_extension.hpp"
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

GaugeGroup z2() { return group_closure(2, {pauli::z()}); }

Complex nested(const FCState& s, const std::vector<Matrix>& ops) {
    Matrix inner = Matrix::Identity(s.d(), s.d());
    for (std::size_t i = ops.size(); i-- > 0;) inner = s.map.apply(oracle::kron(ops[i], inner));
    return (s.W.matrix() * inner).trace();
}

std::vector<double> all_weights(const ExtendedChain& x, Index n) {
    std::uint64_t count = 1;
    for (Index t = 0; t < n; ++t) count *= static_cast<std::uint64_t>(x.alphabet());
    std::vector<double> out;
    for (std::uint64_t w = 0; w < count; ++w) out.push_back(word_weight(x, word_from_index(w, n, x.labels(), x.alphabet())));
    return out;
}

std::vector<double> sorted_positive(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return x <= 1e-14; }), v.end());
    std::sort(v.begin(), v.end());
    return v;
}

FCState random_fcs(Rng& rng, Index rank) { return models::with_invariant_state(models::random_unital_map(rng, 2, rank)); }

}  // namespace

TEST_CASE("extension of a rank-one product state has a single label") {
    Matrix omega = Matrix::Constant(2, 2, Complex(0.5));  // |+><+|
    const ExtendedChain x = build_extension(models::product_state(omega));
    CHECK(x.labels() <= 2);
    CHECK(x.labels() == 1);
    CHECK(label_sum_residual(x) < 1e-10);
}

TEST_CASE("label sums reproduce the map") {
    Rng rng(51);
    for (int t = 0; t < 6; ++t) {
        const ExtendedChain x = build_extension(random_fcs(rng, 1 + t));
        CHECK(label_sum_residual(x) < 1e-9);
        CHECK(x.labels() <= 4);
    }
}

TEST_CASE("projection basis validation") {
    const FCState s = models::product_state(diag2(0.75, 0.25));
    Matrix plus = Matrix::Constant(2, 2, Complex(0.5));
    CHECK_THROWS_AS(build_extension(s, std::vector<Matrix>{diag2(1, 0), plus}), InputError);
    CHECK_THROWS_AS(build_extension(s, std::vector<Matrix>{diag2(1, 0)}), InputError);
    CHECK_THROWS_AS(build_extension(s, std::vector<Matrix>{diag2(1, 1), diag2(0, 0)}), InputError);
    Matrix minus = -plus;
    minus(0, 0) = minus(1, 1) = 0.5;
    const ExtendedChain x = build_extension(s, std::vector<Matrix>{plus, minus});
    CHECK(std::abs(chain_distribution(x, 4).total() - 1.0) < 1e-9);
    CHECK((x.projections[0] - plus).norm() < 1e-12);
}

TEST_CASE("bar state normalisation and consistency with the original state") {
    Rng rng(52);
    const FCState s = random_fcs(rng, 5);
    const ExtendedChain x = build_extension(s);
    const std::vector<Complex> full(static_cast<std::size_t>(x.labels()), Complex(1.0));
    std::vector<BarFactor> ones(3, BarFactor{Matrix::Identity(2, 2), full});
    CHECK(std::abs(bar_state_value(x, ones) - Complex(1.0)) < 1e-10);
    double worst = 0.0;
    for (Index len = 1; len <= 3; ++len) {
        Index count = 1;
        for (Index t = 0; t < len; ++t) count *= 4;
        for (Index w = 0; w < count; ++w) {
            std::vector<Matrix> ops;
            std::vector<BarFactor> word;
            Index r = w;
            for (Index t = 0; t < len; ++t) {
                ops.push_back(matrix_unit(2, (r % 4) / 2, r % 2));
                r /= 4;
                word.push_back({ops.back(), full});
            }
            worst = std::max(worst, std::abs(bar_state_value(x, word) - nested(s, ops)));
        }
    }
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(bar_E(x, Matrix::Identity(3, 3), full, Matrix::Identity(2, 2)), ShapeError);
    CHECK_THROWS_AS(bar_E(x, Matrix::Identity(2, 2), {1.0, 2.0, 3.0, 4.0, 5.0}, Matrix::Identity(2, 2)), ShapeError);
}

TEST_CASE("bar state of the classical chain on basis projections with matched labels") {
    const FCState s = models::classical_chain(chain_p());
    const ExtendedChain x = build_extension(s);
    REQUIRE(x.labels() == 2);
    const Eigen::Vector2d pi = oracle::stationary2(chain_p());
    // Standard Kraus operators sqrt(p_kl)|k l><k| are ordered by decreasing p_kl and
    // packed two per label, so label j carries the transitions of rank 2j and 2j+1.
    std::vector<std::pair<double, std::pair<int, int>>> ranked;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) ranked.push_back({chain_p()(k, l), {k, l}});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::map<std::pair<int, int>, int> label;
    for (int r = 0; r < 4; ++r) label[ranked[static_cast<std::size_t>(r)].second] = r / 2;

    for (int n = 1; n <= 3; ++n) {
        const int words = 1 << (2 * n);
        for (int w = 0; w < words; ++w) {
            std::vector<int> states, labels;
            std::vector<BarFactor> word;
            for (int t = 0; t < n; ++t) {
                const int i = (w >> (2 * t)) & 1, j = (w >> (2 * t + 1)) & 1;
                states.push_back(i);
                labels.push_back(j);
                std::vector<Complex> e(2, 0.0);
                e[static_cast<std::size_t>(j)] = 1.0;
                word.push_back({diag2(i == 0, i == 1), e});
            }
            double expected = pi(states[0]);
            for (int t = 0; t + 1 < n; ++t) {
                const auto tr = std::make_pair(states[static_cast<std::size_t>(t)], states[static_cast<std::size_t>(t + 1)]);
                expected *= label[tr] == labels[static_cast<std::size_t>(t)] ? chain_p()(tr.first, tr.second) : 0.0;
            }
            double last = 0.0;
            for (int l = 0; l < 2; ++l)
                if (label[{states.back(), l}] == labels.back()) last += chain_p()(states.back(), l);
            expected *= last;
            CHECK(std::abs(bar_state_value(x, word) - Complex(expected)) < 1e-12);
        }
    }
}

TEST_CASE("word weights form a probability distribution") {
    Rng rng(53);
    for (int t = 0; t < 4; ++t) {
        const ExtendedChain x = build_extension(random_fcs(rng, 2 + t));
        for (Index n = 1; n <= 4; ++n) {
            const std::vector<double> w = all_weights(x, n);
            double total = 0.0;
            for (double v : w) {
                CHECK(v >= -1e-12);
                total += v;
            }
            CHECK(std::abs(total - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("product state word weights are product measures") {
    const ExtendedChain x = build_extension(models::product_state(diag2(0.75, 0.25)));
    REQUIRE(x.labels() == 1);
    for (Index n = 1; n <= 4; ++n) {
        for (std::uint64_t w = 0; w < (1u << n); ++w) {
            const WordLabel word = word_from_index(w, n, 1, 2);
            double expected = 1.0;
            for (const auto& [a, b] : word) expected *= a == 0 ? 0.75 : 0.25;
            CHECK(std::abs(word_weight(x, word) - expected) < 1e-12);
        }
    }
    // with the smaller weight first the labelling follows the Kraus order, the measure is the same
    const ExtendedChain y = build_extension(models::product_state(diag2(0.3, 0.7)));
    std::vector<double> expected;
    for (std::uint64_t w = 0; w < 8; ++w) expected.push_back((w & 1 ? 0.7 : 0.3) * (w & 2 ? 0.7 : 0.3) * (w & 4 ? 0.7 : 0.3));
    std::sort(expected.begin(), expected.end());
    const std::vector<double> got = sorted_positive(all_weights(y, 3));
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-12);
}

TEST_CASE("classical chain word weights are path probabilities") {
    const ExtendedChain x = build_extension(models::classical_chain(chain_p()));
    const Eigen::Vector2d pi = oracle::stationary2(chain_p());
    for (int n = 1; n <= 5; ++n) {
        // each letter is one transition, so n letters cover n + 1 states
        std::vector<double> paths = sorted_positive(oracle::path_probabilities(chain_p(), pi, n + 1));
        const std::vector<double> got = sorted_positive(all_weights(x, n));
        REQUIRE(got.size() == paths.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - paths[i]) < 1e-12);
    }
}

TEST_CASE("word weight index checks") {
    const ExtendedChain x = build_extension(models::product_state(diag2(0.75, 0.25)));
    CHECK_THROWS_AS(word_weight(x, {{2, 0}}), InputError);
    CHECK_THROWS_AS(word_weight(x, {{0, 1}}), InputError);
    CHECK(format_word({{0, 0}, {1, 0}}, 2, 1) == "11.21");
    CHECK(format_word({{0, 10}}, 2, 11) == "1:11");
}

TEST_CASE("chain distribution marginals are consistent") {
    Rng rng(54);
    for (int t = 0; t < 3; ++t) {
        const ExtendedChain x = build_extension(random_fcs(rng, 3 + t));
        for (Index n = 1; n <= 4; ++n) {
            const ChainDistribution shorter = chain_distribution(x, n);
            const ChainDistribution longer = chain_distribution(x, n + 1);
            CHECK(std::abs(shorter.total() - 1.0) < 1e-9);
            std::map<std::uint64_t, double> summed;
            for (const auto& [idx, w] : longer.weights) summed[idx / static_cast<std::uint64_t>(x.alphabet())] += w;
            std::map<std::uint64_t, double> direct(shorter.weights.begin(), shorter.weights.end());
            for (const auto& [idx, w] : summed) CHECK(std::abs(w - (direct.count(idx) ? direct[idx] : 0.0)) < 1e-9);
            for (const auto& [idx, w] : direct) CHECK(std::abs(w - (summed.count(idx) ? summed[idx] : 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("chain entropy rates") {
    const ExtendedChain det = build_extension(models::product_state(diag2(1.0, 0.0)));
    for (double h : chain_entropy_rate(det, 6).block_entropy) CHECK(std::abs(h) < 1e-12);

    const ExtendedChain uniform = build_extension(models::product_state(diag2(0.5, 0.5)));
    const ChainEntropyRate u = chain_entropy_rate(uniform, 6);
    for (Index n = 1; n <= 6; ++n)
        CHECK(std::abs(u.h(n) - static_cast<double>(n) * std::log(static_cast<double>(uniform.alphabet()))) < 1e-12);

    const ExtendedChain chain = build_extension(models::classical_chain(chain_p()));
    const ChainEntropyRate c = chain_entropy_rate(chain, 10);
    const double rate = oracle::markov_rate(chain_p(), oracle::stationary2(chain_p()));
    CHECK(std::abs(c.increment(10) - rate) < 1e-4);
    for (Index n = 1; n <= 10; ++n) {
        const double h = oracle::shannon(oracle::path_probabilities(chain_p(), oracle::stationary2(chain_p()), static_cast<int>(n + 1)));
        CHECK(std::abs(c.h(n) - h) < 1e-9);
    }
}

TEST_CASE("chain entropies are subadditive") {
    Rng rng(55);
    for (int t = 0; t < 4; ++t) {
        const ChainEntropyRate r = chain_entropy_rate(build_extension(random_fcs(rng, 2 + t)), 6);
        for (Index n = 1; n <= 6; ++n)
            for (Index m = 1; n + m <= 6; ++m) CHECK(r.h(n + m) <= r.h(n) + r.h(m) + 1e-9);
    }
}

TEST_CASE("third term") {
    const ExtendedChain product = build_extension(models::product_state(diag2(0.75, 0.25)));
    CHECK(std::abs(third_term(product, 3, 2)) < 1e-12);
    const ExtendedChain det = build_extension(models::product_state(diag2(1.0, 0.0)));
    CHECK(std::abs(third_term(det, 3, 2)) < 1e-12);
    const ExtendedChain chain = build_extension(models::classical_chain(chain_p()));
    const double t2 = third_term(chain, 2, 2);
    const double t4 = third_term(chain, 4, 2);
    CHECK(t4 < 0.0);
    CHECK(std::abs(t4) < std::abs(t2));
    Rng rng(56);
    for (int t = 0; t < 4; ++t) {
        const ExtendedChain x = build_extension(random_fcs(rng, 2 + t));
        for (Index n = 1; n <= 3; ++n)
            for (Index k = 1; k <= 2; ++k) CHECK(third_term(x, n, k) <= 1e-9);
    }
    CHECK_THROWS_AS(third_term(chain, 0, 2), InputError);
}

TEST_CASE("chain enumeration respects the word cap") {
    Rng rng(57);
    const ExtendedChain x = build_extension(random_fcs(rng, 8));
    CHECK_THROWS_AS(chain_entropy_rate(x, 6, 1000), ResourceError);
    CHECK_THROWS_AS(conditional_sweep(x, 6, ConditionalTarget::Sites, nullptr, 1000), ResourceError);
}

TEST_CASE("conditional states decompose the marginal") {
    Rng rng(58);
    const FCState s = random_fcs(rng, 5);
    const ExtendedChain x = build_extension(s);
    for (Index n = 1; n <= 3; ++n) {
        Matrix sum = Matrix::Zero(1 << n, 1 << n);
        std::uint64_t count = 1;
        for (Index t = 0; t < n; ++t) count *= static_cast<std::uint64_t>(x.alphabet());
        for (std::uint64_t w = 0; w < count; ++w) {
            const WordLabel word = word_from_index(w, n, x.labels(), x.alphabet());
            const Matrix dens = conditional_density(x, word);
            const Matrix gram = conditional_gram(x, word);
            sum += dens;
            CHECK(std::abs(gram.trace().real() - word_weight(x, word)) < 1e-12);
            CHECK(std::abs(dens.trace().real() - word_weight(x, word)) < 1e-12);
            if (word_weight(x, word) > 1e-10)
                CHECK(std::abs(oracle::vn_entropy(dens / dens.trace()) - oracle::vn_entropy(gram / gram.trace())) < 1e-8);
        }
        CHECK((sum - marginal_matrix(s, n)).norm() < 1e-10);
    }
}

TEST_CASE("conditional entropies of a pure product state vanish") {
    const ExtendedChain x = build_extension(models::product_state(Matrix::Constant(2, 2, Complex(0.5))));
    const ConditionalSweep sweep = conditional_sweep(x, 3, ConditionalTarget::Sites);
    CHECK(sweep.max_entropy < 1e-8);
    CHECK(sweep.bound == doctest::Approx(4.0 * std::log(2.0) + std::log(static_cast<double>(x.labels()))));
    CHECK(std::abs(sweep.total_weight - 1.0) < 1e-9);
}

TEST_CASE("conditional entropy of a covariant state stays below the bound") {
    Rng rng(59);
    const FCState s = models::with_invariant_state(models::random_covariant_map(rng, z2(), 4));
    const ExtendedChain x = build_extension(s);
    const double bound = 4.0 * std::log(2.0) + std::log(static_cast<double>(x.labels()));
    const auto count = static_cast<std::uint64_t>(x.alphabet() * x.alphabet() * x.alphabet());
    for (std::uint64_t w = 0; w < count; ++w) {
        const WordLabel word = word_from_index(w, 3, x.labels(), x.alphabet());
        if (word_weight(x, word) <= 1e-12) continue;
        const ConditionalEntropy c = conditional_state_entropy(x, word, ConditionalTarget::Sites);
        CHECK(c.entropy <= bound + 1e-8);
        CHECK(c.bound == doctest::Approx(bound));
    }
}

TEST_CASE("gauge-restricted conditional entropies") {
    Rng rng(60);
    const FCState s = models::with_invariant_state(models::random_covariant_map(rng, z2(), 3));
    const ExtendedChain x = build_extension(s);
    const BlockStructure b = block_structure(z2(), 3);
    const BlockStructure trivial = block_structure(GaugeGroup::trivial(2), 3);
    for (std::uint64_t w = 0; w < static_cast<std::uint64_t>(x.alphabet() * x.alphabet() * x.alphabet()); ++w) {
        const WordLabel word = word_from_index(w, 3, x.labels(), x.alphabet());
        if (word_weight(x, word) <= 1e-12) continue;
        const ConditionalEntropy site = conditional_state_entropy(x, word, ConditionalTarget::Sites);
        const ConditionalEntropy gauge = conditional_state_entropy(x, word, ConditionalTarget::Gauge, &b);
        const ConditionalEntropy plain = conditional_state_entropy(x, word, ConditionalTarget::Gauge, &trivial);
        CHECK(gauge.entropy <= site.entropy + std::log(2.0) + 1e-9);
        CHECK(std::abs(plain.entropy - site.entropy) < 1e-8);
        CHECK(gauge.bound == doctest::Approx(site.bound + std::log(2.0)));
    }
    CHECK_THROWS_AS(conditional_state_entropy(x, word_from_index(0, 3, x.labels(), x.alphabet()), ConditionalTarget::Gauge),
                    InputError);
}

TEST_CASE("zero-weight words have no conditional state") {
    const ExtendedChain x = build_extension(models::product_state(diag2(1.0, 0.0)));
    const WordLabel word{{1, 0}};
    CHECK(word_weight(x, word) == doctest::Approx(0.0));
    CHECK_THROWS_AS(conditional_state_entropy(x, word, ConditionalTarget::Sites), UndefinedConditionalError);
}

TEST_CASE("lower bound on the classical chain approaches the entropy rate") {
    const FCState s = models::classical_chain(chain_p());
    const ExtendedChain x = build_extension(s);
    const double rate = oracle::markov_rate(chain_p(), oracle::stationary2(chain_p()));
    const double increment = mean_entropy_estimate(entropy_sequence(s, 8)).increment;
    double previous = -1e300;
    for (Index n = 1; n <= 6; ++n) {
        const EntropyLowerBound b = entropy_lower_bound(x, GaugeGroup::trivial(2), n, 2);
        CHECK(b.value <= increment + 1e-6);
        CHECK(b.value >= previous - 1e-12);
        previous = b.value;
        if (n == 6) {
            CHECK(std::abs(b.value - rate) < 0.05);
            CHECK(b.value <= rate + 1e-6);
        }
    }
}

TEST_CASE("lower bound of the tracial product state with the Z2 gauge") {
    const ExtendedChain x = build_extension(models::product_state(diag2(0.5, 0.5)));
    for (Index n = 1; n <= 3; ++n) {
        const EntropyLowerBound b = entropy_lower_bound(x, z2(), n, 2);
        CHECK(b.covariance.pass);
        CHECK(std::abs(b.value - std::log(2.0)) < 1e-6);
        CHECK(std::abs(b.third_term) < 1e-12);
        CHECK(std::abs(b.conditional_weighted) < 1e-8);
    }
}

TEST_CASE("lower bound of a deterministic chain vanishes") {
    const ExtendedChain x = build_extension(models::product_state(diag2(1.0, 0.0)));
    for (Index n = 1; n <= 3; ++n) CHECK(std::abs(entropy_lower_bound(x, GaugeGroup::trivial(2), n, 2).value) < 1e-9);
}
