#pragma once

// Independent reference computations used as test oracles. None of them calls
// the library routine it is compared against.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double shannon(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log(x);
    return h;
}

/// Stationary distribution of a 2-state chain.
inline Eigen::Vector2d stationary2(const Eigen::Matrix2d& p) {
    const double a = p(0, 1), b = p(1, 0);
    return Eigen::Vector2d(b / (a + b), a / (a + b));
}

/// Probabilities of all n-letter paths of a Markov chain, lexicographic.
inline std::vector<double> path_probabilities(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, int n) {
    const auto d = static_cast<std::uint64_t>(p.rows());
    std::uint64_t count = 1;
    for (int t = 0; t < n; ++t) count *= d;
    std::vector<double> out(count);
    for (std::uint64_t w = 0; w < count; ++w) {
        std::vector<int> s(static_cast<std::size_t>(n));
        std::uint64_t r = w;
        for (int t = n; t-- > 0;) {
            s[static_cast<std::size_t>(t)] = static_cast<int>(r % d);
            r /= d;
        }
        double prob = pi(s[0]);
        for (int t = 1; t < n; ++t) prob *= p(s[static_cast<std::size_t>(t - 1)], s[static_cast<std::size_t>(t)]);
        out[w] = prob;
    }
    return out;
}

/// Markov entropy rate sum_i pi_i H(p_i.).
inline double markov_rate(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(p.cols()));
        for (Eigen::Index j = 0; j < p.cols(); ++j) row[static_cast<std::size_t>(j)] = p(i, j);
        h += pi(i) * shannon(row);
    }
    return h;
}

/// Von Neumann entropy by a plain eigensolve, no clipping beyond x > 1e-300.
inline double vn_entropy(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double x = es.eigenvalues()(i);
        if (x > 1e-300) s -= x * std::log(x);
    }
    return s;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace oracle
