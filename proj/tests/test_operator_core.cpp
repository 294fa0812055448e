#include "doctest.h"

#include "fcs/operator_core.hpp"
#include "fcs/random.hpp"
#include "oracles.hpp"

using namespace fcs;

TEST_CASE("kron matches an explicit block construction") {
    Rng rng(1);
    const Matrix a = random_ginibre(rng, 2, 3);
    const Matrix b = random_ginibre(rng, 3, 2);
    CHECK((kron(a, b) - oracle::kron(a, b)).norm() < 1e-14);
    CHECK(kron_power(a.topLeftCorner(2, 2), 3).rows() == 8);
}

TEST_CASE("partial trace of a product keeps the requested factors") {
    Rng rng(2);
    const Matrix a = random_density(rng, 2);
    const Matrix b = random_density(rng, 3);
    const Matrix c = random_density(rng, 2);
    const Matrix abc = kron(kron(a, b), c);
    const SiteDims dims({2, 3, 2});
    const std::size_t keep_ac[] = {0, 2};
    CHECK((partial_trace(abc, dims, keep_ac) - kron(a, c)).norm() < 1e-13);
    const std::size_t keep_b[] = {1};
    CHECK((partial_trace(abc, dims, keep_b) - b).norm() < 1e-13);
    CHECK((trace_out(abc, dims, 1) - kron(a, c)).norm() < 1e-13);
    CHECK_THROWS_AS(partial_trace(Matrix::Identity(5, 5), dims, keep_b), ShapeError);
}

TEST_CASE("partial trace preserves expectation values of local observables") {
    Rng rng(3);
    const Matrix rho = random_density(rng, 8);
    const Matrix obs = random_hermitian(rng, 2);
    const SiteDims dims = SiteDims::uniform(2, 3);
    const std::size_t keep[] = {1};
    const Matrix lifted = kron(kron(Matrix::Identity(2, 2), obs), Matrix::Identity(2, 2));
    CHECK(std::abs((rho * lifted).trace() - (partial_trace(rho, dims, keep) * obs).trace()) < 1e-13);
}

TEST_CASE("entropy of diag(3/4, 1/4)") {
    const DensityMatrix d(Matrix(Vector(Eigen::Vector2cd(0.75, 0.25)).asDiagonal()));
    CHECK(von_neumann_entropy(d) == doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)).epsilon(1e-14));
    CHECK(von_neumann_entropy(d) == doctest::Approx(0.562335).epsilon(1e-6));
}

TEST_CASE("entropy of the maximally mixed state and of pure states") {
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(std::log(4.0)));
    Rng rng(4);
    CHECK(std::abs(von_neumann_entropy(DensityMatrix(random_density(rng, 5, 1)))) < 1e-10);
}

TEST_CASE("entropy agrees with a plain eigensolve on random densities") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const Matrix rho = random_density(rng, 6);
        CHECK(von_neumann_entropy(DensityMatrix(rho)) == doctest::Approx(oracle::vn_entropy(rho)).epsilon(1e-12));
    }
}

TEST_CASE("small negative eigenvalues are clipped, larger ones rejected") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 + 5e-11;
    m(1, 1) = -5e-11;
    CHECK(von_neumann_entropy(DensityMatrix(m)) == doctest::Approx(0.0));
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix{bad}, InvalidDensityError);
    CHECK_THROWS_AS(DensityMatrix{Matrix::Identity(2, 2)}, InvalidDensityError);
    Matrix nonherm = Matrix::Identity(2, 2) / 2.0;
    nonherm(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{nonherm}, InvalidDensityError);
}

TEST_CASE("eta is defined on [0, 1] only") {
    CHECK(eta(0.0) == 0.0);
    CHECK(eta(1.0) == doctest::Approx(0.0));
    CHECK(eta(std::exp(-1.0)) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(eta(1.5), DomainError);
    CHECK_THROWS_AS(eta(-0.2), DomainError);
}

TEST_CASE("shannon entropy and unit conversion") {
    const std::vector<double> p{0.5, 0.25, 0.25};
    CHECK(shannon_entropy(p) == doctest::Approx(oracle::shannon(p)));
    CHECK(to_bits(std::log(2.0)) == doctest::Approx(1.0));
}

TEST_CASE("normalized entropy ignores the trace") {
    Rng rng(6);
    const Matrix rho = random_density(rng, 4);
    CHECK(normalized_entropy(3.7 * rho) == doctest::Approx(oracle::vn_entropy(rho)).epsilon(1e-12));
}

TEST_CASE("psd square root and norms") {
    Rng rng(7);
    const Matrix p = random_psd(rng, 4);
    const Matrix s = psd_sqrt(p);
    CHECK((s * s - p).norm() < 1e-10);
    CHECK(hermiticity_defect(s) < 1e-12);
    const Matrix h = random_hermitian(rng, 3);
    const RealVector ev = hermitian_eigenvalues(h);
    CHECK(operator_norm(h) == doctest::Approx(ev.cwiseAbs().maxCoeff()));
    CHECK(trace_norm_hermitian(h) == doctest::Approx(ev.cwiseAbs().sum()));
    CHECK(min_eigenvalue(h) == doctest::Approx(ev(0)));
    for (Index i = 1; i < ev.size(); ++i) CHECK(ev(i) >= ev(i - 1));
}

TEST_CASE("hermitian eigen returns an orthonormal basis") {
    Rng rng(8);
    const Matrix h = random_hermitian(rng, 16);
    const HermitianSpectrum sp = hermitian_eigen(h);
    CHECK((sp.vectors.adjoint() * sp.vectors - Matrix::Identity(16, 16)).norm() < 1e-12);
    CHECK((sp.vectors * sp.values.cast<Complex>().asDiagonal() * sp.vectors.adjoint() - h).norm() < 1e-11 * h.norm());
}

TEST_CASE("site dimensions") {
    const SiteDims d = SiteDims::uniform(3, 4);
    CHECK(d.size() == 4);
    CHECK(d.total() == 81);
    CHECK(matrix_unit(3, 1, 2)(1, 2) == Complex(1.0));
}
