#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "qthermo/qstate.hpp"

using namespace qthermo;

namespace {

const double kLn2 = std::log(2.0);

DensityMatrix maximally_mixed(int d) {
    Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix(std::move(m));
}

}  // namespace

TEST_CASE("spectral decomposition sorts ascending and reconstructs") {
    Matrix m(2, 2);
    m << 2.0, std::complex<double>(0.0, -1.0),
         std::complex<double>(0.0, 1.0), 2.0;
    const Eigensystem eig = spectral_decompose(m);
    CHECK(eig.values(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.values(1) == doctest::Approx(3.0).epsilon(1e-12));
    const Matrix rebuilt =
        eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-Hermitian input is rejected with the deviation named") {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(spectral_decompose(m), std::invalid_argument);
    CHECK_THROWS_AS(HermitianOperator{m}, std::invalid_argument);
}

TEST_CASE("density matrix validates trace and positivity") {
    Matrix m = Matrix::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);
    Matrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
}

TEST_CASE("entropy of known states") {
    CHECK(entropy(maximally_mixed(2)) == doctest::Approx(kLn2).epsilon(1e-14));
    CHECK(entropy(maximally_mixed(3)) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-14));
    Matrix pure = Matrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK(entropy(DensityMatrix(pure)) == doctest::Approx(0.0));
    // entropy ignores the basis: rotate the pure state
    const Matrix u = random_unitary(2, 7);
    CHECK(entropy(apply_unitary(DensityMatrix(pure), u)) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("energy is the trace pairing") {
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0});
    CHECK(energy(maximally_mixed(2), h) == doctest::Approx(0.5));
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    CHECK(energy(DensityMatrix(excited), h) == doctest::Approx(1.0));
    const HermitianOperator h3 = HermitianOperator::diagonal({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(energy(maximally_mixed(2), h3), std::invalid_argument);
}

TEST_CASE("tensor concatenates subsystem dims and multiplies spectra") {
    const DensityMatrix a = maximally_mixed(2);
    const DensityMatrix b = maximally_mixed(3);
    const DensityMatrix ab = tensor(a, b);
    REQUIRE(ab.dim() == 6);
    CHECK(ab.subsystem_dims() == std::vector<int>{2, 3});
    CHECK(entropy(ab) ==
          doctest::Approx(kLn2 + std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("join_hamiltonians adds part energies") {
    const HermitianOperator ha = HermitianOperator::diagonal({0.0, 1.0});
    const HermitianOperator hb = HermitianOperator::diagonal({0.0, 2.0});
    const HermitianOperator hab = join_hamiltonians(ha, hb);
    REQUIRE(hab.dim() == 4);
    CHECK(hab.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(hab.eigenvalues()(3) == doctest::Approx(3.0));
    const HermitianOperator three =
        join_hamiltonians({ha, ha, hb});
    REQUIRE(three.dim() == 8);
    CHECK(three.max_eigenvalue() == doctest::Approx(4.0));
}

TEST_CASE("partial trace recovers product marginals") {
    const DensityMatrix a = random_density_matrix(2, 2, 11);
    const DensityMatrix b = random_density_matrix(3, 3, 12);
    const DensityMatrix ab = tensor(a, b);
    const DensityMatrix ta = partial_trace(ab, {0});
    const DensityMatrix tb = partial_trace(ab, {1});
    CHECK((ta.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((tb.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("mutual information vanishes on products and is positive when "
          "correlated") {
    const DensityMatrix a = random_density_matrix(2, 2, 21);
    const DensityMatrix b = random_density_matrix(2, 2, 22);
    CHECK(mutual_information(tensor(a, b)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // classically correlated two-qubit state
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 0.5;
    m(3, 3) = 0.5;
    const DensityMatrix corr(m, {2, 2});
    CHECK(mutual_information(corr) == doctest::Approx(kLn2).epsilon(1e-12));
}

TEST_CASE("random density matrices are valid and seed-deterministic") {
    for (int dim : {2, 3, 4}) {
        const DensityMatrix rho = random_density_matrix(dim, dim, 5);
        CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
        CHECK(rho.spectrum().minCoeff() >= 0.0);
    }
    const DensityMatrix x = random_density_matrix(3, 2, 99);
    const DensityMatrix y = random_density_matrix(3, 2, 99);
    CHECK((x.matrix() - y.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(x.rank() == 2);
}

TEST_CASE("random unitaries are unitary and deterministic") {
    for (int dim : {2, 4}) {
        const Matrix u = random_unitary(dim, 3);
        const Matrix uu = u.adjoint() * u;
        CHECK((uu - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK((random_unitary(4, 8) - random_unitary(4, 8)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("unitaries preserve spectrum hence entropy") {
    const DensityMatrix rho = random_density_matrix(4, 3, 31);
    const DensityMatrix rotated =
        apply_unitary(rho, random_unitary(4, 32));
    CHECK(entropy(rotated) == doctest::Approx(entropy(rho)).epsilon(1e-12));
    CHECK(rotated.rank() == rho.rank());
}

TEST_CASE("ground degeneracy counts clustered eigenvalues") {
    CHECK(HermitianOperator::diagonal({0.0, 0.0, 1.0}).ground_degeneracy() ==
          2);
    CHECK(HermitianOperator::diagonal({0.0, 1.0}).ground_degeneracy() == 1);
}
