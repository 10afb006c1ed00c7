#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qthermo/passive.hpp"
#include "qthermo/qstate.hpp"

using namespace qthermo;

namespace {

const double kLn2 = std::log(2.0);
// Gibbs qubit at beta = 1, gap 1
const double kE1 = 0.2689414213699951;
const double kS1 = 0.5822031088882179;
const double kLnZ1 = 0.3132616875182228;

const HermitianOperator kQubit = HermitianOperator::diagonal({0.0, 1.0});

DensityMatrix pure_excited() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return DensityMatrix(std::move(m));
}

}  // namespace

TEST_CASE("gibbs state hits the frozen beta = 1 values") {
    const DensityMatrix g = gibbs_state(kQubit, 1.0);
    CHECK(energy(g, kQubit) == doctest::Approx(kE1).epsilon(1e-14));
    CHECK(entropy(g) == doctest::Approx(kS1).epsilon(1e-14));
}

TEST_CASE("gibbs state handles negative and zero beta") {
    const DensityMatrix flat = gibbs_state(kQubit, 0.0);
    CHECK(energy(flat, kQubit) == doctest::Approx(0.5).epsilon(1e-14));
    const DensityMatrix inverted = gibbs_state(kQubit, -1.0);
    CHECK(energy(inverted, kQubit) ==
          doctest::Approx(1.0 - kE1).epsilon(1e-13));
    // extreme beta must not overflow
    const DensityMatrix cold = gibbs_state(kQubit, 5000.0);
    CHECK(energy(cold, kQubit) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("intrinsic beta is a fixed point of gibbs_state") {
    for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const IntrinsicTemperature b =
            intrinsic_beta(gibbs_state(kQubit, beta), kQubit);
        REQUIRE_FALSE(b.infinite);
        CHECK(b.beta == doctest::Approx(beta).epsilon(1e-8));
    }
    const HermitianOperator h3 =
        HermitianOperator::diagonal({0.0, 0.4, 1.3});
    for (double beta : {0.3, 2.0, 7.0}) {
        const IntrinsicTemperature b =
            intrinsic_beta(gibbs_state(h3, beta), h3);
        CHECK(b.beta == doctest::Approx(beta).epsilon(1e-8));
    }
}

TEST_CASE("intrinsic beta endpoint cases") {
    Matrix mixed = Matrix::Identity(2, 2) / 2.0;
    const IntrinsicTemperature flat =
        intrinsic_beta(DensityMatrix(mixed), kQubit);
    REQUIRE_FALSE(flat.infinite);
    CHECK(flat.beta == doctest::Approx(0.0));

    const IntrinsicTemperature frozen = intrinsic_beta(pure_excited(), kQubit);
    CHECK(frozen.infinite);
    CHECK(frozen.temperature() == doctest::Approx(0.0));

    // entropy below the ground degeneracy is still representable: beta = inf
    const HermitianOperator degenerate =
        HermitianOperator::diagonal({0.0, 0.0, 1.0});
    Matrix half = Matrix::Zero(3, 3);
    half(0, 0) = 0.9;
    half(1, 1) = 0.1;
    const IntrinsicTemperature b =
        intrinsic_beta(DensityMatrix(half), degenerate);
    CHECK(b.infinite);
}

TEST_CASE("entropy outside [0, ln d] is rejected") {
    CHECK_THROWS_AS(intrinsic_beta_for_entropy(kLn2 + 1e-3,
                                               kQubit.eigenvalues()),
                    std::invalid_argument);
    CHECK_THROWS_AS(intrinsic_beta_for_entropy(-1e-3, kQubit.eigenvalues()),
                    std::invalid_argument);
}

TEST_CASE("completely passive state keeps entropy and lowers energy") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        const DensityMatrix cp = completely_passive_state(rho, kQubit);
        CHECK(entropy(cp) == doctest::Approx(entropy(rho)).epsilon(1e-9));
        CHECK(energy(cp, kQubit) <= energy(rho, kQubit) + 1e-12);
    }
}

TEST_CASE("degenerate ground space gets the two-level split representative") {
    const HermitianOperator h =
        HermitianOperator::diagonal({0.0, 0.0, 1.0});
    const double s = 0.4;  // below ln 2, no finite-beta Gibbs state matches
    const DensityMatrix cp = completely_passive_state_for_entropy(s, h);
    CHECK(entropy(cp) == doctest::Approx(s).epsilon(1e-9));
    CHECK(energy(cp, h) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bound energy against the grid oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DensityMatrix rho = random_density_matrix(2, 2, 100 + seed);
        const double b = bound_energy(rho, kQubit);
        const double oracle =
            min_energy_oracle({0.0, 1.0}, entropy(rho));
        CHECK(b == doctest::Approx(oracle).epsilon(1e-6));
    }
    const HermitianOperator h3 =
        HermitianOperator::diagonal({0.0, 0.35, 1.0});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density_matrix(3, 3, 200 + seed);
        const double b = bound_energy(rho, h3);
        const double oracle =
            min_energy_oracle({0.0, 0.35, 1.0}, entropy(rho));
        CHECK(std::abs(b - oracle) < 1e-4);
    }
}

TEST_CASE("free energy is non-negative and vanishes on Gibbs states") {
    CHECK(free_energy(gibbs_state(kQubit, 1.3), kQubit) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(free_energy(pure_excited(), kQubit) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DensityMatrix rho = random_density_matrix(3, 2, 300 + seed);
        const HermitianOperator h3 =
            HermitianOperator::diagonal({0.0, 0.5, 1.2});
        CHECK(free_energy(rho, h3) >= -1e-10);
    }
}

TEST_CASE("helmholtz free energy of a Gibbs state is -ln Z / beta") {
    const DensityMatrix g = gibbs_state(kQubit, 1.0);
    CHECK(helmholtz_free_energy(g, kQubit, 1.0) ==
          doctest::Approx(-kLnZ1).epsilon(1e-13));
    CHECK_THROWS_AS(helmholtz_free_energy(g, kQubit, 0.0),
                    std::invalid_argument);
}

TEST_CASE("worst bath recovers the free energy and the intrinsic beta") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        const DensityMatrix rho = random_density_matrix(2, 2, seed);
        const WorstBathResult wb = worst_bath_free_energy(rho, kQubit);
        CHECK(wb.value ==
              doctest::Approx(free_energy(rho, kQubit)).epsilon(1e-6));
        const IntrinsicTemperature b = intrinsic_beta(rho, kQubit);
        if (!b.infinite && b.beta > 1e-6) {
            CHECK(std::abs(wb.argmin_beta - b.beta) / b.beta < 1e-3);
        }
    }
}

TEST_CASE("equivalence class report ties the pieces together") {
    const DensityMatrix rho = random_density_matrix(2, 2, 42);
    const EquivalenceClassReport rep = equivalence_class_report(rho, kQubit);
    CHECK(rep.energy == doctest::Approx(energy(rho, kQubit)));
    CHECK(rep.entropy == doctest::Approx(entropy(rho)));
    CHECK(rep.free_energy ==
          doctest::Approx(rep.energy - rep.bound_energy).epsilon(1e-12));
    CHECK(rep.free_energy >= -1e-10);
}

TEST_CASE("oracle grid scan agrees with closed forms at the edges") {
    // maximally mixed: minimum energy is the mean eigenvalue
    CHECK(min_energy_oracle({0.0, 1.0}, kLn2) ==
          doctest::Approx(0.5).epsilon(1e-6));
    // zero entropy: ground state energy
    CHECK(min_energy_oracle({0.0, 1.0}, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(min_energy_oracle({0.0, 0.5, 1.0, 2.0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("oracle serial and parallel scans return identical bits") {
    const double s = 0.48;
    const double serial =
        min_energy_oracle({0.0, 1.0}, s, 0, kernels::Execution::Serial);
    const double parallel =
        min_energy_oracle({0.0, 1.0}, s, 0, kernels::Execution::Parallel);
    CHECK(serial == parallel);
}
