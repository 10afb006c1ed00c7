#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qthermo/passive.hpp"
#include "qthermo/qstate.hpp"
#include "qthermo/resource.hpp"

using namespace qthermo;

namespace {

const double kLn2 = std::log(2.0);
const HermitianOperator kQubit = HermitianOperator::diagonal({0.0, 1.0});
const HermitianOperator kQutrit =
    HermitianOperator::diagonal({0.0, 0.35, 1.0});

}  // namespace

TEST_CASE("entropy-only rate") {
    CHECK(*entropy_only_rate(0.3, 0.6) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*entropy_only_rate(kLn2, kLn2) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // a pure source has no entropy to hand over
    CHECK(*entropy_only_rate(0.0, 0.4) == doctest::Approx(0.0).epsilon(1e-15));
    // pure to pure converts one for one
    CHECK(*entropy_only_rate(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // mixed source, pure target: no finite rate
    CHECK_FALSE(entropy_only_rate(0.3, 0.0).has_value());
    CHECK_THROWS_AS(entropy_only_rate(-0.1, 0.5), std::invalid_argument);

    const DensityMatrix gamma = gibbs_state(kQubit, 1.0);
    Matrix pure = Matrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK(*entropy_only_rate(gamma, gamma) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(entropy_only_rate(gamma, DensityMatrix(pure)).has_value());
}

TEST_CASE("residue solves the convex combination") {
    const ThermalBoundary b = thermal_boundary(kQubit, 512);
    // source halfway between target and a pure ground residue
    const DiagramPoint target{0.5, kLn2, ""};
    const DiagramPoint source{0.25, 0.5 * kLn2, ""};
    const ResiduePoint res = residue_from_rate(source, target, 0.5, b);
    CHECK(res.point.energy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.point.entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.physical);

    // rates outside (0, 1) are not solvable for a residue
    CHECK_THROWS_AS(residue_from_rate(source, target, 0.0, b),
                    std::invalid_argument);
    CHECK_THROWS_AS(residue_from_rate(source, target, 1.0, b),
                    std::invalid_argument);

    // pushing the rate too high throws the residue out of the region
    const ResiduePoint out = residue_from_rate(source, target, 0.9, b);
    CHECK_FALSE(out.physical);
}

TEST_CASE("collinearity residual vanishes only on the line") {
    const DiagramPoint target{0.5, kLn2, ""};
    const DiagramPoint source{0.25, 0.5 * kLn2, ""};
    const DiagramPoint residue{0.0, 0.0, ""};
    const CollinearityReport on = collinearity_residual(source, target,
                                                        residue, 0.5);
    CHECK(std::abs(on.de) < 1e-15);
    CHECK(std::abs(on.ds) < 1e-15);
    CHECK(on.between);

    DiagramPoint off = residue;
    off.energy += 1e-3;
    const CollinearityReport miss = collinearity_residual(source, target,
                                                          off, 0.5);
    CHECK(miss.de == doctest::Approx(-0.5e-3).epsilon(1e-9));
    CHECK(std::abs(miss.ds) < 1e-15);

    const CollinearityReport bad_rate = collinearity_residual(source, target,
                                                              residue, 1.2);
    CHECK_FALSE(bad_rate.between);
}

TEST_CASE("pure residue reduces the rate to the entropy ratio") {
    // low-entropy interior sources under a maximally mixed target: the ray
    // from the target through them leaves through the floor, so the residue
    // is exactly pure
    const DiagramPoint interior[] = {
        {0.30, 0.20, "a"}, {0.35, 0.15, "b"}, {0.25, 0.10, "c"}};
    for (const DiagramPoint& src : interior) {
        const ConversionProblem prob{src, DiagramPoint{0.5, kLn2, "tgt"},
                                     kQubit};
        const ConversionResult r = max_conversion_rate(prob);
        CHECK(r.residue_kind == ResidueKind::Pure);
        CHECK(r.residue.entropy == 0.0);
        CHECK(r.rate ==
              doctest::Approx(prob.source.entropy / prob.target.entropy)
                  .epsilon(1e-12));
        CHECK_FALSE(r.capped);
        CHECK_FALSE(r.horizontal_ray);
        // the convex combination closes exactly
        const CollinearityReport col =
            collinearity_residual(prob.source, prob.target, r.residue, r.rate);
        CHECK(std::abs(col.de) < 1e-9);
        CHECK(std::abs(col.ds) < 1e-9);
        CHECK(col.between);
    }
}

TEST_CASE("thermal residue lands on the boundary curve") {
    // interior source above a colder target: the extended ray exits through
    // the curved roof before reaching the floor
    const ConversionProblem prob{DiagramPoint{0.32, 0.60, "src"},
                                 DiagramPoint{0.55, 0.30, "tgt"}, kQubit};
    const ConversionResult r = max_conversion_rate(prob);
    CHECK(r.residue_kind == ResidueKind::Thermal);
    CHECK(r.rate > 0.0);
    CHECK(r.rate < 1.0);
    // the residue sits on the roof: its entropy matches the boundary at its
    // energy
    const ThermalBoundary b = thermal_boundary(kQubit, 512);
    CHECK(r.residue.entropy ==
          doctest::Approx(boundary_entropy_at_energy(b, r.residue.energy))
              .epsilon(1e-7));
    const CollinearityReport col =
        collinearity_residual(prob.source, prob.target, r.residue, r.rate);
    CHECK(std::abs(col.de) < 1e-9);
    CHECK(std::abs(col.ds) < 1e-9);
}

TEST_CASE("euclidean segment ratio matches the reported rate") {
    const ConversionProblem prob{DiagramPoint{0.32, 0.60, "src"},
                                 DiagramPoint{0.55, 0.30, "tgt"}, kQubit};
    const ConversionResult r = max_conversion_rate(prob);
    const double num = std::hypot(prob.source.energy - r.residue.energy,
                                  prob.source.entropy - r.residue.entropy);
    const double den = std::hypot(prob.target.energy - r.residue.energy,
                                  prob.target.entropy - r.residue.entropy);
    CHECK(num / den == doctest::Approx(r.rate).epsilon(1e-9));
}

TEST_CASE("coincident endpoints cap the rate at one") {
    const DiagramPoint x = locate(gibbs_state(kQutrit, 1.0), kQutrit, "x");
    const ConversionProblem prob{x, x, kQutrit};
    const ConversionResult r = max_conversion_rate(prob);
    CHECK(r.rate == 1.0);
    CHECK(r.capped);
    CHECK(r.residue_kind == ResidueKind::Interior);
    CHECK(r.residue.energy == doctest::Approx(prob.source.energy));
    CHECK(r.residue.entropy == doctest::Approx(prob.source.entropy));
}

TEST_CASE("equal entropies ride a horizontal ray") {
    // same S, different E: the rate must come from the energy coordinate
    const ConversionProblem prob{DiagramPoint{0.42, 0.5, "src"},
                                 DiagramPoint{0.62, 0.5, "tgt"}, kQubit};
    const ConversionResult r = max_conversion_rate(prob);
    CHECK(r.horizontal_ray);
    CHECK(r.rate > 0.0);
    CHECK(r.rate < 1.0);
    CHECK(r.residue.entropy == doctest::Approx(0.5).epsilon(1e-9));
    const CollinearityReport col =
        collinearity_residual(prob.source, prob.target, r.residue, r.rate);
    CHECK(std::abs(col.de) < 1e-9);
    CHECK(std::abs(col.ds) < 1e-9);
}

TEST_CASE("source on the boundary cannot shed a residue") {
    // the ray leaves the region immediately: rate collapses to zero and the
    // residue echoes the source
    const ConversionProblem prob{locate(gibbs_state(kQubit, 1.0), kQubit, "src"),
                                 DiagramPoint{0.46, 0.55, "tgt"}, kQubit};
    const ConversionResult r = max_conversion_rate(prob);
    CHECK(r.rate < 1e-5);
    CHECK(r.residue.energy == doctest::Approx(prob.source.energy).epsilon(1e-5));
    CHECK(r.residue.entropy ==
          doctest::Approx(prob.source.entropy).epsilon(1e-5));
}

TEST_CASE("endpoints outside the region are rejected") {
    const ConversionProblem roof{DiagramPoint{0.5, kLn2 + 0.1, "src"},
                                 DiagramPoint{0.5, 0.3, "tgt"}, kQubit};
    CHECK_THROWS_AS(max_conversion_rate(roof), std::invalid_argument);
    const ConversionProblem past{DiagramPoint{0.5, 0.3, "src"},
                                 DiagramPoint{1.4, 0.0, "tgt"}, kQubit};
    CHECK_THROWS_AS(max_conversion_rate(past), std::invalid_argument);
}

TEST_CASE("qutrit: plateau exit pins the residue to the spectrum edge") {
    // degenerate ground doublet: the S axis is replaced by a plateau at
    // S = ln 2, so a ray can exit through the flat segment at lambda_min
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 0.0, 1.0});
    const ConversionProblem prob{DiagramPoint{0.18, 0.75, "src"},
                                 DiagramPoint{0.45, 1.05, "tgt"}, h};
    const ConversionResult r = max_conversion_rate(prob);
    CHECK(r.rate > 0.0);
    CHECK(r.rate < 1.0);
    CHECK(r.residue.energy == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.residue_kind == ResidueKind::Thermal);
    CHECK(r.residue.entropy <= kLn2 + 1e-9);
    const CollinearityReport col =
        collinearity_residual(prob.source, prob.target, r.residue, r.rate);
    CHECK(std::abs(col.de) < 1e-9);
    CHECK(std::abs(col.ds) < 1e-9);
}
