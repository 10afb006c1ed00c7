#pragma once

#include <optional>
#include <vector>

#include "qthermo/kernels.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {

// Entropy-matching solver contract: |S(gamma(beta)) - S(rho)| target in nats,
// bisection iteration cap, and the beta above which the state is treated as
// beta = +infinity.
inline constexpr double kEntropyMatchTol = 1e-10;
inline constexpr int kBisectionMaxIter = 200;
inline constexpr double kBetaCap = 1e8;
inline constexpr double kGroundEntropyTol = 1e-12;

struct IntrinsicTemperature {
    double beta = 0.0;          // ignored when infinite
    bool infinite = false;
    double entropy_at_beta = 0.0;
    double achieved_tolerance = 0.0;

    static IntrinsicTemperature finite(double b, double s, double tol) {
        return IntrinsicTemperature{b, false, s, tol};
    }
    static IntrinsicTemperature inf(double s, double tol) {
        return IntrinsicTemperature{0.0, true, s, tol};
    }
    // Temperature 1/beta; +inf at beta = 0, 0 when beta is infinite.
    double temperature() const;
};

struct EquivalenceClassReport {
    double energy = 0.0;
    double entropy = 0.0;
    IntrinsicTemperature beta;
    double bound_energy = 0.0;
    double free_energy = 0.0;
};

// Gibbs state of H at inverse temperature beta; beta may be negative (used by
// the diagram boundary) and infinite betas are rejected here, the degenerate
// representative lives in completely_passive_state.
DensityMatrix gibbs_state(const HermitianOperator& h, double beta);

// Solves S(gamma(beta)) = s on [0, +inf] by bracketed bisection; the bracket
// [0, 1] doubles its upper end until the sign changes, betas beyond kBetaCap
// collapse to +infinity. s must lie in [0, ln dim] up to 1e-9.
IntrinsicTemperature intrinsic_beta_for_entropy(double s,
                                                const RealVector& evals);
IntrinsicTemperature intrinsic_beta(const DensityMatrix& rho,
                                    const HermitianOperator& h);

// gamma(rho): Gibbs state at the intrinsic beta; when beta = +inf and the
// ground space is degenerate, populations follow the canonical two-level
// split (p, (1-p)/(g0-1), ..., 0) solving the entropy constraint.
DensityMatrix completely_passive_state(const DensityMatrix& rho,
                                       const HermitianOperator& h);
// Same representative, selected by target entropy alone.
DensityMatrix completely_passive_state_for_entropy(double s,
                                                   const HermitianOperator& h);

// B(rho) = E(gamma(rho)), the least energy among states of equal entropy.
double bound_energy(const DensityMatrix& rho, const HermitianOperator& h);
double bound_energy_for_entropy(double s, const RealVector& evals);

// F(rho) = E(rho) - B(rho) >= 0.
double free_energy(const DensityMatrix& rho, const HermitianOperator& h);

// F_beta(rho) = E(rho) - S(rho)/beta; beta must be positive and finite.
double helmholtz_free_energy(const DensityMatrix& rho,
                             const HermitianOperator& h, double beta);

EquivalenceClassReport equivalence_class_report(const DensityMatrix& rho,
                                                const HermitianOperator& h);

struct WorstBathResult {
    double value = 0.0;        // min over beta of F_beta(rho) - F_beta(gamma(beta))
    double argmin_beta = 0.0;
    bool at_boundary = false;  // minimum pinned to a grid edge (beta -> 0 or inf)
};

// Grid scan over a log-spaced beta grid spanning [beta(rho)/10, 10 beta(rho)]
// followed by golden-section refinement. Deliberately never calls
// intrinsic_beta, so it stays an independent route to F(rho).
WorstBathResult worst_bath_free_energy(const DensityMatrix& rho,
                                       const HermitianOperator& h,
                                       int grid_points = 64);

// Brute-force minimum of sum_i p_i lambda_i over simplex grid points whose
// entropy falls in a grid-adaptive band around target_entropy. Supports
// d = 2 and d = 3 only; refines the coarse grid twice around the argmin.
double min_energy_oracle(const std::vector<double>& spectrum,
                         double target_entropy, long long resolution = 0,
                         kernels::Execution exec = kernels::default_execution());

}  // namespace qthermo
