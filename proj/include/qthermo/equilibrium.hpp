#pragma once

#include <string>
#include <vector>

#include "qthermo/passive.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {

struct CompositePart {
    std::string label;
    HermitianOperator hamiltonian;
};

// Non-interacting parts plus a joint state whose subsystem_dims must line up
// with the part dimensions.
struct CompositeSystem {
    std::vector<CompositePart> parts;
    DensityMatrix state;

    CompositeSystem(std::vector<CompositePart> p, DensityMatrix s);
};

struct EquilibrationResult {
    IntrinsicTemperature common_beta;
    std::vector<DensityMatrix> per_part_states;
    DensityMatrix joint_cp_state;
    double energy_released = 0.0;  // E(rho) - E(joint CP state), >= 0
};

// Entropy-preserving relaxation to the completely passive state of the joint
// non-interacting Hamiltonian. For finite common beta the result factorizes
// into per-part Gibbs states at that beta; below the joint ground-degeneracy
// entropy the product form does not exist and the canonical degenerate
// representative is returned instead (common_beta = +inf).
EquilibrationResult equilibrate(const CompositeSystem& system);

struct EquilibriumCheck {
    bool equilibrium = false;
    double free_energy_residual = 0.0;  // F of the joint state
    double max_marginal_free_energy = 0.0;
    double mutual_information = 0.0;
};

// A state is an equilibrium state iff its joint free energy vanishes; the
// report also carries the implied marginal checks.
EquilibriumCheck is_equilibrium(const CompositeSystem& system,
                                double tol = 1e-9);

struct BetaOrderingResult {
    double beta_ab = 0.0;
    bool ordering_ok = false;
};

// Equilibrates gamma_A(beta_a) (x) gamma_B(beta_b) and checks the common beta
// lands between the initial betas (beta_a >= beta_b assumed after swap).
BetaOrderingResult beta_ordering_check(double beta_a, double beta_b,
                                       const HermitianOperator& h_a,
                                       const HermitianOperator& h_b,
                                       double tol = 1e-9);

struct Lemma1Report {
    // Margins of the four composition inequalities, all >= 0 up to tolerance:
    // p4: B(rho_A (x) rho_B) - B(rho_AB)
    // p5: B(rho_A) + B(rho_B) - B(rho_A (x) rho_B)
    // p6: F(rho_AB) - F(rho_A (x) rho_B)
    // p7: F(rho_A (x) rho_B) - F(rho_A) - F(rho_B)
    double p4 = 0.0, p5 = 0.0, p6 = 0.0, p7 = 0.0;
    double beta_a = 0.0, beta_b = 0.0;  // intrinsic betas of the marginals
    bool beta_a_infinite = false, beta_b_infinite = false;
};

Lemma1Report verify_lemma1(const DensityMatrix& rho_ab,
                           const HermitianOperator& h_a,
                           const HermitianOperator& h_b);

}  // namespace qthermo
