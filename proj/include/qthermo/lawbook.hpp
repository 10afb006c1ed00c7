#pragma once

#include <optional>
#include <string>

#include "qthermo/passive.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {

// Endpoint description of an entropy-preserving process on a bipartite
// system (A) + environment (B) pair with non-interacting Hamiltonians. All
// law reports are computed from the endpoints alone.
struct ProcessRecord {
    HermitianOperator h_system;
    HermitianOperator h_environment;
    DensityMatrix initial;
    DensityMatrix final;
    double entropy_tolerance = 1e-9;
    std::string label_system = "A";
    std::string label_environment = "B";

    ProcessRecord(HermitianOperator ha, HermitianOperator hb,
                  DensityMatrix before, DensityMatrix after,
                  double ep_tol = 1e-9);
};

struct EpValidation {
    bool pass = false;
    double residual = 0.0;  // |S(final) - S(initial)| in nats
};

EpValidation validate_ep(const ProcessRecord& record);

struct Ledger {
    double d_energy_a = 0.0, d_energy_b = 0.0;
    double d_bound_a = 0.0, d_bound_b = 0.0;
    double d_free_a = 0.0, d_free_b = 0.0;
    double d_entropy_a = 0.0, d_entropy_b = 0.0;
    double d_mutual_information = 0.0;
    double external_work = 0.0;   // W = Delta E of the joint system
    double work_on_system = 0.0;  // Delta W_A = W - Delta F_B
    double heat = 0.0;            // Delta Q = Delta B of the environment
    double entropy_residual = 0.0;
    // Initial intrinsic betas of the marginals (+inf rendered as infinity).
    double beta_a = 0.0, beta_b = 0.0;
    bool beta_a_infinite = false, beta_b_infinite = false;
};

Ledger compute_ledger(const ProcessRecord& record);

double heat(const ProcessRecord& record);
double external_work(const ProcessRecord& record);
double work_on_system(const ProcessRecord& record);
// |Delta E_A - (Delta W_A - Delta Q)|, an identity up to arithmetic noise.
double first_law_residual(const ProcessRecord& record);

struct HeatBounds {
    bool applicable = false;   // initial environment thermal with T < inf
    std::string reason;        // why not, when applicable = false
    double lower = 0.0;        // T_B * Delta S_B
    double heat = 0.0;         // Delta Q
    double upper = 0.0;        // Delta E_B
    double beta_env = 0.0;
};

// T_B dS_B <= dQ <= dE_B for an initially thermal environment; both gaps
// collapse at second order in the bath perturbation.
HeatBounds heat_bounds(const ProcessRecord& record, double thermal_tol = 1e-9);

struct ClausiusReport {
    double d_entropy_a = 0.0;
    double d_mutual_information = 0.0;
    double beta_a = 0.0, beta_b = 0.0;
    // beta-form margin of the generalized Clausius inequality,
    //   (beta_A - beta_B) dS_A - beta_A beta_B (dF_A + dF_B - W) - beta_A dI,
    // total for finite betas including beta = 0.
    double margin_beta = 0.0;
    bool margin_beta_applicable = false;
    // Temperature form (T_B - T_A) dS_A - (dF_A + dF_B + T_B dI - W);
    // needs both betas positive (infinite beta gives T = 0 and is fine).
    double margin_temperature = 0.0;
    bool margin_temperature_applicable = false;
    // Standard Clausius (T_B - T_A) dS_A >= 0 and its beta form; the premises
    // (uncorrelated thermal start, no external work) are reported so callers
    // can see when a negative value is an anomalous-heat-flow demonstration
    // rather than a violation.
    double std_margin_beta = 0.0;
    double std_margin_temperature = 0.0;
    bool std_premises_hold = false;
};

ClausiusReport clausius_report(const ProcessRecord& record,
                               double premise_tol = 1e-9);

struct KelvinPlanckReport {
    double identity_residual = 0.0;  // |dQ_A + dQ_B + dF_A + dF_B - W|
    double heat_sum = 0.0;           // dQ_A + dQ_B
    double external_work = 0.0;
    bool thermal_start = false;
    bool work_extracting = false;       // W < -tol
    bool heat_sum_bounded_by_work = false;  // dQ_A + dQ_B <= W + tol
    bool sign_rule_applicable = false;  // thermal uncorrelated start, W <= 0
    bool sign_rule_holds = false;       // sign(dQ_A) = -sign(dQ_B)
};

KelvinPlanckReport kelvin_planck_report(const ProcessRecord& record,
                                        double tol = 1e-9);

// Largest work an entropy-preserving process can draw from rho alone; equals
// the free energy.
double max_extractable_work(const DensityMatrix& rho,
                            const HermitianOperator& h);

// Asymptotic (infinitely large bath at inverse temperature beta) optimum
// F_beta(rho) - F_beta(gamma(beta)).
double work_with_thermal_bath(const DensityMatrix& rho,
                              const HermitianOperator& h, double beta);
// Finite-bath variant: free energy of rho (x) gamma_B(beta) under the joint
// Hamiltonian; never exceeds the asymptotic value.
double work_with_thermal_bath(const DensityMatrix& rho,
                              const HermitianOperator& h, double beta,
                              const HermitianOperator& h_bath);

struct ErasureReport {
    bool feasible = false;
    double entropy_to_erase = 0.0;   // S(rho_S)
    double bath_capacity = 0.0;      // ln d_B - S(rho_B)
    // External work of the minimal protocol, set when feasible; negative
    // values mean the erasure releases energy on balance.
    std::optional<double> work_cost;
};

// Erasure of rho_S into the ground state of h_s using a thermal bath rho_B;
// infeasible is a result, not an error.
ErasureReport erasure_feasibility(const DensityMatrix& rho_s,
                                  const HermitianOperator& h_s,
                                  const DensityMatrix& rho_b,
                                  const HermitianOperator& h_b,
                                  double thermal_tol = 1e-9);

// True when the endpoint ranks agree at eigenvalue threshold 1e-10; rank
// growth certifies the process was not unitary.
bool rank_preservation_check(const ProcessRecord& record);

}  // namespace qthermo
