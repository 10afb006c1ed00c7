#pragma once

#include <vector>

#include "qthermo/qstate.hpp"

namespace qthermo {

// A bath made of n_cells identical, non-interacting copies of a unit cell,
// initially Gibbs at the given beta. Cycles keep each bath in Gibbs form, so
// the engine only ever tracks per-cell spectra and the two betas.
struct BathSpec {
    HermitianOperator cell;
    double beta = 1.0;
    long long n_cells = 1;
};

struct CyclePolicy {
    enum class Kind {
        FullEquilibration,  // one cycle reaches the common beta
        Fraction,           // each bath moves value * (equilibrium gap) in entropy
        EntropyQuantum,     // the cold bath absorbs min(value, full gap) nats
    };
    Kind kind = Kind::FullEquilibration;
    double value = 0.0;

    static CyclePolicy full() { return {Kind::FullEquilibration, 0.0}; }
    static CyclePolicy fraction(double f);
    static CyclePolicy entropy_quantum(double nats);
};

// bath_cold is the A side (larger beta), bath_hot the B side.
struct EngineConfig {
    BathSpec bath_cold;
    BathSpec bath_hot;
    CyclePolicy policy = CyclePolicy::full();
    int n_cycles = 1;

    EngineConfig(BathSpec cold, BathSpec hot,
                 CyclePolicy pol = CyclePolicy::full(), int cycles = 1);
};

struct EngineState {
    double beta_cold;
    double beta_hot;
};

struct CycleReport {
    double entropy_moved;  // nats absorbed by the cold bath
    double work;           // extracted by the external agent
    double d_energy_cold;
    double d_energy_hot;
    double d_bound_cold;
    double d_bound_hot;
    double heat_in;  // -d_energy_hot, energy taken from the hot bath
    double eta;      // work / heat_in, 0 for a zero-work cycle
    double eta_bound_general;
    double eta_carnot;  // from the betas at cycle start
    bool work_extracting;
    EngineState post;
};

// One entropy-preserving cycle acting on both baths; the working body returns
// to its own state and is not tracked. Equal betas give a zero-work report.
CycleReport run_cycle(const EngineConfig& config, const EngineState& state_in);

// n_cycles applications of run_cycle, threading the state through.
std::vector<CycleReport> run_engine(const EngineConfig& config);

// Common beta both baths reach under full equilibration from state_in.
double equilibrium_beta(const EngineConfig& config, const EngineState& state_in);

// 1 - d_bound_cold / (-d_bound_hot); requires d_bound_hot < 0.
double efficiency_bound_general(double d_bound_cold, double d_bound_hot);

// 1 - t_cold / t_hot; requires t_hot >= t_cold > 0.
double carnot_limit(double t_cold, double t_hot);

struct SweepPoint {
    long long n;  // bath size multiplier applied to both sides
    double eta;
    double gap;  // eta_carnot - eta
};

// Scales both baths by each n and runs a single cycle that moves the same
// absolute entropy as full equilibration of the unscaled config, so the n = 1
// point matches run_cycle's full-equilibration report and the Carnot gap
// shrinks as the baths grow.
std::vector<SweepPoint> sweep_bath_size(const EngineConfig& base,
                                        const std::vector<long long>& n_list);

}  // namespace qthermo
