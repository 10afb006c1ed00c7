#include "qthermo/engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qthermo/kernels.hpp"
#include "qthermo/passive.hpp"

namespace qthermo {

namespace {

// Total entropy of the pair of Gibbs baths at a shared beta.
double joint_entropy_at(const EngineConfig& cfg, double beta) {
    return static_cast<double>(cfg.bath_cold.n_cells) *
               gibbs_entropy(cfg.bath_cold.cell.eigenvalues(), beta) +
           static_cast<double>(cfg.bath_hot.n_cells) *
               gibbs_entropy(cfg.bath_hot.cell.eigenvalues(), beta);
}

double bath_entropy(const BathSpec& bath, double beta) {
    return static_cast<double>(bath.n_cells) *
           gibbs_entropy(bath.cell.eigenvalues(), beta);
}

double bath_energy(const BathSpec& bath, double beta) {
    return static_cast<double>(bath.n_cells) *
           gibbs_energy(bath.cell.eigenvalues(), beta);
}

// Bound energy of a Gibbs bath, reconstructed from its entropy alone so the
// report exercises the same route non-thermal states would take.
double bath_bound_energy(const BathSpec& bath, double beta) {
    const double s_cell = gibbs_entropy(bath.cell.eigenvalues(), beta);
    return static_cast<double>(bath.n_cells) *
           bound_energy_for_entropy(s_cell, bath.cell.eigenvalues());
}

// Beta of the bath once its total entropy changed by ds.
double bath_beta_after(const BathSpec& bath, double beta, double ds) {
    const double s_cell = gibbs_entropy(bath.cell.eigenvalues(), beta) +
                          ds / static_cast<double>(bath.n_cells);
    const IntrinsicTemperature it =
        intrinsic_beta_for_entropy(s_cell, bath.cell.eigenvalues());
    if (it.infinite) {
        std::ostringstream err;
        err << "bath entropy step " << ds << " drives the spectrum to beta = "
            << "+inf; shrink the cycle step";
        throw std::domain_error(err.str());
    }
    return it.beta;
}

}  // namespace

CyclePolicy CyclePolicy::fraction(double f) {
    if (!(f > 0.0) || f > 1.0) {
        throw std::invalid_argument("cycle fraction must lie in (0, 1]");
    }
    return {Kind::Fraction, f};
}

CyclePolicy CyclePolicy::entropy_quantum(double nats) {
    if (!(nats > 0.0)) {
        throw std::invalid_argument("entropy quantum must be positive");
    }
    return {Kind::EntropyQuantum, nats};
}

EngineConfig::EngineConfig(BathSpec cold, BathSpec hot, CyclePolicy pol,
                           int cycles)
    : bath_cold(std::move(cold)),
      bath_hot(std::move(hot)),
      policy(pol),
      n_cycles(cycles) {
    if (!(bath_cold.beta > 0.0) || !std::isfinite(bath_cold.beta) ||
        !(bath_hot.beta > 0.0) || !std::isfinite(bath_hot.beta)) {
        throw std::invalid_argument("bath betas must be positive and finite");
    }
    if (bath_cold.beta < bath_hot.beta) {
        std::ostringstream err;
        err << "cold bath must have the larger beta (got cold "
            << bath_cold.beta << " < hot " << bath_hot.beta << ")";
        throw std::invalid_argument(err.str());
    }
    if (bath_cold.n_cells < 1 || bath_hot.n_cells < 1) {
        throw std::invalid_argument("bath cell counts must be >= 1");
    }
    if (n_cycles < 1) {
        throw std::invalid_argument("n_cycles must be >= 1");
    }
}

double equilibrium_beta(const EngineConfig& config,
                        const EngineState& state_in) {
    const double s_total = bath_entropy(config.bath_cold, state_in.beta_cold) +
                           bath_entropy(config.bath_hot, state_in.beta_hot);
    double lo = std::min(state_in.beta_cold, state_in.beta_hot);
    double hi = std::max(state_in.beta_cold, state_in.beta_hot);
    if (hi - lo <= 0.0) return lo;
    // joint entropy decreases in beta; root lies inside [beta_hot, beta_cold]
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (joint_entropy_at(config, mid) > s_total ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, mid)) break;
    }
    return 0.5 * (lo + hi);
}

CycleReport run_cycle(const EngineConfig& config, const EngineState& state_in) {
    CycleReport rep{};
    rep.post = state_in;
    // Equilibrated states can land a rounding error past each other; clamp
    // instead of rejecting so multi-cycle runs settle at eta_carnot = 0.
    rep.eta_carnot =
        state_in.beta_cold >= state_in.beta_hot
            ? carnot_limit(1.0 / state_in.beta_cold, 1.0 / state_in.beta_hot)
            : 0.0;

    const double beta_ab = equilibrium_beta(config, state_in);
    const double ds_full =
        bath_entropy(config.bath_cold, beta_ab) -
        bath_entropy(config.bath_cold, state_in.beta_cold);
    double ds = ds_full;
    switch (config.policy.kind) {
        case CyclePolicy::Kind::FullEquilibration:
            break;
        case CyclePolicy::Kind::Fraction:
            ds = config.policy.value * ds_full;
            break;
        case CyclePolicy::Kind::EntropyQuantum:
            ds = std::min(config.policy.value, ds_full);
            break;
    }
    if (!(ds > 0.0)) {
        return rep;  // equal betas: nothing to move, zero-work cycle
    }

    const double bc0 = state_in.beta_cold, bh0 = state_in.beta_hot;
    const double bc1 = bath_beta_after(config.bath_cold, bc0, ds);
    const double bh1 = bath_beta_after(config.bath_hot, bh0, -ds);

    rep.entropy_moved = ds;
    rep.d_energy_cold =
        bath_energy(config.bath_cold, bc1) - bath_energy(config.bath_cold, bc0);
    rep.d_energy_hot =
        bath_energy(config.bath_hot, bh1) - bath_energy(config.bath_hot, bh0);
    rep.d_bound_cold = bath_bound_energy(config.bath_cold, bc1) -
                       bath_bound_energy(config.bath_cold, bc0);
    rep.d_bound_hot = bath_bound_energy(config.bath_hot, bh1) -
                      bath_bound_energy(config.bath_hot, bh0);
    rep.work = -(rep.d_energy_cold + rep.d_energy_hot);
    rep.heat_in = -rep.d_energy_hot;
    rep.work_extracting = rep.work > 0.0 && rep.heat_in > 0.0;
    rep.eta = rep.work_extracting ? rep.work / rep.heat_in : 0.0;
    rep.eta_bound_general = (rep.d_bound_hot < 0.0)
                                ? efficiency_bound_general(rep.d_bound_cold,
                                                           rep.d_bound_hot)
                                : 0.0;
    rep.post = EngineState{bc1, bh1};
    return rep;
}

std::vector<CycleReport> run_engine(const EngineConfig& config) {
    std::vector<CycleReport> out;
    out.reserve(static_cast<size_t>(config.n_cycles));
    EngineState state{config.bath_cold.beta, config.bath_hot.beta};
    for (int c = 0; c < config.n_cycles; ++c) {
        out.push_back(run_cycle(config, state));
        state = out.back().post;
    }
    return out;
}

double efficiency_bound_general(double d_bound_cold, double d_bound_hot) {
    if (!(d_bound_hot < 0.0)) {
        std::ostringstream err;
        err << "hot bath must lose bound energy; got d_bound_hot = "
            << d_bound_hot;
        throw std::invalid_argument(err.str());
    }
    return 1.0 - d_bound_cold / (-d_bound_hot);
}

double carnot_limit(double t_cold, double t_hot) {
    if (!(t_cold > 0.0) || !(t_hot >= t_cold)) {
        std::ostringstream err;
        err << "need t_hot >= t_cold > 0; got t_cold = " << t_cold
            << ", t_hot = " << t_hot;
        throw std::invalid_argument(err.str());
    }
    return 1.0 - t_cold / t_hot;
}

std::vector<SweepPoint> sweep_bath_size(const EngineConfig& base,
                                        const std::vector<long long>& n_list) {
    const EngineState start{base.bath_cold.beta, base.bath_hot.beta};
    const double beta_ab = equilibrium_beta(base, start);
    const double quantum = bath_entropy(base.bath_cold, beta_ab) -
                           bath_entropy(base.bath_cold, start.beta_cold);

    std::vector<SweepPoint> table;
    table.reserve(n_list.size());
    for (long long n : n_list) {
        if (n < 1) {
            throw std::invalid_argument("sweep sizes must be >= 1");
        }
        BathSpec cold = base.bath_cold;
        BathSpec hot = base.bath_hot;
        cold.n_cells *= n;
        hot.n_cells *= n;
        EngineConfig cfg(std::move(cold), std::move(hot),
                         quantum > 0.0 ? CyclePolicy::entropy_quantum(quantum)
                                       : CyclePolicy::full(),
                         1);
        const CycleReport rep = run_cycle(cfg, start);
        table.push_back(SweepPoint{n, rep.eta, rep.eta_carnot - rep.eta});
    }
    return table;
}

}  // namespace qthermo
