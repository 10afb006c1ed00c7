#include "qthermo/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qthermo {

namespace {

// Solves sum_X S(gamma_X(beta)) = s_total over the shared bracket-and-bisect
// scheme used for single systems.
IntrinsicTemperature common_beta_for_entropy(
    const std::vector<const RealVector*>& spectra, double s_total) {
    double s_max = 0.0;
    double ln_g0 = 0.0;
    for (const RealVector* ev : spectra) {
        s_max += std::log(static_cast<double>(ev->size()));
        int g = 1;
        const double width = std::max(1.0, ev->maxCoeff() - ev->minCoeff());
        for (int i = 1; i < ev->size(); ++i) {
            if ((*ev)(i) <= (*ev)(0) + kDegeneracyTol * width) ++g;
        }
        ln_g0 += std::log(static_cast<double>(g));
    }
    if (s_total < -1e-9 || s_total > s_max + 1e-9) {
        std::ostringstream err;
        err << "total entropy " << s_total << " outside [0, " << s_max << "]";
        throw std::invalid_argument(err.str());
    }
    s_total = std::min(std::max(s_total, 0.0), s_max);
    if (s_max - s_total <= kGroundEntropyTol) {
        return IntrinsicTemperature::finite(0.0, s_max, s_max - s_total);
    }
    if (s_total <= ln_g0 + kGroundEntropyTol) {
        return IntrinsicTemperature::inf(s_total, std::abs(ln_g0 - s_total));
    }

    auto g = [&](double beta) {
        double s = 0.0;
        for (const RealVector* ev : spectra) s += gibbs_entropy(*ev, beta);
        return s - s_total;
    };

    double lo = 0.0, hi = 1.0;
    double g_hi = g(hi);
    while (g_hi > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBetaCap) {
            return IntrinsicTemperature::inf(s_total, std::abs(g(kBetaCap)));
        }
        g_hi = g(hi);
    }
    double mid = 0.5 * (lo + hi), g_mid = 0.0;
    for (int it = 0; it < kBisectionMaxIter; ++it) {
        mid = 0.5 * (lo + hi);
        g_mid = g(mid);
        (g_mid > 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, mid) &&
            std::abs(g_mid) <= kEntropyMatchTol) {
            break;
        }
    }
    return IntrinsicTemperature::finite(mid, s_total, std::abs(g_mid));
}

}  // namespace

CompositeSystem::CompositeSystem(std::vector<CompositePart> p, DensityMatrix s)
    : parts(std::move(p)), state(std::move(s)) {
    if (parts.empty()) {
        throw std::invalid_argument("composite system needs at least one part");
    }
    if (parts.size() != state.subsystem_dims().size()) {
        std::ostringstream err;
        err << "state declares " << state.subsystem_dims().size()
            << " subsystems but " << parts.size() << " parts were given";
        throw std::invalid_argument(err.str());
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].hamiltonian.dim() != state.subsystem_dims()[i]) {
            std::ostringstream err;
            err << "part '" << parts[i].label << "' has dim "
                << parts[i].hamiltonian.dim() << " but the state declares "
                << state.subsystem_dims()[i];
            throw std::invalid_argument(err.str());
        }
    }
}

EquilibrationResult equilibrate(const CompositeSystem& system) {
    std::vector<const RealVector*> spectra;
    spectra.reserve(system.parts.size());
    for (const CompositePart& part : system.parts) {
        spectra.push_back(&part.hamiltonian.eigenvalues());
    }
    const double s_total = entropy(system.state);
    const IntrinsicTemperature beta = common_beta_for_entropy(spectra, s_total);

    std::vector<HermitianOperator> hs;
    hs.reserve(system.parts.size());
    for (const CompositePart& part : system.parts) {
        hs.push_back(part.hamiltonian);
    }
    const HermitianOperator joint_h = join_hamiltonians(hs);
    const double e_initial = energy(system.state, joint_h);

    EquilibrationResult out{beta, {}, system.state, 0.0};
    if (!beta.infinite) {
        std::vector<DensityMatrix> per_part;
        per_part.reserve(system.parts.size());
        for (const CompositePart& part : system.parts) {
            per_part.push_back(gibbs_state(part.hamiltonian, beta.beta));
        }
        DensityMatrix joint = per_part[0];
        for (std::size_t i = 1; i < per_part.size(); ++i) {
            joint = tensor(joint, per_part[i]);
        }
        out.per_part_states = std::move(per_part);
        out.energy_released = e_initial - energy(joint, joint_h);
        out.joint_cp_state = std::move(joint);
        return out;
    }

    // Degenerate edge: the joint CP state lives in the joint ground space and
    // does not factorize; fall back to the canonical representative.
    DensityMatrix joint = completely_passive_state(system.state, joint_h);
    out.energy_released = e_initial - energy(joint, joint_h);
    out.joint_cp_state = std::move(joint);
    return out;
}

EquilibriumCheck is_equilibrium(const CompositeSystem& system, double tol) {
    std::vector<HermitianOperator> hs;
    for (const CompositePart& part : system.parts) {
        hs.push_back(part.hamiltonian);
    }
    const HermitianOperator joint_h = join_hamiltonians(hs);

    EquilibriumCheck check;
    check.free_energy_residual = free_energy(system.state, joint_h);
    check.equilibrium = check.free_energy_residual <= tol;
    const int n = static_cast<int>(system.parts.size());
    for (int i = 0; i < n; ++i) {
        const DensityMatrix marginal = partial_trace(system.state, {i});
        check.max_marginal_free_energy =
            std::max(check.max_marginal_free_energy,
                     free_energy(marginal, system.parts[i].hamiltonian));
    }
    if (n >= 2) {
        check.mutual_information = mutual_information(system.state, 1);
    }
    return check;
}

BetaOrderingResult beta_ordering_check(double beta_a, double beta_b,
                                       const HermitianOperator& h_a,
                                       const HermitianOperator& h_b,
                                       double tol) {
    if (beta_a < beta_b) std::swap(beta_a, beta_b);
    const DensityMatrix joint =
        tensor(gibbs_state(h_a, beta_a), gibbs_state(h_b, beta_b));
    CompositeSystem system({{"A", h_a}, {"B", h_b}}, joint);
    const EquilibrationResult eq = equilibrate(system);
    BetaOrderingResult out;
    out.beta_ab = eq.common_beta.infinite
                      ? std::numeric_limits<double>::infinity()
                      : eq.common_beta.beta;
    out.ordering_ok =
        (out.beta_ab >= beta_b - tol) && (out.beta_ab <= beta_a + tol);
    return out;
}

Lemma1Report verify_lemma1(const DensityMatrix& rho_ab,
                           const HermitianOperator& h_a,
                           const HermitianOperator& h_b) {
    if (rho_ab.subsystem_dims().size() != 2 ||
        rho_ab.subsystem_dims()[0] != h_a.dim() ||
        rho_ab.subsystem_dims()[1] != h_b.dim()) {
        throw std::invalid_argument(
            "verify_lemma1 needs a bipartite state matching the two "
            "hamiltonians");
    }
    const DensityMatrix rho_a = partial_trace(rho_ab, {0});
    const DensityMatrix rho_b = partial_trace(rho_ab, {1});
    const DensityMatrix product = tensor(rho_a, rho_b);
    const HermitianOperator joint_h = join_hamiltonians(h_a, h_b);

    const double b_joint = bound_energy(rho_ab, joint_h);
    const double b_product = bound_energy(product, joint_h);
    const double b_a = bound_energy(rho_a, h_a);
    const double b_b = bound_energy(rho_b, h_b);

    Lemma1Report rep;
    rep.p4 = b_product - b_joint;
    rep.p5 = b_a + b_b - b_product;
    // Marginals fix the non-interacting energy, so the free-energy margins
    // reduce to the bound-energy ones; computed independently anyway.
    rep.p6 = free_energy(rho_ab, joint_h) - free_energy(product, joint_h);
    rep.p7 = free_energy(product, joint_h) - free_energy(rho_a, h_a) -
             free_energy(rho_b, h_b);

    const IntrinsicTemperature ba = intrinsic_beta(rho_a, h_a);
    const IntrinsicTemperature bb = intrinsic_beta(rho_b, h_b);
    rep.beta_a = ba.infinite ? std::numeric_limits<double>::infinity() : ba.beta;
    rep.beta_b = bb.infinite ? std::numeric_limits<double>::infinity() : bb.beta;
    rep.beta_a_infinite = ba.infinite;
    rep.beta_b_infinite = bb.infinite;
    return rep;
}

}  // namespace qthermo
