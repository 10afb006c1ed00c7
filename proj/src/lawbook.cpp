#include "qthermo/lawbook.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qthermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bipartite(const DensityMatrix& rho, const HermitianOperator& ha,
                     const HermitianOperator& hb, const char* what) {
    const auto& dims = rho.subsystem_dims();
    if (dims.size() != 2 || dims[0] != ha.dim() || dims[1] != hb.dim()) {
        std::ostringstream err;
        err << what << " must be bipartite with subsystem_dims [" << ha.dim()
            << ", " << hb.dim() << "]";
        throw std::invalid_argument(err.str());
    }
}

}  // namespace

ProcessRecord::ProcessRecord(HermitianOperator ha, HermitianOperator hb,
                             DensityMatrix before, DensityMatrix after,
                             double ep_tol)
    : h_system(std::move(ha)),
      h_environment(std::move(hb)),
      initial(std::move(before)),
      final(std::move(after)),
      entropy_tolerance(ep_tol) {
    check_bipartite(initial, h_system, h_environment, "initial state");
    check_bipartite(final, h_system, h_environment, "final state");
}

EpValidation validate_ep(const ProcessRecord& record) {
    const double residual =
        std::abs(entropy(record.final) - entropy(record.initial));
    return EpValidation{residual <= record.entropy_tolerance, residual};
}

Ledger compute_ledger(const ProcessRecord& record) {
    const DensityMatrix a0 = partial_trace(record.initial, {0});
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const DensityMatrix a1 = partial_trace(record.final, {0});
    const DensityMatrix b1 = partial_trace(record.final, {1});

    Ledger led;
    led.d_energy_a = energy(a1, record.h_system) - energy(a0, record.h_system);
    led.d_energy_b =
        energy(b1, record.h_environment) - energy(b0, record.h_environment);
    led.d_bound_a = bound_energy(a1, record.h_system) -
                    bound_energy(a0, record.h_system);
    led.d_bound_b = bound_energy(b1, record.h_environment) -
                    bound_energy(b0, record.h_environment);
    led.d_free_a = (energy(a1, record.h_system) - bound_energy(a1, record.h_system)) -
                   (energy(a0, record.h_system) - bound_energy(a0, record.h_system));
    led.d_free_b = (energy(b1, record.h_environment) -
                    bound_energy(b1, record.h_environment)) -
                   (energy(b0, record.h_environment) -
                    bound_energy(b0, record.h_environment));
    led.d_entropy_a = entropy(a1) - entropy(a0);
    led.d_entropy_b = entropy(b1) - entropy(b0);
    const double i0 = entropy(a0) + entropy(b0) - entropy(record.initial);
    const double i1 = entropy(a1) + entropy(b1) - entropy(record.final);
    led.d_mutual_information = i1 - i0;
    led.external_work = led.d_energy_a + led.d_energy_b;
    led.heat = led.d_bound_b;
    led.work_on_system = led.external_work - led.d_free_b;
    led.entropy_residual = validate_ep(record).residual;

    const IntrinsicTemperature ba = intrinsic_beta(a0, record.h_system);
    const IntrinsicTemperature bb = intrinsic_beta(b0, record.h_environment);
    led.beta_a = ba.infinite ? kInf : ba.beta;
    led.beta_b = bb.infinite ? kInf : bb.beta;
    led.beta_a_infinite = ba.infinite;
    led.beta_b_infinite = bb.infinite;
    return led;
}

double heat(const ProcessRecord& record) {
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const DensityMatrix b1 = partial_trace(record.final, {1});
    return bound_energy(b1, record.h_environment) -
           bound_energy(b0, record.h_environment);
}

double external_work(const ProcessRecord& record) {
    const HermitianOperator joint =
        join_hamiltonians(record.h_system, record.h_environment);
    return energy(record.final, joint) - energy(record.initial, joint);
}

double work_on_system(const ProcessRecord& record) {
    const Ledger led = compute_ledger(record);
    return led.work_on_system;
}

double first_law_residual(const ProcessRecord& record) {
    const Ledger led = compute_ledger(record);
    return std::abs(led.d_energy_a - (led.work_on_system - led.heat));
}

HeatBounds heat_bounds(const ProcessRecord& record, double thermal_tol) {
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const DensityMatrix b1 = partial_trace(record.final, {1});

    HeatBounds hb;
    hb.heat = bound_energy(b1, record.h_environment) -
              bound_energy(b0, record.h_environment);
    hb.upper = energy(b1, record.h_environment) -
               energy(b0, record.h_environment);

    const double f_env = energy(b0, record.h_environment) -
                         bound_energy(b0, record.h_environment);
    if (f_env > thermal_tol) {
        hb.reason = "initial environment is not thermal (free energy " +
                    std::to_string(f_env) + ")";
        return hb;
    }
    const IntrinsicTemperature bb = intrinsic_beta(b0, record.h_environment);
    if (!bb.infinite && bb.beta == 0.0) {
        hb.reason = "initial environment at beta = 0 has no finite temperature";
        return hb;
    }
    hb.applicable = true;
    hb.beta_env = bb.infinite ? kInf : bb.beta;
    const double t_env = bb.temperature();
    hb.lower = t_env * (entropy(b1) - entropy(b0));
    return hb;
}

ClausiusReport clausius_report(const ProcessRecord& record,
                               double premise_tol) {
    const Ledger led = compute_ledger(record);

    ClausiusReport rep;
    rep.d_entropy_a = led.d_entropy_a;
    rep.d_mutual_information = led.d_mutual_information;
    rep.beta_a = led.beta_a;
    rep.beta_b = led.beta_b;

    const double balance = led.d_free_a + led.d_free_b - led.external_work;
    if (!led.beta_a_infinite && !led.beta_b_infinite) {
        rep.margin_beta_applicable = true;
        rep.margin_beta = (led.beta_a - led.beta_b) * led.d_entropy_a -
                          led.beta_a * led.beta_b * balance -
                          led.beta_a * led.d_mutual_information;
        rep.std_margin_beta = (led.beta_a - led.beta_b) * led.d_entropy_a;
    }
    if (led.beta_a > 0.0 && led.beta_b > 0.0) {
        const double t_a = led.beta_a_infinite ? 0.0 : 1.0 / led.beta_a;
        const double t_b = led.beta_b_infinite ? 0.0 : 1.0 / led.beta_b;
        rep.margin_temperature_applicable = true;
        rep.margin_temperature = (t_b - t_a) * led.d_entropy_a - balance -
                                 t_b * led.d_mutual_information;
        rep.std_margin_temperature = (t_b - t_a) * led.d_entropy_a;
    }

    const DensityMatrix a0 = partial_trace(record.initial, {0});
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const double i0 = entropy(a0) + entropy(b0) - entropy(record.initial);
    const double f_a0 = energy(a0, record.h_system) -
                        bound_energy(a0, record.h_system);
    const double f_b0 = energy(b0, record.h_environment) -
                        bound_energy(b0, record.h_environment);
    rep.std_premises_hold = i0 <= premise_tol && f_a0 <= premise_tol &&
                            f_b0 <= premise_tol &&
                            std::abs(led.external_work) <= premise_tol;
    return rep;
}

KelvinPlanckReport kelvin_planck_report(const ProcessRecord& record,
                                        double tol) {
    const Ledger led = compute_ledger(record);

    KelvinPlanckReport rep;
    rep.heat_sum = led.d_bound_a + led.d_bound_b;
    rep.external_work = led.external_work;
    rep.identity_residual = std::abs(rep.heat_sum + led.d_free_a +
                                     led.d_free_b - led.external_work);

    const DensityMatrix a0 = partial_trace(record.initial, {0});
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const double f_a0 = energy(a0, record.h_system) -
                        bound_energy(a0, record.h_system);
    const double f_b0 = energy(b0, record.h_environment) -
                        bound_energy(b0, record.h_environment);
    const double i0 = entropy(a0) + entropy(b0) - entropy(record.initial);

    rep.thermal_start = f_a0 <= tol && f_b0 <= tol;
    rep.work_extracting = led.external_work < -tol;
    rep.heat_sum_bounded_by_work = rep.heat_sum <= led.external_work + tol;
    // Anti-aligned heat flow is claimed for spontaneous exchange: thermal
    // uncorrelated start and no external work pumped in.
    rep.sign_rule_applicable =
        rep.thermal_start && i0 <= tol && led.external_work <= tol;
    const double qa = led.d_bound_a, qb = led.d_bound_b;
    rep.sign_rule_holds = (qa >= -tol && qb <= tol) || (qa <= tol && qb >= -tol);
    return rep;
}

double max_extractable_work(const DensityMatrix& rho,
                            const HermitianOperator& h) {
    return free_energy(rho, h);
}

double work_with_thermal_bath(const DensityMatrix& rho,
                              const HermitianOperator& h, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("bath beta must be positive and finite");
    }
    return helmholtz_free_energy(rho, h, beta) -
           helmholtz_free_energy(gibbs_state(h, beta), h, beta);
}

double work_with_thermal_bath(const DensityMatrix& rho,
                              const HermitianOperator& h, double beta,
                              const HermitianOperator& h_bath) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("bath beta must be positive and finite");
    }
    const DensityMatrix joint = tensor(rho, gibbs_state(h_bath, beta));
    return free_energy(joint, join_hamiltonians(h, h_bath));
}

ErasureReport erasure_feasibility(const DensityMatrix& rho_s,
                                  const HermitianOperator& h_s,
                                  const DensityMatrix& rho_b,
                                  const HermitianOperator& h_b,
                                  double thermal_tol) {
    const double f_b = free_energy(rho_b, h_b);
    if (f_b > thermal_tol) {
        std::ostringstream err;
        err << "erasure bath must be thermal; free energy " << f_b
            << " exceeds " << thermal_tol;
        throw std::invalid_argument(err.str());
    }

    ErasureReport rep;
    rep.entropy_to_erase = entropy(rho_s);
    rep.bath_capacity =
        std::log(static_cast<double>(h_b.dim())) - entropy(rho_b);
    rep.feasible = rep.entropy_to_erase <= rep.bath_capacity + 1e-12;
    if (!rep.feasible) {
        return rep;
    }

    // Final bath: completely passive state absorbing all erased entropy.
    const double s_final = rep.entropy_to_erase + entropy(rho_b);
    const DensityMatrix bath_final =
        completely_passive_state_for_entropy(s_final, h_b);

    // System ends in the ground state of h_s.
    Matrix ground = Matrix::Zero(h_s.dim(), h_s.dim());
    const Matrix v0 = h_s.eigenvectors().col(0);
    ground = v0 * v0.adjoint();
    const DensityMatrix sys_final{0.5 * (ground + Matrix(ground.adjoint()))};

    // External work of the minimal entropy-preserving protocol: the total
    // energy difference between the endpoints. Can be negative when the
    // system surrenders more bound energy than the bath soaks up.
    rep.work_cost = (energy(sys_final, h_s) + energy(bath_final, h_b)) -
                    (energy(rho_s, h_s) + energy(rho_b, h_b));
    return rep;
}

bool rank_preservation_check(const ProcessRecord& record) {
    return record.initial.rank() == record.final.rank();
}

}  // namespace qthermo
