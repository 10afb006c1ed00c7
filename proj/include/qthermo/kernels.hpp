#pragma once

#include <vector>

#include "qthermo/qstate.hpp"

namespace qthermo {

// Scalar Gibbs arithmetic over a bare spectrum. All of it uses the max-shift
// trick: exponents are taken relative to lambda_min for beta >= 0 and
// lambda_max for beta < 0, so no overflow for any finite beta.
RealVector gibbs_populations(const RealVector& evals, double beta);
double gibbs_energy(const RealVector& evals, double beta);
double gibbs_entropy(const RealVector& evals, double beta);
// ln Z relative to the shift: ln sum_i exp(-beta (lambda_i - shift)).
double shifted_log_partition(const RealVector& evals, double beta);

namespace kernels {

enum class Execution { Serial, Parallel };

// Returns the default execution policy: Parallel when compiled with OpenMP.
Execution default_execution();

struct BandMin {
    double energy;     // +inf when no grid point was feasible
    long long index;   // flattened grid index, -1 when none
};

// Scans p_i = lo + i * (hi - lo) / n, i = 0..n, states (p, 1-p) against the
// ascending two-level spectrum. A point is feasible when |H(p) - s_target|
// is within the larger entropy change to its grid neighbours plus
// slack_floor. Ties break toward the smaller index, so Serial and Parallel
// return identical bits.
BandMin scan_entropy_band_d2(double lambda0, double lambda1, double s_target,
                             double lo, double hi, long long n,
                             double slack_floor, Execution exec);

// Same contract on the 2-simplex: points (p0, p1, 1-p0-p1) with
// p0 = x_lo + i*dx (i = 0..nx), p1 = y_lo + j*dy (j = 0..ny); points leaving
// the simplex are skipped. index = i * (ny + 1) + j.
BandMin scan_entropy_band_d3(double l0, double l1, double l2, double s_target,
                             double x_lo, double dx, long long nx,
                             double y_lo, double dy, long long ny,
                             double slack_floor, Execution exec);

struct ThermalSample {
    double beta;
    double energy;
    double entropy;
    // Distances to the spectrum edges, accumulated from non-negative terms.
    // Near pure states `energy` saturates at an eigenvalue and differences of
    // it lose all precision; these stay exact to machine epsilon instead.
    double energy_above_min;
    double energy_below_max;
};

// Evaluates (E, S) of the Gibbs state at every requested beta.
std::vector<ThermalSample> sample_thermal_curve(const RealVector& evals,
                                                const std::vector<double>& betas,
                                                Execution exec);

}  // namespace kernels
}  // namespace qthermo
