#pragma once

#include <array>
#include <string>
#include <vector>

#include "qthermo/kernels.hpp"
#include "qthermo/lawbook.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {

struct DiagramPoint {
    double energy;
    double entropy;
    std::string label;
};

using BoundarySample = kernels::ThermalSample;

// Gibbs curve (E(beta), S(beta)) of a Hamiltonian, sampled densely near
// beta = 0 via a tangent grid and closed by the two pure-state endpoints.
// Samples are ordered by decreasing beta, i.e. increasing energy.
struct ThermalBoundary {
    RealVector spectrum;  // ascending eigenvalues
    double beta_max;
    std::vector<BoundarySample> samples;
    int peak_index;  // the exact beta = 0 sample

    double lambda_min() const { return spectrum(0); }
    double lambda_max() const { return spectrum(spectrum.size() - 1); }
    double max_entropy() const {
        return std::log(static_cast<double>(spectrum.size()));
    }
};

// beta grid: beta_max * tan(theta) / tan(theta_max) over a uniform theta
// grid, plus an exact beta = 0 sample and the two infinite-beta endpoints.
// beta_max <= 0 selects the default 50 / (lambda_max - lambda_min).
ThermalBoundary thermal_boundary(const HermitianOperator& h, int n_samples,
                                 double beta_max = 0.0);

DiagramPoint locate(const DensityMatrix& rho, const HermitianOperator& h,
                    std::string label = "");

// E on the beta >= 0 branch at the given entropy, by monotone cubic
// interpolation of the samples with the exact slopes dS/dE = beta. Entropies
// below the ground plateau return lambda_min; s > ln d throws.
double boundary_energy_at_entropy(const ThermalBoundary& boundary, double s);

// Horizontal distance from the point to the beta >= 0 branch. Positive
// inside the region; agrees with free_energy up to interpolation error.
double horizontal_free_energy(const DiagramPoint& point,
                              const ThermalBoundary& boundary);

// Slope dS/dE at the sample nearest to the energy, from the three-point
// difference weighted for the uneven grid. Energies at or beyond the
// spectrum edges throw.
double tangent_beta(const ThermalBoundary& boundary, double at_energy);

// Upper edge S of the physical region at the given energy (both branches of
// the curve), by the same slope-matched interpolation. E is clamped to
// [lambda_min, lambda_max].
double boundary_entropy_at_energy(const ThermalBoundary& boundary, double e);

// Membership in {lambda_min <= E <= lambda_max, 0 <= S <= S_upper(E)} with
// slack on every face.
bool point_in_region(const ThermalBoundary& boundary, const DiagramPoint& p,
                     double slack = 1e-9);

struct AnnotationSegment {
    double x0;
    double x1;
    double y;
    std::string label;
};

// The three heat notions of an applicable record as horizontal segments,
// anchored at the environment's initial (thermal) energy and drawn at its
// final entropy: [T dS_B, dQ, dE_B]. Throws when heat_bounds does not apply.
std::vector<AnnotationSegment> heat_geometry(const ProcessRecord& record);

enum class ExportFormat { Csv, Json, Svg };

// CSV: header `beta,energy,entropy`, full 17-digit round-trip precision.
// JSON: boundary + points + annotations at 12 significant digits.
// SVG: self-contained static figure. All three are byte-deterministic.
void export_diagram(const ThermalBoundary& boundary,
                    const std::vector<DiagramPoint>& points,
                    const std::vector<AnnotationSegment>& annotations,
                    ExportFormat format, const std::string& path);

// Reloads rows written by the CSV export as (beta, energy, entropy).
std::vector<std::array<double, 3>> import_boundary_csv(const std::string& path);

}  // namespace qthermo
