#pragma once

#include <optional>

#include "qthermo/diagram.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {

// Asymptotic conversion of n copies of the source into r*n copies of the
// target plus (1-r)*n copies of a residue, all drawn from copies of the same
// unit cell. Everything happens in the energy-entropy plane: per-copy points
// must combine as x_source = r * x_target + (1 - r) * x_residue with the
// residue inside the physical region of the cell.
struct ConversionProblem {
    DiagramPoint source;
    DiagramPoint target;
    HermitianOperator cell;
    int boundary_samples = 512;
};

enum class ResidueKind {
    Pure,      // residue sits on the S = 0 axis
    Thermal,   // residue sits on the thermal curve or a degeneracy plateau
    Interior,  // no boundary residue was needed (coincident endpoints)
};

struct ConversionResult {
    double rate = 0.0;
    DiagramPoint residue;
    ResidueKind residue_kind = ResidueKind::Interior;
    // Endpoints coincide: the rate saturates at 1 and no residue is consumed;
    // the residue field just echoes the source.
    bool capped = false;
    // Source and target share an entropy, so the rate came from the energy
    // coordinates instead of the entropy coordinates.
    bool horizontal_ray = false;
};

// Rate dictated by entropy alone, S(source)/S(target). Returns nothing when
// the target is pure but the source is not: no finite number of pure copies
// carries the source's entropy.
std::optional<double> entropy_only_rate(double s_source, double s_target);
std::optional<double> entropy_only_rate(const DensityMatrix& source,
                                        const DensityMatrix& target);

struct ResiduePoint {
    DiagramPoint point;
    bool physical = false;
};

// Solve x_source = rate * x_target + (1 - rate) * x_residue for the residue.
// Requires 0 < rate < 1; rate = 1 leaves the residue undetermined.
ResiduePoint residue_from_rate(const DiagramPoint& source,
                               const DiagramPoint& target, double rate,
                               const ThermalBoundary& boundary);

struct CollinearityReport {
    double de = 0.0;  // E residual of the convex combination
    double ds = 0.0;  // S residual of the convex combination
    bool between = false;  // rate lies in [0, 1]
};

CollinearityReport collinearity_residual(const DiagramPoint& source,
                                         const DiagramPoint& target,
                                         const DiagramPoint& residue,
                                         double rate);

// Largest rate with a physical residue: the residue is where the ray from
// the target through the source, extended past the source, leaves the
// region. Exits through the S = 0 axis pin the residue entropy to exactly
// zero, so the rate reduces to S(source)/S(target) there; exits through a
// degeneracy plateau pin the residue energy to the spectrum edge. Both
// endpoints must lie inside the region.
ConversionResult max_conversion_rate(const ConversionProblem& problem);

}  // namespace qthermo
