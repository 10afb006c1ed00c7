#include "qthermo/resource.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qthermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPureTol = 1e-12;

void require_inside(const ThermalBoundary& boundary, const DiagramPoint& p,
                    const char* which) {
    if (!point_in_region(boundary, p, 1e-6)) {
        std::ostringstream err;
        err << which << " point (E=" << p.energy << ", S=" << p.entropy
            << ") lies outside the physical region of the cell";
        throw std::invalid_argument(err.str());
    }
}

}  // namespace

std::optional<double> entropy_only_rate(double s_source, double s_target) {
    if (s_source < -kPureTol || s_target < -kPureTol) {
        throw std::invalid_argument("entropies must be non-negative");
    }
    s_source = std::max(s_source, 0.0);
    s_target = std::max(s_target, 0.0);
    if (s_target <= kPureTol) {
        if (s_source <= kPureTol) return 1.0;
        return std::nullopt;
    }
    return s_source / s_target;
}

std::optional<double> entropy_only_rate(const DensityMatrix& source,
                                        const DensityMatrix& target) {
    return entropy_only_rate(entropy(source), entropy(target));
}

ResiduePoint residue_from_rate(const DiagramPoint& source,
                               const DiagramPoint& target, double rate,
                               const ThermalBoundary& boundary) {
    if (!(rate > 0.0) || !(rate < 1.0)) {
        std::ostringstream err;
        err << "rate must lie strictly between 0 and 1, got " << rate;
        throw std::invalid_argument(err.str());
    }
    ResiduePoint out;
    out.point.energy = (source.energy - rate * target.energy) / (1.0 - rate);
    out.point.entropy = (source.entropy - rate * target.entropy) / (1.0 - rate);
    out.point.label = "residue";
    out.physical = point_in_region(boundary, out.point, 1e-9);
    return out;
}

CollinearityReport collinearity_residual(const DiagramPoint& source,
                                         const DiagramPoint& target,
                                         const DiagramPoint& residue,
                                         double rate) {
    CollinearityReport rep;
    rep.de = source.energy - rate * target.energy -
             (1.0 - rate) * residue.energy;
    rep.ds = source.entropy - rate * target.entropy -
             (1.0 - rate) * residue.entropy;
    rep.between = rate >= 0.0 && rate <= 1.0;
    return rep;
}

ConversionResult max_conversion_rate(const ConversionProblem& problem) {
    const ThermalBoundary boundary =
        thermal_boundary(problem.cell, problem.boundary_samples);
    const DiagramPoint& src = problem.source;
    const DiagramPoint& tgt = problem.target;
    require_inside(boundary, src, "source");
    require_inside(boundary, tgt, "target");

    const double lam_min = boundary.lambda_min();
    const double lam_max = boundary.lambda_max();
    const double span = lam_max - lam_min;
    const double s_max = boundary.max_entropy();
    const double e_scale = std::max(1.0, span);
    const double s_scale = std::max(1.0, s_max);

    const double de = src.energy - tgt.energy;
    const double ds = src.entropy - tgt.entropy;

    ConversionResult res;
    res.horizontal_ray = std::abs(ds) <= 1e-12 * s_scale;
    if (res.horizontal_ray && std::abs(de) <= 1e-12 * e_scale) {
        res.rate = 1.0;
        res.residue = src;
        res.residue.label = "residue";
        res.residue_kind = ResidueKind::Interior;
        res.capped = true;
        res.horizontal_ray = false;
        return res;
    }

    // Ray point P(t) = src + t * (src - tgt) for t >= 0; the region is
    // convex, so the ray stays inside up to a single exit parameter.
    const double t_s0 = ds < 0.0 ? src.entropy / -ds : kInf;
    const double t_emin = de < 0.0 ? (src.energy - lam_min) / -de : kInf;
    const double t_emax = de > 0.0 ? (lam_max - src.energy) / de : kInf;
    const double t_box = std::min({t_s0, t_emin, t_emax});
    const double t_lnd = ds > 0.0 ? (s_max - src.entropy) / ds : kInf;
    const double t_bound = std::min(t_box, t_lnd);

    const auto curve_gap = [&](double t) {
        const double e = src.energy + t * de;
        const double s = src.entropy + t * ds;
        return boundary_entropy_at_energy(boundary, e) - s;
    };

    double t_curve = kInf;
    if (curve_gap(t_bound) < 0.0) {
        double lo = 0.0, hi = t_bound;
        for (int it = 0; it < 120 && hi - lo > 1e-12 * std::max(1.0, hi);
             ++it) {
            const double mid = 0.5 * (lo + hi);
            (curve_gap(mid) >= 0.0 ? lo : hi) = mid;
        }
        t_curve = 0.5 * (lo + hi);
    } else if (t_lnd < t_box) {
        t_curve = t_lnd;  // the ray tops out exactly at the entropy peak
    }

    const double t_star = std::min(t_box, t_curve);
    const double t_tol = 1e-9 * std::max(1.0, t_star);

    DiagramPoint phi;
    phi.label = "residue";
    ResidueKind kind;
    if (t_s0 <= t_star + t_tol) {
        phi.energy = std::min(std::max(src.energy + t_s0 * de, lam_min),
                              lam_max);
        phi.entropy = 0.0;
        kind = ResidueKind::Pure;
    } else if (t_emin <= t_star + t_tol || t_emax <= t_star + t_tol) {
        const double t_edge = std::min(t_emin, t_emax);
        phi.energy = t_emin <= t_emax ? lam_min : lam_max;
        phi.entropy = std::max(src.entropy + t_edge * ds, 0.0);
        kind = phi.entropy <= kPureTol ? ResidueKind::Pure
                                       : ResidueKind::Thermal;
    } else {
        phi.energy = src.energy + t_curve * de;
        phi.entropy = src.entropy + t_curve * ds;
        kind = ResidueKind::Thermal;
    }

    double rate;
    if (kind == ResidueKind::Pure && tgt.entropy > kPureTol) {
        rate = src.entropy / tgt.entropy;
    } else {
        const double den_s = tgt.entropy - phi.entropy;
        const double den_e = tgt.energy - phi.energy;
        if (std::abs(den_s) * e_scale >= std::abs(den_e) * s_scale) {
            rate = (src.entropy - phi.entropy) / den_s;
        } else {
            rate = (src.energy - phi.energy) / den_e;
        }
    }
    res.rate = std::min(std::max(rate, 0.0), 1.0);
    res.residue = phi;
    res.residue_kind = kind;
    return res;
}

}  // namespace qthermo
