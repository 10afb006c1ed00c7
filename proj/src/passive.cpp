#include "qthermo/passive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace qthermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_ground_degeneracy(const RealVector& evals) {
    const int d = static_cast<int>(evals.size());
    const double width = std::max(1.0, evals(d - 1) - evals(0));
    const double cut = evals(0) + kDegeneracyTol * width;
    int g = 0;
    for (int i = 0; i < d; ++i) {
        if (evals(i) <= cut) ++g;
    }
    return std::log(static_cast<double>(g));
}

}  // namespace

double IntrinsicTemperature::temperature() const {
    if (infinite) return 0.0;
    if (beta == 0.0) return kInf;
    return 1.0 / beta;
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
    if (!std::isfinite(beta)) {
        throw std::invalid_argument(
            "gibbs_state needs finite beta; use completely_passive_state for "
            "the beta = +inf representative");
    }
    const RealVector w = gibbs_populations(h.eigenvalues(), beta);
    const Matrix& v = h.eigenvectors();
    Matrix rho = v * w.asDiagonal() * v.adjoint();
    rho = 0.5 * (rho + Matrix(rho.adjoint()));
    return DensityMatrix(std::move(rho));
}

IntrinsicTemperature intrinsic_beta_for_entropy(double s,
                                                const RealVector& evals) {
    const int d = static_cast<int>(evals.size());
    const double s_max = std::log(static_cast<double>(d));
    if (s < -1e-9 || s > s_max + 1e-9) {
        std::ostringstream err;
        err << "entropy " << s << " outside [0, ln " << d << " = " << s_max
            << "]";
        throw std::invalid_argument(err.str());
    }
    s = std::min(std::max(s, 0.0), s_max);

    if (s_max - s <= kGroundEntropyTol) {
        return IntrinsicTemperature::finite(0.0, s_max, s_max - s);
    }
    const double ln_g0 = log_ground_degeneracy(evals);
    if (s <= ln_g0 + kGroundEntropyTol) {
        return IntrinsicTemperature::inf(s, std::abs(ln_g0 - s));
    }

    auto g = [&](double beta) { return gibbs_entropy(evals, beta) - s; };

    double lo = 0.0, hi = 1.0;
    double g_hi = g(hi);
    while (g_hi > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBetaCap) {
            return IntrinsicTemperature::inf(s, std::abs(g(kBetaCap)));
        }
        g_hi = g(hi);
    }

    double mid = 0.5 * (lo + hi);
    double g_mid = g(mid);
    for (int it = 0; it < kBisectionMaxIter; ++it) {
        mid = 0.5 * (lo + hi);
        g_mid = g(mid);
        if (g_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, mid) &&
            std::abs(g_mid) <= kEntropyMatchTol) {
            break;
        }
    }
    return IntrinsicTemperature::finite(mid, s, std::abs(g_mid));
}

IntrinsicTemperature intrinsic_beta(const DensityMatrix& rho,
                                    const HermitianOperator& h) {
    if (rho.dim() != h.dim()) {
        throw std::invalid_argument("state and hamiltonian dims differ");
    }
    return intrinsic_beta_for_entropy(entropy(rho), h.eigenvalues());
}

DensityMatrix completely_passive_state(const DensityMatrix& rho,
                                       const HermitianOperator& h) {
    if (rho.dim() != h.dim()) {
        throw std::invalid_argument("state and hamiltonian dims differ");
    }
    return completely_passive_state_for_entropy(entropy(rho), h);
}

DensityMatrix completely_passive_state_for_entropy(double s,
                                                   const HermitianOperator& h) {
    const IntrinsicTemperature it = intrinsic_beta_for_entropy(s, h.eigenvalues());
    if (!it.infinite) {
        return gibbs_state(h, it.beta);
    }

    const int d = h.dim();
    const int g0 = h.ground_degeneracy();

    RealVector pops = RealVector::Zero(d);
    if (g0 == 1 || s <= kGroundEntropyTol) {
        pops(0) = 1.0;
    } else {
        // two-level split (p, (1-p)/(g0-1), ...) over the ground space
        auto split_entropy = [&](double p) {
            const double q = (1.0 - p) / static_cast<double>(g0 - 1);
            double out = 0.0;
            if (p > 0.0) out -= p * std::log(p);
            if (q > 0.0) out -= (1.0 - p) * std::log(q);
            return out;
        };
        double lo = 1.0 / static_cast<double>(g0), hi = 1.0;
        for (int k = 0; k < kBisectionMaxIter; ++k) {
            const double mid = 0.5 * (lo + hi);
            (split_entropy(mid) >= s ? lo : hi) = mid;
            if (hi - lo <= 1e-15) break;
        }
        const double p = 0.5 * (lo + hi);
        pops(0) = p;
        for (int i = 1; i < g0; ++i) {
            pops(i) = (1.0 - p) / static_cast<double>(g0 - 1);
        }
    }
    const Matrix& v = h.eigenvectors();
    Matrix out = v * pops.asDiagonal() * v.adjoint();
    out = 0.5 * (out + Matrix(out.adjoint()));
    return DensityMatrix(std::move(out));
}

double bound_energy_for_entropy(double s, const RealVector& evals) {
    const IntrinsicTemperature it = intrinsic_beta_for_entropy(s, evals);
    if (it.infinite) return evals.minCoeff();
    return gibbs_energy(evals, it.beta);
}

double bound_energy(const DensityMatrix& rho, const HermitianOperator& h) {
    if (rho.dim() != h.dim()) {
        throw std::invalid_argument("state and hamiltonian dims differ");
    }
    return bound_energy_for_entropy(entropy(rho), h.eigenvalues());
}

double free_energy(const DensityMatrix& rho, const HermitianOperator& h) {
    return energy(rho, h) - bound_energy(rho, h);
}

double helmholtz_free_energy(const DensityMatrix& rho,
                             const HermitianOperator& h, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument(
            "helmholtz_free_energy needs finite beta > 0");
    }
    return energy(rho, h) - entropy(rho) / beta;
}

EquivalenceClassReport equivalence_class_report(const DensityMatrix& rho,
                                                const HermitianOperator& h) {
    EquivalenceClassReport rep;
    rep.energy = energy(rho, h);
    rep.entropy = entropy(rho);
    rep.beta = intrinsic_beta_for_entropy(rep.entropy, h.eigenvalues());
    rep.bound_energy = bound_energy_for_entropy(rep.entropy, h.eigenvalues());
    rep.free_energy = rep.energy - rep.bound_energy;
    return rep;
}

WorstBathResult worst_bath_free_energy(const DensityMatrix& rho,
                                       const HermitianOperator& h,
                                       int grid_points) {
    const RealVector& evals = h.eigenvalues();
    const double s = entropy(rho);
    const double e = energy(rho, h);
    const IntrinsicTemperature center = intrinsic_beta_for_entropy(s, evals);

    if (center.infinite) {
        // h(beta) decreases toward E - lambda_min as beta -> inf
        return WorstBathResult{e - evals.minCoeff(), kInf, true};
    }
    if (center.beta == 0.0) {
        // h(beta) -> E - mean(lambda) as beta -> 0+
        return WorstBathResult{e - evals.mean(), 0.0, true};
    }

    // F_beta(rho) - F_beta(gamma(beta)), written against the shifted log
    // partition so large beta stays finite.
    auto objective = [&](double beta) {
        const double shift = evals.minCoeff();
        return e - s / beta - shift + shifted_log_partition(evals, beta) / beta;
    };

    if (grid_points < 4) grid_points = 4;
    const double b_lo = center.beta / 10.0, b_hi = center.beta * 10.0;
    const double step = std::log(b_hi / b_lo) / (grid_points - 1);
    int best = 0;
    double best_val = kInf;
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = b_lo * std::exp(step * i);
        const double v = objective(grid[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }

    double a = grid[std::max(0, best - 1)];
    double b = grid[std::min(grid_points - 1, best + 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int k = 0; k < 100 && (b - a) > 1e-13 * std::max(1.0, a); ++k) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(x2);
        }
    }
    const double argmin = 0.5 * (a + b);
    const bool boundary = (best == 0 || best == grid_points - 1);
    return WorstBathResult{objective(argmin), argmin, boundary};
}

double min_energy_oracle(const std::vector<double>& spectrum,
                         double target_entropy, long long resolution,
                         kernels::Execution exec) {
    const int d = static_cast<int>(spectrum.size());
    if (d != 2 && d != 3) {
        throw std::invalid_argument("min_energy_oracle supports d = 2 or 3");
    }
    std::vector<double> lam = spectrum;
    std::sort(lam.begin(), lam.end());
    const double s_max = std::log(static_cast<double>(d));
    if (target_entropy < -1e-9 || target_entropy > s_max + 1e-9) {
        std::ostringstream err;
        err << "entropy " << target_entropy << " unreachable for d = " << d;
        throw std::invalid_argument(err.str());
    }
    const double s = std::min(std::max(target_entropy, 0.0), s_max);

    using kernels::BandMin;
    if (d == 2) {
        long long n = (resolution > 0) ? resolution : 10000;
        double lo = 0.0, hi = 1.0;
        BandMin best{0.0, -1};
        for (int level = 0; level < 3; ++level) {
            best = kernels::scan_entropy_band_d2(lam[0], lam[1], s, lo, hi, n,
                                                 1e-12, exec);
            if (best.index < 0) {
                throw std::runtime_error("oracle scan found no feasible point");
            }
            const double step = (hi - lo) / static_cast<double>(n);
            const double p = lo + step * static_cast<double>(best.index);
            lo = std::max(0.0, p - 2.0 * step);
            hi = std::min(1.0, p + 2.0 * step);
            n = 4096;
        }
        return best.energy;
    }

    long long n = (resolution > 0) ? resolution : 1414;
    double x_lo = 0.0, y_lo = 0.0;
    double dx = 1.0 / static_cast<double>(n), dy = dx;
    long long nx = n, ny = n;
    BandMin best{0.0, -1};
    for (int level = 0; level < 3; ++level) {
        best = kernels::scan_entropy_band_d3(lam[0], lam[1], lam[2], s, x_lo,
                                             dx, nx, y_lo, dy, ny, 1e-12, exec);
        if (best.index < 0) {
            throw std::runtime_error("oracle scan found no feasible point");
        }
        const long long i = best.index / (ny + 1);
        const long long j = best.index % (ny + 1);
        const double px = x_lo + dx * static_cast<double>(i);
        const double py = y_lo + dy * static_cast<double>(j);
        x_lo = std::max(0.0, px - 2.0 * dx);
        y_lo = std::max(0.0, py - 2.0 * dy);
        const double x_hi = std::min(1.0, px + 2.0 * dx);
        const double y_hi = std::min(1.0, py + 2.0 * dy);
        nx = 200;
        ny = 200;
        dx = (x_hi - x_lo) / static_cast<double>(nx);
        dy = (y_hi - y_lo) / static_cast<double>(ny);
    }
    return best.energy;
}

}  // namespace qthermo
