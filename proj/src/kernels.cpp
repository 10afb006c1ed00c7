#include "qthermo/kernels.hpp"

#include <cmath>
#include <limits>

namespace qthermo {

RealVector gibbs_populations(const RealVector& evals, double beta) {
    const double shift =
        (beta >= 0.0) ? evals.minCoeff() : evals.maxCoeff();
    RealVector w(evals.size());
    double z = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        w(i) = std::exp(-beta * (evals(i) - shift));
        z += w(i);
    }
    w /= z;
    return w;
}

double shifted_log_partition(const RealVector& evals, double beta) {
    const double shift =
        (beta >= 0.0) ? evals.minCoeff() : evals.maxCoeff();
    double z = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        z += std::exp(-beta * (evals(i) - shift));
    }
    return std::log(z);
}

double gibbs_energy(const RealVector& evals, double beta) {
    const RealVector w = gibbs_populations(evals, beta);
    return w.dot(evals);
}

double gibbs_entropy(const RealVector& evals, double beta) {
    const double shift =
        (beta >= 0.0) ? evals.minCoeff() : evals.maxCoeff();
    const double e = gibbs_energy(evals, beta);
    return beta * (e - shift) + shifted_log_partition(evals, beta);
}

namespace kernels {

Execution default_execution() {
#ifdef QTHERMO_HAS_OPENMP
    return Execution::Parallel;
#else
    return Execution::Serial;
#endif
}

namespace {

inline double h2(double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
    return s;
}

inline double h3(double a, double b, double c) {
    double s = 0.0;
    if (a > 0.0) s -= a * std::log(a);
    if (b > 0.0) s -= b * std::log(b);
    if (c > 0.0) s -= c * std::log(c);
    return s;
}

inline void merge(BandMin& best, double energy, long long index) {
    if (energy < best.energy ||
        (energy == best.energy && index < best.index)) {
        best.energy = energy;
        best.index = index;
    }
}

inline void merge(BandMin& best, const BandMin& other) {
    if (other.index >= 0) merge(best, other.energy, other.index);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BandMin scan_entropy_band_d2(double lambda0, double lambda1, double s_target,
                             double lo, double hi, long long n,
                             double slack_floor, Execution exec) {
    const double step = (hi - lo) / static_cast<double>(n);
    auto consider = [&](long long i, BandMin& best) {
        const double p = lo + step * static_cast<double>(i);
        const double h = h2(p);
        const double h_lo = h2(std::max(0.0, p - step));
        const double h_hi = h2(std::min(1.0, p + step));
        const double slack =
            std::max(std::abs(h - h_lo), std::abs(h_hi - h)) + slack_floor;
        if (std::abs(h - s_target) <= slack) {
            merge(best, p * lambda0 + (1.0 - p) * lambda1, i);
        }
    };

    BandMin best{kInf, -1};
    if (exec == Execution::Parallel) {
#ifdef QTHERMO_HAS_OPENMP
        #pragma omp parallel
        {
            BandMin local{kInf, -1};
            #pragma omp for nowait
            for (long long i = 0; i <= n; ++i) consider(i, local);
            #pragma omp critical
            merge(best, local);
        }
        return best;
#endif
    }
    for (long long i = 0; i <= n; ++i) consider(i, best);
    return best;
}

BandMin scan_entropy_band_d3(double l0, double l1, double l2, double s_target,
                             double x_lo, double dx, long long nx,
                             double y_lo, double dy, long long ny,
                             double slack_floor, Execution exec) {
    auto consider = [&](long long i, BandMin& best) {
        const double p0 = x_lo + dx * static_cast<double>(i);
        if (p0 < 0.0 || p0 > 1.0) return;
        for (long long j = 0; j <= ny; ++j) {
            const double p1 = y_lo + dy * static_cast<double>(j);
            const double p2 = 1.0 - p0 - p1;
            if (p1 < 0.0 || p2 < 0.0) continue;
            const double h = h3(p0, p1, p2);
            double slack = slack_floor;
            {
                const double a = std::max(0.0, std::min(1.0, p0 - dx));
                if (1.0 - a - p1 >= 0.0)
                    slack = std::max(slack, std::abs(h3(a, p1, 1.0 - a - p1) - h) + slack_floor);
                const double b = std::min(1.0, p0 + dx);
                if (1.0 - b - p1 >= 0.0)
                    slack = std::max(slack, std::abs(h3(b, p1, 1.0 - b - p1) - h) + slack_floor);
                const double c = std::max(0.0, p1 - dy);
                slack = std::max(slack, std::abs(h3(p0, c, 1.0 - p0 - c) - h) + slack_floor);
                const double d = p1 + dy;
                if (1.0 - p0 - d >= 0.0)
                    slack = std::max(slack, std::abs(h3(p0, d, 1.0 - p0 - d) - h) + slack_floor);
            }
            if (std::abs(h - s_target) <= slack) {
                merge(best, p0 * l0 + p1 * l1 + p2 * l2, i * (ny + 1) + j);
            }
        }
    };

    BandMin best{kInf, -1};
    if (exec == Execution::Parallel) {
#ifdef QTHERMO_HAS_OPENMP
        #pragma omp parallel
        {
            BandMin local{kInf, -1};
            #pragma omp for nowait
            for (long long i = 0; i <= nx; ++i) consider(i, local);
            #pragma omp critical
            merge(best, local);
        }
        return best;
#endif
    }
    for (long long i = 0; i <= nx; ++i) consider(i, best);
    return best;
}

std::vector<ThermalSample> sample_thermal_curve(const RealVector& evals,
                                                const std::vector<double>& betas,
                                                Execution exec) {
    std::vector<ThermalSample> out(betas.size());
    const double lam_min = evals.minCoeff();
    const double lam_max = evals.maxCoeff();
    auto eval = [&](std::size_t k) {
        const double beta = betas[k];
        const RealVector w = gibbs_populations(evals, beta);
        double above = 0.0, below = 0.0;
        for (int i = 0; i < evals.size(); ++i) {
            above += w(i) * (evals(i) - lam_min);
            below += w(i) * (lam_max - evals(i));
        }
        const double e = (beta >= 0.0) ? lam_min + above : lam_max - below;
        const double s = (beta >= 0.0)
                             ? beta * above + shifted_log_partition(evals, beta)
                             : -beta * below + shifted_log_partition(evals, beta);
        out[k] = ThermalSample{beta, e, s, above, below};
    };
    if (exec == Execution::Parallel) {
#ifdef QTHERMO_HAS_OPENMP
        #pragma omp parallel for
        for (long long k = 0; k < static_cast<long long>(betas.size()); ++k) {
            eval(static_cast<std::size_t>(k));
        }
        return out;
#endif
    }
    for (std::size_t k = 0; k < betas.size(); ++k) eval(k);
    return out;
}

}  // namespace kernels
}  // namespace qthermo
