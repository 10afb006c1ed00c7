#include "qthermo/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "qthermo/json_io.hpp"
#include "qthermo/passive.hpp"

namespace qthermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kThetaMax = 1.4;  // radians; tan grid shape parameter

double log_edge_degeneracy(const RealVector& evals, bool top) {
    const int d = static_cast<int>(evals.size());
    const double width = std::max(1.0, evals(d - 1) - evals(0));
    int g = 0;
    if (top) {
        const double cut = evals(d - 1) - kDegeneracyTol * width;
        for (int i = 0; i < d; ++i) {
            if (evals(i) >= cut) ++g;
        }
    } else {
        const double cut = evals(0) + kDegeneracyTol * width;
        for (int i = 0; i < d; ++i) {
            if (evals(i) <= cut) ++g;
        }
    }
    return std::log(static_cast<double>(g));
}

// E_j - E_i (j > i) from whichever edge offset keeps full precision; raw
// energies saturate at the spectrum edges and their differences cancel.
double delta_e(const ThermalBoundary& b, int i, int j) {
    const auto& si = b.samples[static_cast<size_t>(i)];
    const auto& sj = b.samples[static_cast<size_t>(j)];
    if (si.beta >= 0.0 && sj.beta >= 0.0) {
        return sj.energy_above_min - si.energy_above_min;
    }
    if (si.beta <= 0.0 && sj.beta <= 0.0) {
        return si.energy_below_max - sj.energy_below_max;
    }
    return sj.energy - si.energy;
}

double hermite_s(double s0, double s1, double m0, double m1, double h,
                 double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * s0 + (t3 - 2.0 * t2 + t) * h * m0 +
           (-2.0 * t3 + 3.0 * t2) * s1 + (t3 - t2) * h * m1;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

ThermalBoundary thermal_boundary(const HermitianOperator& h, int n_samples,
                                 double beta_max) {
    if (n_samples < 64) {
        std::ostringstream err;
        err << "need at least 64 boundary samples, got " << n_samples;
        throw std::invalid_argument(err.str());
    }
    const RealVector& evals = h.eigenvalues();
    const double span = evals(evals.size() - 1) - evals(0);
    if (!(span > 0.0)) {
        throw std::invalid_argument(
            "spectrum width is zero; the boundary degenerates to a point");
    }
    if (beta_max <= 0.0) {
        beta_max = 50.0 / span;
    }

    std::vector<double> betas;
    betas.reserve(static_cast<size_t>(n_samples) + 1);
    const double tan_max = std::tan(kThetaMax);
    bool has_zero = false;
    for (int i = 0; i < n_samples; ++i) {
        const double theta =
            kThetaMax * (1.0 - 2.0 * static_cast<double>(i) /
                                   static_cast<double>(n_samples - 1));
        const double beta = beta_max * std::tan(theta) / tan_max;
        if (beta == 0.0) has_zero = true;
        betas.push_back(beta);
    }
    if (!has_zero) {
        betas.insert(std::upper_bound(betas.begin(), betas.end(), 0.0,
                                      std::greater<double>()),
                     0.0);
    }

    ThermalBoundary b;
    b.spectrum = evals;
    b.beta_max = beta_max;
    b.samples =
        kernels::sample_thermal_curve(evals, betas, kernels::default_execution());

    const double lam_min = evals(0), lam_max = evals(evals.size() - 1);
    b.samples.insert(b.samples.begin(),
                     BoundarySample{kInf, lam_min,
                                    log_edge_degeneracy(evals, false), 0.0,
                                    span});
    b.samples.push_back(BoundarySample{-kInf, lam_max,
                                       log_edge_degeneracy(evals, true), span,
                                       0.0});
    b.peak_index = 0;
    for (size_t k = 0; k < b.samples.size(); ++k) {
        if (b.samples[k].beta == 0.0) {
            b.peak_index = static_cast<int>(k);
            break;
        }
    }
    return b;
}

DiagramPoint locate(const DensityMatrix& rho, const HermitianOperator& h,
                    std::string label) {
    return DiagramPoint{energy(rho, h), entropy(rho), std::move(label)};
}

double boundary_energy_at_entropy(const ThermalBoundary& boundary, double s) {
    const double s_max = boundary.max_entropy();
    if (s > s_max + 1e-9) {
        std::ostringstream err;
        err << "entropy " << s << " exceeds ln d = " << s_max;
        throw std::invalid_argument(err.str());
    }
    s = std::min(s, s_max);
    const double lam_min = boundary.lambda_min();
    const auto& smp = boundary.samples;
    const int peak = boundary.peak_index;

    if (s <= smp[0].entropy) {
        return lam_min;  // ground plateau: min energy sits at lambda_min
    }
    // Largest k on the beta >= 0 branch with S_k <= s.
    int lo = 0, hi = peak;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (smp[static_cast<size_t>(mid)].entropy <= s ? lo : hi) = mid;
    }
    if (lo >= peak || smp[static_cast<size_t>(peak)].entropy <= s) {
        return lam_min + smp[static_cast<size_t>(peak)].energy_above_min;
    }

    const auto& a = smp[static_cast<size_t>(lo)];
    const auto& c = smp[static_cast<size_t>(lo + 1)];
    const double h = delta_e(boundary, lo, lo + 1);
    if (!(h > 0.0) || !(c.entropy > a.entropy)) {
        return lam_min + a.energy_above_min;
    }
    if (lo == 0) {
        // interval off the infinite-beta endpoint: no finite slope, linear
        const double t = (s - a.entropy) / (c.entropy - a.entropy);
        return lam_min + a.energy_above_min + t * h;
    }
    double t_lo = 0.0, t_hi = 1.0;
    for (int it = 0; it < 70; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        (hermite_s(a.entropy, c.entropy, a.beta, c.beta, h, t) <= s ? t_lo
                                                                    : t_hi) = t;
    }
    return lam_min + a.energy_above_min + 0.5 * (t_lo + t_hi) * h;
}

double horizontal_free_energy(const DiagramPoint& point,
                              const ThermalBoundary& boundary) {
    return point.energy - boundary_energy_at_entropy(boundary, point.entropy);
}

double tangent_beta(const ThermalBoundary& boundary, double at_energy) {
    const double lam_min = boundary.lambda_min();
    const double lam_max = boundary.lambda_max();
    if (!(at_energy > lam_min) || !(at_energy < lam_max)) {
        std::ostringstream err;
        err << "tangent undefined at energy " << at_energy
            << "; need strictly inside (" << lam_min << ", " << lam_max << ")";
        throw std::invalid_argument(err.str());
    }
    const auto& smp = boundary.samples;
    const int n = static_cast<int>(smp.size());

    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (smp[static_cast<size_t>(mid)].energy <= at_energy ? lo : hi) = mid;
    }
    int k = (at_energy - smp[static_cast<size_t>(lo)].energy <=
             smp[static_cast<size_t>(hi)].energy - at_energy)
                ? lo
                : hi;
    k = std::max(1, std::min(n - 2, k));

    const double h_minus = delta_e(boundary, k - 1, k);
    const double h_plus = delta_e(boundary, k, k + 1);
    const double s_prev = smp[static_cast<size_t>(k - 1)].entropy;
    const double s_here = smp[static_cast<size_t>(k)].entropy;
    const double s_next = smp[static_cast<size_t>(k + 1)].entropy;
    if (!(h_minus > 0.0) || !(h_plus > 0.0)) {
        const double wide = delta_e(boundary, k - 1, k + 1);
        if (!(wide > 0.0)) {
            std::ostringstream err;
            err << "boundary samples indistinguishable near energy "
                << at_energy;
            throw std::runtime_error(err.str());
        }
        return (s_next - s_prev) / wide;
    }
    // three-point difference weighted for the uneven grid
    const double chord_minus = (s_here - s_prev) / h_minus;
    const double chord_plus = (s_next - s_here) / h_plus;
    const double w_plus = h_minus / (h_minus + h_plus);
    return w_plus * chord_plus + (1.0 - w_plus) * chord_minus;
}

double boundary_entropy_at_energy(const ThermalBoundary& boundary, double e) {
    const auto& smp = boundary.samples;
    const int n = static_cast<int>(smp.size());
    e = std::min(std::max(e, boundary.lambda_min()), boundary.lambda_max());

    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (smp[static_cast<size_t>(mid)].energy <= e ? lo : hi) = mid;
    }
    const auto& a = smp[static_cast<size_t>(lo)];
    const auto& c = smp[static_cast<size_t>(lo + 1)];
    const double h = delta_e(boundary, lo, lo + 1);
    if (!(h > 0.0)) {
        return std::max(a.entropy, c.entropy);
    }
    double t = (e - a.energy) / h;
    t = std::min(std::max(t, 0.0), 1.0);
    if (lo == 0 || lo + 1 == n - 1) {
        // endpoint intervals carry an infinite slope; fall back to linear
        return a.entropy + t * (c.entropy - a.entropy);
    }
    return hermite_s(a.entropy, c.entropy, a.beta, c.beta, h, t);
}

bool point_in_region(const ThermalBoundary& boundary, const DiagramPoint& p,
                     double slack) {
    const double span = boundary.lambda_max() - boundary.lambda_min();
    const double e_pad = slack * std::max(1.0, span);
    const double s_pad = slack * std::max(1.0, boundary.max_entropy());
    if (p.energy < boundary.lambda_min() - e_pad) return false;
    if (p.energy > boundary.lambda_max() + e_pad) return false;
    if (p.entropy < -s_pad) return false;
    return p.entropy <= boundary_entropy_at_energy(boundary, p.energy) + s_pad;
}

std::vector<AnnotationSegment> heat_geometry(const ProcessRecord& record) {
    const HeatBounds hb = heat_bounds(record);
    if (!hb.applicable) {
        throw std::invalid_argument("heat geometry needs an applicable record: " +
                                    hb.reason);
    }
    const DensityMatrix b0 = partial_trace(record.initial, {1});
    const DensityMatrix b1 = partial_trace(record.final, {1});
    const double x0 = energy(b0, record.h_environment);
    const double y = entropy(b1);
    return {
        AnnotationSegment{x0, x0 + hb.lower, y, "T*dS_" + record.label_environment},
        AnnotationSegment{x0, x0 + hb.heat, y, "dQ"},
        AnnotationSegment{x0, x0 + hb.upper, y, "dE_" + record.label_environment},
    };
}

namespace {

std::string diagram_csv(const ThermalBoundary& boundary) {
    std::string out = "beta,energy,entropy\n";
    char line[160];
    for (const auto& s : boundary.samples) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", s.beta,
                      s.energy, s.entropy);
        out += line;
    }
    return out;
}

std::string diagram_json(const ThermalBoundary& boundary,
                         const std::vector<DiagramPoint>& points,
                         const std::vector<AnnotationSegment>& annotations) {
    using jsonio::JsonValue;
    JsonValue doc = JsonValue::object();
    doc.set("format_version", 1);
    doc.set("beta_max", boundary.beta_max);
    JsonValue spec = JsonValue::array();
    for (Eigen::Index i = 0; i < boundary.spectrum.size(); ++i) {
        spec.push_back(boundary.spectrum(i));
    }
    doc.set("spectrum", std::move(spec));
    JsonValue samples = JsonValue::array();
    for (const auto& s : boundary.samples) {
        JsonValue row = JsonValue::object();
        row.set("beta", s.beta);
        row.set("energy", s.energy);
        row.set("entropy", s.entropy);
        samples.push_back(std::move(row));
    }
    doc.set("samples", std::move(samples));
    JsonValue pts = JsonValue::array();
    for (const auto& p : points) {
        JsonValue row = JsonValue::object();
        row.set("label", p.label);
        row.set("energy", p.energy);
        row.set("entropy", p.entropy);
        pts.push_back(std::move(row));
    }
    doc.set("points", std::move(pts));
    JsonValue ann = JsonValue::array();
    for (const auto& a : annotations) {
        JsonValue row = JsonValue::object();
        row.set("label", a.label);
        row.set("x0", a.x0);
        row.set("x1", a.x1);
        row.set("y", a.y);
        ann.push_back(std::move(row));
    }
    doc.set("annotations", std::move(ann));
    return doc.dump(2, 12) + "\n";
}

std::string diagram_svg(const ThermalBoundary& boundary,
                        const std::vector<DiagramPoint>& points,
                        const std::vector<AnnotationSegment>& annotations) {
    const double width = 900.0, height = 620.0;
    const double ml = 80.0, mr = 30.0, mt = 30.0, mb = 60.0;
    const double lam_min = boundary.lambda_min();
    const double lam_max = boundary.lambda_max();
    const double span = lam_max - lam_min;
    const double x_lo = lam_min - 0.05 * span, x_hi = lam_max + 0.05 * span;
    const double y_hi = boundary.max_entropy() * 1.08;

    auto px = [&](double e) {
        return ml + (e - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    auto py = [&](double s) {
        return height - mb - s / y_hi * (height - mt - mb);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" "
           "height=\"620\" viewBox=\"0 0 900 620\">\n";
    svg += "<!-- qthermo diagram format 1 -->\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"620\" "
           "fill=\"white\"/>\n";

    // axes with five ticks each
    for (int i = 0; i <= 4; ++i) {
        const double e = x_lo + (x_hi - x_lo) * i / 4.0;
        const double s = y_hi * i / 4.0;
        svg += "<line x1=\"" + fmt("%.2f", px(e)) + "\" y1=\"" +
               fmt("%.2f", py(0.0)) + "\" x2=\"" + fmt("%.2f", px(e)) +
               "\" y2=\"" + fmt("%.2f", py(y_hi)) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<line x1=\"" + fmt("%.2f", px(x_lo)) + "\" y1=\"" +
               fmt("%.2f", py(s)) + "\" x2=\"" + fmt("%.2f", px(x_hi)) +
               "\" y2=\"" + fmt("%.2f", py(s)) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", px(e)) + "\" y=\"" +
               fmt("%.2f", height - mb + 18.0) +
               "\" font-size=\"11\" text-anchor=\"middle\" "
               "font-family=\"monospace\">" +
               jsonio::format_g(e, 6) + "</text>\n";
        svg += "<text x=\"" + fmt("%.2f", ml - 8.0) + "\" y=\"" +
               fmt("%.2f", py(s) + 4.0) +
               "\" font-size=\"11\" text-anchor=\"end\" "
               "font-family=\"monospace\">" +
               jsonio::format_g(s, 6) + "</text>\n";
    }
    svg += "<line x1=\"" + fmt("%.2f", ml) + "\" y1=\"" + fmt("%.2f", mt) +
           "\" x2=\"" + fmt("%.2f", ml) + "\" y2=\"" +
           fmt("%.2f", height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt("%.2f", ml) + "\" y1=\"" +
           fmt("%.2f", height - mb) + "\" x2=\"" + fmt("%.2f", width - mr) +
           "\" y2=\"" + fmt("%.2f", height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", (ml + width - mr) / 2.0) + "\" y=\"" +
           fmt("%.2f", height - 16.0) +
           "\" font-size=\"14\" text-anchor=\"middle\">energy</text>\n";
    svg += "<text x=\"22\" y=\"" + fmt("%.2f", (mt + height - mb) / 2.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
           "22 " +
           fmt("%.2f", (mt + height - mb) / 2.0) +
           ")\">entropy (nats)</text>\n";

    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
           "points=\"";
    for (const auto& s : boundary.samples) {
        svg += fmt("%.2f", px(s.energy)) + "," + fmt("%.2f", py(s.entropy)) +
               " ";
    }
    svg += "\"/>\n";

    for (const auto& p : points) {
        double eb = lam_min;
        bool have_eb = true;
        try {
            eb = boundary_energy_at_entropy(boundary, p.entropy);
        } catch (const std::invalid_argument&) {
            have_eb = false;
        }
        if (have_eb) {
            svg += "<line x1=\"" + fmt("%.2f", px(eb)) + "\" y1=\"" +
                   fmt("%.2f", py(p.entropy)) + "\" x2=\"" +
                   fmt("%.2f", px(p.energy)) + "\" y2=\"" +
                   fmt("%.2f", py(p.entropy)) +
                   "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
            if (eb > lam_min && eb < lam_max) {
                double slope = 0.0;
                bool have_slope = true;
                try {
                    slope = tangent_beta(boundary, eb);
                } catch (const std::exception&) {
                    have_slope = false;
                }
                if (have_slope) {
                    const double de = 0.07 * span;
                    svg += "<line x1=\"" + fmt("%.2f", px(eb - de)) +
                           "\" y1=\"" +
                           fmt("%.2f", py(p.entropy - slope * de)) +
                           "\" x2=\"" + fmt("%.2f", px(eb + de)) +
                           "\" y2=\"" +
                           fmt("%.2f", py(p.entropy + slope * de)) +
                           "\" stroke=\"#2ca02c\" stroke-width=\"1\"/>\n";
                }
            }
        }
        svg += "<circle cx=\"" + fmt("%.2f", px(p.energy)) + "\" cy=\"" +
               fmt("%.2f", py(p.entropy)) +
               "\" r=\"4\" fill=\"#d62728\"/>\n";
        if (!p.label.empty()) {
            svg += "<text x=\"" + fmt("%.2f", px(p.energy) + 7.0) + "\" y=\"" +
                   fmt("%.2f", py(p.entropy) - 7.0) +
                   "\" font-size=\"12\" font-family=\"monospace\">" + p.label +
                   "</text>\n";
        }
    }

    int stagger = 0;
    for (const auto& a : annotations) {
        const double y = py(a.y) - 6.0 - 10.0 * stagger;
        ++stagger;
        svg += "<line x1=\"" + fmt("%.2f", px(a.x0)) + "\" y1=\"" +
               fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", px(a.x1)) +
               "\" y2=\"" + fmt("%.2f", y) +
               "\" stroke=\"#9467bd\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", (px(a.x0) + px(a.x1)) / 2.0) +
               "\" y=\"" + fmt("%.2f", y - 3.0) +
               "\" font-size=\"11\" text-anchor=\"middle\" "
               "font-family=\"monospace\">" +
               a.label + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace

void export_diagram(const ThermalBoundary& boundary,
                    const std::vector<DiagramPoint>& points,
                    const std::vector<AnnotationSegment>& annotations,
                    ExportFormat format, const std::string& path) {
    std::string content;
    switch (format) {
        case ExportFormat::Csv:
            content = diagram_csv(boundary);
            break;
        case ExportFormat::Json:
            content = diagram_json(boundary, points, annotations);
            break;
        case ExportFormat::Svg:
            content = diagram_svg(boundary, points, annotations);
            break;
    }
    jsonio::write_text_file(path, content);
}

std::vector<std::array<double, 3>> import_boundary_csv(
    const std::string& path) {
    const std::string text = jsonio::read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "beta,energy,entropy") {
        throw std::invalid_argument(path +
                                    ": expected header beta,energy,entropy");
    }
    std::vector<std::array<double, 3>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<double, 3> row{};
        std::istringstream ls(line);
        std::string tok;
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ls, tok, ',')) {
                std::ostringstream err;
                err << path << ": line " << lineno << " has fewer than 3 columns";
                throw std::invalid_argument(err.str());
            }
            try {
                row[static_cast<size_t>(c)] = std::stod(tok);
            } catch (const std::exception&) {
                std::ostringstream err;
                err << path << ": line " << lineno << " column " << c + 1
                    << " is not a number: " << tok;
                throw std::invalid_argument(err.str());
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qthermo
