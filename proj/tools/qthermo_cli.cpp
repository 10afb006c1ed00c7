#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qthermo/diagram.hpp"
#include "qthermo/engine.hpp"
#include "qthermo/equilibrium.hpp"
#include "qthermo/json_io.hpp"
#include "qthermo/lawbook.hpp"
#include "qthermo/passive.hpp"
#include "qthermo/qstate.hpp"
#include "qthermo/resource.hpp"

namespace {

using qthermo::jsonio::format_g;
using qthermo::jsonio::JsonValue;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        qthermo::jsonio::write_text_file(out_path, text);
    }
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// Infinite intrinsic beta prints as the string "inf" through the JSON
// builder's non-finite handling.
double beta_value(const qthermo::IntrinsicTemperature& b) {
    return b.infinite ? std::numeric_limits<double>::infinity() : b.beta;
}

JsonValue optional_number(const std::optional<double>& v) {
    return v ? JsonValue(*v) : JsonValue();
}

std::string run_info(const std::string& state_path,
                     const std::string& hamiltonian_path) {
    const qthermo::HermitianOperator h =
        qthermo::jsonio::read_hamiltonian_file(hamiltonian_path);
    const qthermo::DensityMatrix rho =
        qthermo::jsonio::read_state_file(state_path);
    const qthermo::EquivalenceClassReport rep =
        qthermo::equivalence_class_report(rho, h);
    JsonValue doc = JsonValue::object();
    doc.set("E", rep.energy);
    doc.set("S", rep.entropy);
    doc.set("beta", beta_value(rep.beta));
    doc.set("T", rep.beta.temperature());
    doc.set("B", rep.bound_energy);
    doc.set("F", rep.free_energy);
    return doc.dump() + "\n";
}

std::string run_equilibrate(const std::string& composite_path) {
    const qthermo::CompositeSystem system =
        qthermo::jsonio::read_composite_file(composite_path);
    const qthermo::EquilibrationResult result = qthermo::equilibrate(system);
    JsonValue doc = JsonValue::object();
    doc.set("common_beta", beta_value(result.common_beta));
    doc.set("energy_released", result.energy_released);
    JsonValue parts = JsonValue::array();
    for (size_t k = 0; k < system.parts.size(); ++k) {
        JsonValue row = JsonValue::object();
        row.set("label", system.parts[k].label);
        row.set("energy", qthermo::energy(result.per_part_states[k],
                                          system.parts[k].hamiltonian));
        row.set("entropy", qthermo::entropy(result.per_part_states[k]));
        parts.push_back(std::move(row));
    }
    doc.set("parts", std::move(parts));
    return doc.dump() + "\n";
}

JsonValue heat_bounds_json(const qthermo::HeatBounds& hb) {
    JsonValue out = JsonValue::object();
    out.set("applicable", hb.applicable);
    if (hb.applicable) {
        out.set("lower", hb.lower);
        out.set("heat", hb.heat);
        out.set("upper", hb.upper);
        out.set("beta_env", hb.beta_env);
    } else {
        out.set("reason", hb.reason);
    }
    return out;
}

std::string run_process(const std::string& record_path, bool as_csv) {
    const qthermo::ProcessRecord record =
        qthermo::jsonio::read_process_record_file(record_path);
    const qthermo::EpValidation validation = qthermo::validate_ep(record);
    const qthermo::Ledger led = qthermo::compute_ledger(record);
    const qthermo::HeatBounds hb = qthermo::heat_bounds(record);
    const qthermo::ClausiusReport cl = qthermo::clausius_report(record);
    const qthermo::KelvinPlanckReport kp = qthermo::kelvin_planck_report(record);
    const double flr = qthermo::first_law_residual(record);
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double beta_a = led.beta_a_infinite ? inf : led.beta_a;
    const double beta_b = led.beta_b_infinite ? inf : led.beta_b;

    if (as_csv) {
        const double heat_lower = hb.applicable ? hb.lower : nan;
        const double heat_upper = hb.applicable ? hb.upper : nan;
        const double values[] = {
            validation.pass ? 1.0 : 0.0,
            validation.residual,
            led.d_energy_a,
            led.d_energy_b,
            led.d_bound_a,
            led.d_bound_b,
            led.d_free_a,
            led.d_free_b,
            led.d_entropy_a,
            led.d_entropy_b,
            led.d_mutual_information,
            led.external_work,
            led.work_on_system,
            led.heat,
            flr,
            beta_a,
            beta_b,
            heat_lower,
            heat_upper,
            cl.margin_beta_applicable ? cl.margin_beta : nan,
            kp.identity_residual,
        };
        std::string out =
            "entropy_preserving,entropy_residual,d_energy_system,"
            "d_energy_environment,d_bound_system,d_bound_environment,"
            "d_free_system,d_free_environment,d_entropy_system,"
            "d_entropy_environment,d_mutual_information,external_work,"
            "work_on_system,heat,first_law_residual,beta_system,"
            "beta_environment,heat_lower,heat_upper,clausius_margin_beta,"
            "kelvin_planck_residual\n";
        for (size_t i = 0; i < sizeof(values) / sizeof(values[0]); ++i) {
            if (i) out += ',';
            out += format_g(values[i], 12);
        }
        out += '\n';
        return out;
    }

    JsonValue doc = JsonValue::object();
    doc.set("system", record.label_system);
    doc.set("environment", record.label_environment);
    JsonValue val = JsonValue::object();
    val.set("entropy_preserving", validation.pass);
    val.set("entropy_residual", validation.residual);
    doc.set("validation", std::move(val));

    JsonValue ledger = JsonValue::object();
    ledger.set("d_energy_system", led.d_energy_a);
    ledger.set("d_energy_environment", led.d_energy_b);
    ledger.set("d_bound_system", led.d_bound_a);
    ledger.set("d_bound_environment", led.d_bound_b);
    ledger.set("d_free_system", led.d_free_a);
    ledger.set("d_free_environment", led.d_free_b);
    ledger.set("d_entropy_system", led.d_entropy_a);
    ledger.set("d_entropy_environment", led.d_entropy_b);
    ledger.set("d_mutual_information", led.d_mutual_information);
    ledger.set("external_work", led.external_work);
    ledger.set("work_on_system", led.work_on_system);
    ledger.set("heat", led.heat);
    ledger.set("beta_system", beta_a);
    ledger.set("beta_environment", beta_b);
    doc.set("ledger", std::move(ledger));
    doc.set("first_law_residual", flr);
    doc.set("heat_bounds", heat_bounds_json(hb));

    JsonValue clausius = JsonValue::object();
    clausius.set("margin_beta_applicable", cl.margin_beta_applicable);
    clausius.set("margin_beta",
                 cl.margin_beta_applicable ? JsonValue(cl.margin_beta)
                                           : JsonValue());
    clausius.set("margin_temperature_applicable",
                 cl.margin_temperature_applicable);
    clausius.set("margin_temperature", cl.margin_temperature_applicable
                                           ? JsonValue(cl.margin_temperature)
                                           : JsonValue());
    clausius.set("std_premises_hold", cl.std_premises_hold);
    clausius.set("std_margin_beta", cl.std_margin_beta);
    clausius.set("std_margin_temperature", cl.std_margin_temperature);
    doc.set("clausius", std::move(clausius));

    JsonValue kelvin = JsonValue::object();
    kelvin.set("identity_residual", kp.identity_residual);
    kelvin.set("heat_sum", kp.heat_sum);
    kelvin.set("external_work", kp.external_work);
    kelvin.set("thermal_start", kp.thermal_start);
    kelvin.set("work_extracting", kp.work_extracting);
    kelvin.set("heat_sum_bounded_by_work", kp.heat_sum_bounded_by_work);
    kelvin.set("sign_rule_applicable", kp.sign_rule_applicable);
    kelvin.set("sign_rule_holds", kp.sign_rule_holds);
    doc.set("kelvin_planck", std::move(kelvin));
    return doc.dump() + "\n";
}

struct EngineArgs {
    double gap = 1.0;
    double beta_cold = 2.0;
    double beta_hot = 0.5;
    long long bath_size = 1;
    int cycles = 1;
    std::string policy = "full";
    std::string config_path;
    std::string csv_out;
};

qthermo::CyclePolicy parse_policy(const std::string& text) {
    if (text == "full") return qthermo::CyclePolicy::full();
    const auto eq = text.find('=');
    if (eq != std::string::npos) {
        const std::string kind = text.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(text.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("policy value in '" + text +
                                        "' is not a number");
        }
        if (kind == "fraction") return qthermo::CyclePolicy::fraction(value);
        if (kind == "quantum") {
            return qthermo::CyclePolicy::entropy_quantum(value);
        }
    }
    throw std::invalid_argument("unknown policy '" + text +
                                "'; use full, fraction=F, or quantum=NATS");
}

void load_engine_config(const std::string& path, EngineArgs& args) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(qthermo::jsonio::read_text_file(path));
        args.gap = j.value("gap", args.gap);
        args.beta_cold = j.value("beta_cold", args.beta_cold);
        args.beta_hot = j.value("beta_hot", args.beta_hot);
        args.bath_size = j.value("bath_size", args.bath_size);
        args.cycles = j.value("cycles", args.cycles);
        args.policy = j.value("policy", args.policy);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string run_engine_cmd(const EngineArgs& args) {
    if (!(args.gap > 0.0)) {
        throw std::invalid_argument("gap must be positive");
    }
    qthermo::Matrix cell_m = qthermo::Matrix::Zero(2, 2);
    cell_m(1, 1) = args.gap;
    const qthermo::HermitianOperator cell(cell_m);
    const qthermo::EngineConfig config(
        qthermo::BathSpec{cell, args.beta_cold, args.bath_size},
        qthermo::BathSpec{cell, args.beta_hot, args.bath_size},
        parse_policy(args.policy), args.cycles);
    const std::vector<qthermo::CycleReport> reports =
        qthermo::run_engine(config);

    if (!args.csv_out.empty()) {
        std::string csv =
            "cycle,entropy_moved,work,d_energy_cold,d_energy_hot,"
            "d_bound_cold,d_bound_hot,heat_in,eta,eta_bound_general,"
            "eta_carnot,beta_cold,beta_hot\n";
        for (size_t k = 0; k < reports.size(); ++k) {
            const auto& r = reports[k];
            const double values[] = {r.entropy_moved,
                                     r.work,
                                     r.d_energy_cold,
                                     r.d_energy_hot,
                                     r.d_bound_cold,
                                     r.d_bound_hot,
                                     r.heat_in,
                                     r.eta,
                                     r.eta_bound_general,
                                     r.eta_carnot,
                                     r.post.beta_cold,
                                     r.post.beta_hot};
            csv += std::to_string(k + 1);
            for (double v : values) {
                csv += ',';
                csv += format_g(v, 12);
            }
            csv += '\n';
        }
        qthermo::jsonio::write_text_file(args.csv_out, csv);
    }

    double total_work = 0.0, total_heat_in = 0.0;
    for (const auto& r : reports) {
        total_work += r.work;
        total_heat_in += r.heat_in;
    }
    JsonValue doc = JsonValue::object();
    doc.set("gap", args.gap);
    doc.set("beta_cold", args.beta_cold);
    doc.set("beta_hot", args.beta_hot);
    doc.set("bath_size", args.bath_size);
    doc.set("cycles", args.cycles);
    doc.set("policy", args.policy);
    doc.set("total_work", total_work);
    doc.set("total_heat_in", total_heat_in);
    doc.set("efficiency", total_heat_in > 0.0 ? total_work / total_heat_in : 0.0);
    doc.set("eta_first_cycle", reports.front().eta);
    doc.set("eta_bound_general_first_cycle",
            reports.front().eta_bound_general);
    doc.set("eta_carnot_initial", reports.front().eta_carnot);
    doc.set("final_beta_cold", reports.back().post.beta_cold);
    doc.set("final_beta_hot", reports.back().post.beta_hot);
    return doc.dump() + "\n";
}

qthermo::ExportFormat parse_format(const std::string& text) {
    if (text == "csv") return qthermo::ExportFormat::Csv;
    if (text == "json") return qthermo::ExportFormat::Json;
    if (text == "svg") return qthermo::ExportFormat::Svg;
    throw std::invalid_argument("unknown format '" + text +
                                "'; use csv, json, or svg");
}

std::string run_convert_rate(const std::string& source_path,
                             const std::string& target_path,
                             const std::string& hamiltonian_path,
                             int samples, const std::string& svg_path) {
    const qthermo::HermitianOperator h =
        qthermo::jsonio::read_hamiltonian_file(hamiltonian_path);
    const qthermo::DensityMatrix source =
        qthermo::jsonio::read_state_file(source_path);
    const qthermo::DensityMatrix target =
        qthermo::jsonio::read_state_file(target_path);
    const qthermo::DiagramPoint x_source =
        qthermo::locate(source, h, "source");
    const qthermo::DiagramPoint x_target =
        qthermo::locate(target, h, "target");
    const std::optional<double> s_rate =
        qthermo::entropy_only_rate(source, target);

    JsonValue doc = JsonValue::object();
    JsonValue src = JsonValue::object();
    src.set("E", x_source.energy);
    src.set("S", x_source.entropy);
    doc.set("source", std::move(src));
    JsonValue tgt = JsonValue::object();
    tgt.set("E", x_target.energy);
    tgt.set("S", x_target.entropy);
    doc.set("target", std::move(tgt));
    doc.set("entropy_only_rate", optional_number(s_rate));

    if (!s_rate) {
        // A pure target cannot carry the source's entropy at any finite
        // copy count; report the degenerate case instead of a rate.
        doc.set("rate", JsonValue());
        doc.set("explanation",
                "target is pure while the source has positive entropy; "
                "no finite conversion rate exists");
        return doc.dump() + "\n";
    }

    const qthermo::ConversionProblem problem{x_source, x_target, h, samples};
    const qthermo::ConversionResult result =
        qthermo::max_conversion_rate(problem);
    doc.set("rate", result.rate);
    JsonValue residue = JsonValue::object();
    residue.set("E", result.residue.energy);
    residue.set("S", result.residue.entropy);
    doc.set("residue", std::move(residue));
    const char* kind = result.residue_kind == qthermo::ResidueKind::Pure
                           ? "pure"
                           : result.residue_kind == qthermo::ResidueKind::Thermal
                                 ? "thermal"
                                 : "interior";
    doc.set("residue_kind", kind);
    doc.set("capped", result.capped);
    doc.set("horizontal_ray", result.horizontal_ray);
    const qthermo::CollinearityReport col = qthermo::collinearity_residual(
        x_source, x_target, result.residue, result.rate);
    doc.set("collinearity_de", col.de);
    doc.set("collinearity_ds", col.ds);

    if (!svg_path.empty()) {
        const qthermo::ThermalBoundary boundary =
            qthermo::thermal_boundary(h, samples);
        std::vector<qthermo::DiagramPoint> points{x_source, x_target,
                                                  result.residue};
        qthermo::export_diagram(boundary, points, {},
                                qthermo::ExportFormat::Svg, svg_path);
    }
    return doc.dump() + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-entropy toolkit for finite quantum systems"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed,
                   "seed reserved for randomized subcommands; the current "
                   "set is fully deterministic")
        ->capture_default_str();

    std::string out_path;

    auto* info = app.add_subcommand(
        "info", "energy, entropy, intrinsic temperature, bound and free "
                "energy of a state");
    std::string info_state, info_h;
    info->add_option("--state", info_state, "state JSON file")->required();
    info->add_option("--hamiltonian", info_h, "Hamiltonian JSON file")
        ->required();
    info->add_option("--out", out_path, "write to file instead of stdout");
    info->callback([&] { emit(run_info(info_state, info_h), out_path); });

    auto* gibbs = app.add_subcommand(
        "gibbs", "write the Gibbs state of a Hamiltonian at a given beta");
    std::string gibbs_h, gibbs_out;
    double gibbs_beta = 1.0;
    gibbs->add_option("--hamiltonian", gibbs_h, "Hamiltonian JSON file")
        ->required();
    gibbs->add_option("--beta", gibbs_beta, "inverse temperature")->required();
    gibbs->add_option("--out", gibbs_out, "output state file")->required();
    gibbs->callback([&] {
        const qthermo::HermitianOperator h =
            qthermo::jsonio::read_hamiltonian_file(gibbs_h);
        qthermo::jsonio::write_state_file(qthermo::gibbs_state(h, gibbs_beta),
                                          gibbs_out);
    });

    auto* equil = app.add_subcommand(
        "equilibrate", "relax a composite of thermal parts to the joint "
                       "completely passive state");
    std::string equil_path;
    equil->add_option("composite", equil_path, "composite JSON file")
        ->required();
    equil->add_option("--out", out_path, "write to file instead of stdout");
    equil->callback([&] { emit(run_equilibrate(equil_path), out_path); });

    auto* process = app.add_subcommand(
        "process", "ledger and law reports for an entropy-preserving "
                   "process record");
    std::string process_path;
    bool process_csv = false;
    process->add_option("record", process_path, "process record JSON file")
        ->required();
    process->add_flag("--csv", process_csv, "flatten to a one-row CSV");
    process->add_option("--out", out_path, "write to file instead of stdout");
    process->callback(
        [&] { emit(run_process(process_path, process_csv), out_path); });

    auto* engine = app.add_subcommand(
        "engine", "finite-bath heat engine between two qubit baths");
    EngineArgs eng;
    engine->add_option("--gap", eng.gap, "qubit energy gap")
        ->capture_default_str();
    engine->add_option("--beta-cold", eng.beta_cold, "cold bath beta")
        ->capture_default_str();
    engine->add_option("--beta-hot", eng.beta_hot, "hot bath beta")
        ->capture_default_str();
    engine->add_option("--bath-size", eng.bath_size, "cells per bath")
        ->capture_default_str();
    engine->add_option("--cycles", eng.cycles, "number of cycles")
        ->capture_default_str();
    engine->add_option("--policy", eng.policy,
                       "full, fraction=F, or quantum=NATS")
        ->capture_default_str();
    engine->add_option("--config", eng.config_path,
                       "JSON config; flags fill unset fields");
    engine->add_option("--csv-out", eng.csv_out, "per-cycle CSV file");
    engine->add_option("--out", out_path, "write summary to file instead of "
                                          "stdout");
    engine->callback([&] {
        if (!eng.config_path.empty()) {
            load_engine_config(eng.config_path, eng);
        }
        emit(run_engine_cmd(eng), out_path);
    });

    auto* diagram = app.add_subcommand(
        "diagram", "export the thermal boundary with optional state points");
    std::string diagram_h, diagram_format = "svg", diagram_out;
    std::string diagram_record;
    std::vector<std::string> diagram_states;
    int diagram_samples = 512;
    double diagram_beta_max = 0.0;
    diagram->add_option("--hamiltonian", diagram_h, "Hamiltonian JSON file")
        ->required();
    diagram->add_option("--state", diagram_states,
                        "state JSON file; repeatable");
    diagram->add_option("--record", diagram_record,
                        "process record for heat annotations");
    diagram->add_option("--format", diagram_format, "csv, json, or svg")
        ->capture_default_str();
    diagram->add_option("--samples", diagram_samples, "boundary samples")
        ->capture_default_str();
    diagram->add_option("--beta-max", diagram_beta_max,
                        "largest |beta| sampled; 0 picks 50 / spectrum span")
        ->capture_default_str();
    diagram->add_option("--out", diagram_out, "output file")->required();
    diagram->callback([&] {
        const qthermo::HermitianOperator h =
            qthermo::jsonio::read_hamiltonian_file(diagram_h);
        const qthermo::ThermalBoundary boundary =
            qthermo::thermal_boundary(h, diagram_samples, diagram_beta_max);
        std::vector<qthermo::DiagramPoint> points;
        for (const auto& path : diagram_states) {
            points.push_back(qthermo::locate(
                qthermo::jsonio::read_state_file(path), h, stem_of(path)));
        }
        std::vector<qthermo::AnnotationSegment> annotations;
        if (!diagram_record.empty()) {
            annotations = qthermo::heat_geometry(
                qthermo::jsonio::read_process_record_file(diagram_record));
        }
        qthermo::export_diagram(boundary, points, annotations,
                                parse_format(diagram_format), diagram_out);
    });

    auto* convert = app.add_subcommand(
        "convert-rate", "maximal copy rate between two states sharing a "
                        "unit cell");
    std::string conv_source, conv_target, conv_h, conv_svg;
    int conv_samples = 512;
    convert->add_option("--source", conv_source, "source state JSON file")
        ->required();
    convert->add_option("--target", conv_target, "target state JSON file")
        ->required();
    convert->add_option("--hamiltonian", conv_h, "unit cell Hamiltonian")
        ->required();
    convert->add_option("--samples", conv_samples, "boundary samples")
        ->capture_default_str();
    convert->add_option("--svg", conv_svg, "write an overlay figure");
    convert->add_option("--out", out_path, "write to file instead of stdout");
    convert->callback([&] {
        emit(run_convert_rate(conv_source, conv_target, conv_h, conv_samples,
                              conv_svg),
             out_path);
    });

    auto* oracle = app.add_subcommand("oracle", "");
    oracle->group("");  // internal: grid-scan minimum energy at fixed entropy
    std::vector<double> oracle_spectrum;
    double oracle_entropy = 0.0;
    long long oracle_resolution = 0;
    bool oracle_serial = false;
    oracle->add_option("--spectrum", oracle_spectrum, "eigenvalues")
        ->delimiter(',')
        ->required();
    oracle->add_option("--entropy", oracle_entropy, "target entropy")
        ->required();
    oracle->add_option("--resolution", oracle_resolution, "grid points");
    oracle->add_flag("--serial", oracle_serial, "disable the parallel scan");
    oracle->callback([&] {
        const double e = qthermo::min_energy_oracle(
            oracle_spectrum, oracle_entropy, oracle_resolution,
            oracle_serial ? qthermo::kernels::Execution::Serial
                          : qthermo::kernels::default_execution());
        std::cout << format_g(e, 17) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
