#include "qthermo/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qthermo/passive.hpp"

namespace qthermo {
namespace jsonio {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument(path + ": " + msg);
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path, e.what());
    }
}

std::complex<double> parse_entry(const json& e, const std::string& path,
                                 int row, int col) {
    if (e.is_number()) {
        return {e.get<double>(), 0.0};
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    std::ostringstream msg;
    msg << "matrix entry (" << row << ", " << col
        << ") must be a real number or an [re, im] pair";
    fail(path, msg.str());
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "\"matrix\" must be a non-empty array of rows");
    }
    const int n = static_cast<int>(j.size());
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
            std::ostringstream msg;
            msg << "matrix row " << r << " must have " << n << " entries";
            fail(path, msg.str());
        }
        for (int c = 0; c < n; ++c) {
            m(r, c) = parse_entry(j[r][c], path, r, c);
        }
    }
    return m;
}

Matrix matrix_field(const json& j, const std::string& path) {
    if (j.is_array()) {
        return parse_matrix(j, path);
    }
    if (!j.is_object() || !j.contains("matrix")) {
        fail(path, "expected an object with a \"matrix\" field");
    }
    Matrix m = parse_matrix(j["matrix"], path);
    if (j.contains("dim") &&
        j["dim"].get<long long>() != static_cast<long long>(m.rows())) {
        std::ostringstream msg;
        msg << "\"dim\" = " << j["dim"].get<long long>()
            << " disagrees with the " << m.rows() << "-row matrix";
        fail(path, msg.str());
    }
    return m;
}

std::vector<int> dims_field(const json& j, const std::string& path) {
    std::vector<int> dims;
    if (j.is_object() && j.contains("subsystem_dims")) {
        for (const auto& d : j["subsystem_dims"]) {
            if (!d.is_number_integer() || d.get<long long>() < 1) {
                fail(path, "\"subsystem_dims\" entries must be positive integers");
            }
            dims.push_back(d.get<int>());
        }
    }
    return dims;
}

HermitianOperator hamiltonian_from(const json& j, const std::string& path) {
    try {
        return HermitianOperator(matrix_field(j, path));
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        fail(path, msg);
    }
}

DensityMatrix state_from(const json& j, const std::string& path,
                         std::vector<int> fallback_dims = {}) {
    std::vector<int> dims = dims_field(j, path);
    if (dims.empty()) dims = std::move(fallback_dims);
    try {
        return DensityMatrix(matrix_field(j, path), std::move(dims));
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        fail(path, msg);
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        fail(path, std::string("missing required field \"") + key + "\"");
    }
    return j.at(key);
}

}  // namespace

std::string format_g(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
}

JsonValue& JsonValue::push_back(JsonValue v) {
    if (kind_ != Kind::Array) {
        throw std::logic_error("push_back on a non-array JSON value");
    }
    arr_.push_back(std::move(v));
    return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::Object) {
        throw std::logic_error("set on a non-object JSON value");
    }
    for (auto& kv : obj_) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    }
    obj_.emplace_back(key, std::move(v));
    return *this;
}

void JsonValue::write(std::string& out, int indent, int depth,
                      int digits) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<size_t>(indent) * depth, ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (kind_) {
        case Kind::Null:
            out += "null";
            break;
        case Kind::Bool:
            out += bool_ ? "true" : "false";
            break;
        case Kind::Int:
            out += std::to_string(int_);
            break;
        case Kind::Double:
            if (std::isfinite(dbl_)) {
                out += format_g(dbl_, digits);
            } else {
                out += '"';
                out += format_g(dbl_, digits);
                out += '"';
            }
            break;
        case Kind::String:
            out += '"';
            for (char c : str_) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    default: out += c;
                }
            }
            out += '"';
            break;
        case Kind::Array: {
            if (arr_.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            out += nl;
            for (size_t i = 0; i < arr_.size(); ++i) {
                out += pad;
                arr_[i].write(out, indent, depth + 1, digits);
                if (i + 1 < arr_.size()) out += ',';
                out += nl;
            }
            out += close_pad;
            out += ']';
            break;
        }
        case Kind::Object: {
            if (obj_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            out += nl;
            for (size_t i = 0; i < obj_.size(); ++i) {
                out += pad;
                out += '"';
                out += obj_[i].first;
                out += "\": ";
                obj_[i].second.write(out, indent, depth + 1, digits);
                if (i + 1 < obj_.size()) out += ',';
                out += nl;
            }
            out += close_pad;
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump(int indent, int double_digits) const {
    std::string out;
    write(out, indent, 0, double_digits);
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

HermitianOperator read_hamiltonian_file(const std::string& path) {
    return hamiltonian_from(parse_file(path), path);
}

DensityMatrix read_state_file(const std::string& path) {
    return state_from(parse_file(path), path);
}

Matrix read_matrix_file(const std::string& path) {
    return matrix_field(parse_file(path), path);
}

ProcessRecord read_process_record_file(const std::string& path) {
    const json j = parse_file(path);
    HermitianOperator ha = hamiltonian_from(require(j, "h_system", path), path);
    HermitianOperator hb =
        hamiltonian_from(require(j, "h_environment", path), path);
    const std::vector<int> dims{ha.dim(), hb.dim()};
    DensityMatrix initial = state_from(require(j, "initial", path), path, dims);

    double ep_tol = 1e-9;
    if (j.contains("entropy_tolerance")) {
        ep_tol = j["entropy_tolerance"].get<double>();
    }

    if (j.contains("final")) {
        DensityMatrix final_state = state_from(j["final"], path, dims);
        return ProcessRecord(std::move(ha), std::move(hb), std::move(initial),
                             std::move(final_state), ep_tol);
    }
    if (j.contains("unitary")) {
        const Matrix u = matrix_field(j["unitary"], path);
        DensityMatrix final_state = apply_unitary(initial, u);
        return ProcessRecord(std::move(ha), std::move(hb), std::move(initial),
                             std::move(final_state), ep_tol);
    }
    fail(path, "need either \"final\" or \"unitary\"");
}

CompositeSystem read_composite_file(const std::string& path) {
    const json j = parse_file(path);
    const json& parts_json = require(j, "parts", path);
    if (!parts_json.is_array() || parts_json.empty()) {
        fail(path, "\"parts\" must be a non-empty array");
    }

    std::vector<CompositePart> parts;
    std::vector<DensityMatrix> marginals;
    std::vector<int> dims;
    for (size_t k = 0; k < parts_json.size(); ++k) {
        const json& pj = parts_json[k];
        std::string label = pj.contains("label")
                                ? pj["label"].get<std::string>()
                                : std::string(1, static_cast<char>('A' + k));
        HermitianOperator h =
            hamiltonian_from(require(pj, "hamiltonian", path), path);
        if (pj.contains("beta")) {
            marginals.push_back(gibbs_state(h, pj["beta"].get<double>()));
        } else if (pj.contains("state")) {
            marginals.push_back(state_from(pj["state"], path, {h.dim()}));
        } else if (!j.contains("state")) {
            std::ostringstream msg;
            msg << "part " << k
                << " needs \"beta\" or \"state\" (or give a joint \"state\")";
            fail(path, msg.str());
        }
        dims.push_back(h.dim());
        parts.push_back(CompositePart{std::move(label), std::move(h)});
    }

    if (j.contains("state")) {
        DensityMatrix joint = state_from(j["state"], path, dims);
        return CompositeSystem(std::move(parts), std::move(joint));
    }
    DensityMatrix joint = marginals.front();
    for (size_t k = 1; k < marginals.size(); ++k) {
        joint = tensor(joint, marginals[k]);
    }
    return CompositeSystem(std::move(parts), std::move(joint));
}

JsonValue complex_matrix_to_json(const Matrix& m) {
    JsonValue rows = JsonValue::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        JsonValue row = JsonValue::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            JsonValue entry = JsonValue::array();
            entry.push_back(m(r, c).real());
            entry.push_back(m(r, c).imag());
            row.push_back(std::move(entry));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_hamiltonian_file(const HermitianOperator& h,
                            const std::string& path) {
    JsonValue doc = JsonValue::object();
    doc.set("dim", h.dim());
    doc.set("matrix", complex_matrix_to_json(h.matrix()));
    write_text_file(path, doc.dump(2, 17) + "\n");
}

void write_state_file(const DensityMatrix& rho, const std::string& path) {
    JsonValue doc = JsonValue::object();
    doc.set("dim", rho.dim());
    JsonValue dims = JsonValue::array();
    for (int d : rho.subsystem_dims()) dims.push_back(d);
    doc.set("subsystem_dims", std::move(dims));
    doc.set("matrix", complex_matrix_to_json(rho.matrix()));
    write_text_file(path, doc.dump(2, 17) + "\n");
}

}  // namespace jsonio
}  // namespace qthermo
