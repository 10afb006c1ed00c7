#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qthermo/equilibrium.hpp"
#include "qthermo/lawbook.hpp"
#include "qthermo/qstate.hpp"

namespace qthermo {
namespace jsonio {

// printf("%.*g") with -0 normalized to 0 and non-finite values rendered as
// inf / -inf / nan tokens.
std::string format_g(double v, int digits);

// Insertion-ordered JSON document builder. Output is deterministic: keys
// keep their insertion order, doubles print at a fixed significant-digit
// count, and infinities become the strings "inf" / "-inf" since JSON has no
// literal for them.
class JsonValue {
  public:
    JsonValue() : kind_(Kind::Null) {}
    JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
    JsonValue(int v) : kind_(Kind::Int), int_(v) {}
    JsonValue(long long v) : kind_(Kind::Int), int_(v) {}
    JsonValue(double v) : kind_(Kind::Double), dbl_(v) {}
    JsonValue(const char* s) : kind_(Kind::String), str_(s) {}
    JsonValue(std::string s) : kind_(Kind::String), str_(std::move(s)) {}

    static JsonValue array();
    static JsonValue object();

    JsonValue& push_back(JsonValue v);
    JsonValue& set(const std::string& key, JsonValue v);

    std::string dump(int indent = 2, int double_digits = 12) const;

  private:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };
    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double dbl_ = 0.0;
    std::string str_;
    std::vector<JsonValue> arr_;
    std::vector<std::pair<std::string, JsonValue>> obj_;

    void write(std::string& out, int indent, int depth, int digits) const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Operator/state files: { "dim": n, "subsystem_dims": [..] (states only,
// optional), "matrix": [[entry, ...], ...] } with entries either [re, im]
// pairs or bare reals. Schema or invariant violations throw
// std::invalid_argument prefixed with the path.
HermitianOperator read_hamiltonian_file(const std::string& path);
DensityMatrix read_state_file(const std::string& path);
Matrix read_matrix_file(const std::string& path);

// ProcessRecord file: { "h_system", "h_environment", "initial", and either
// "final" or "unitary" } where each value follows the operator/state schema.
ProcessRecord read_process_record_file(const std::string& path);

// Composite file: { "parts": [ { "label", "hamiltonian", and "beta" or
// "state" }, ... ], "state": optional joint state }. Without a joint state
// the parts are tensored in order.
CompositeSystem read_composite_file(const std::string& path);

JsonValue complex_matrix_to_json(const Matrix& m);
void write_hamiltonian_file(const HermitianOperator& h,
                            const std::string& path);
void write_state_file(const DensityMatrix& rho, const std::string& path);

}  // namespace jsonio
}  // namespace qthermo
