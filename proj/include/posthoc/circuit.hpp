#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace posthoc {

// Gate set: every kind is real, Hermitian and involutory, which keeps the
// clock Hamiltonian free of Y factors. H together with TOFFOLI is universal
// for decision problems.
enum class GateKind { X, Z, H, CNOT, CZ, TOFFOLI };

int gate_arity(GateKind kind);
std::string_view gate_name(GateKind kind);

/// Reference matrix of a gate kind. Index convention: bit j of the matrix
/// index carries targets[j], so e.g. CNOT has control = bit 0, target = bit 1.
const Eigen::MatrixXd& gate_matrix(GateKind kind);

struct Gate {
    GateKind kind;
    std::vector<int> targets;

    bool operator==(const Gate&) const = default;
};

// Claimed membership direction sent by the prover.
enum class Claim { member, nonmember };

std::string_view claim_name(Claim claim);

// Parse failure with 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Immutable gate list over data + witness registers with a designated output
// qubit. The step count T equals the number of gates; an empty source list is
// padded with an X,X pair on qubit 0 so the clock construction stays defined.
class Circuit {
  public:
    Circuit(int data_qubits, int witness_qubits, std::vector<Gate> gates, int output_qubit);

    int data_qubits() const { return data_qubits_; }
    int witness_qubits() const { return witness_qubits_; }
    int total_qubits() const { return data_qubits_ + witness_qubits_; }
    int output_qubit() const { return output_qubit_; }
    const std::vector<Gate>& gates() const { return gates_; }
    int step_count() const { return static_cast<int>(gates_.size()); }

    std::string serialize() const;

    bool operator==(const Circuit&) const = default;

  private:
    int data_qubits_;
    int witness_qubits_;
    std::vector<Gate> gates_;
    int output_qubit_;
};

/// Parse the line-oriented circuit format:
///   qubits <n>        (required first)
///   witness <w>       (optional)
///   output <i>        (required)
///   <GATE> i [j [k]]  (one per line)
/// '#' starts a comment. Throws ParseError with line/column on bad input.
Circuit parse_circuit(const std::string& text);

/// Append `extra` witness qubits after the existing registers; gates and
/// output index are untouched.
Circuit with_witness_register(const Circuit& c, int extra);

/// Append an X on the output qubit, swapping the roles of accept and reject.
Circuit complement_circuit(const Circuit& c);

/// The circuit the verifier actually encodes: the instance itself for a
/// member claim, its complement for a nonmember claim.
Circuit claim_branch_circuit(const Circuit& c, Claim claim);

}  // namespace posthoc
