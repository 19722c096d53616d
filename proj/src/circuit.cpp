#include "posthoc/circuit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace posthoc {

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
            return 1;
        case GateKind::CNOT:
        case GateKind::CZ:
            return 2;
        case GateKind::TOFFOLI:
            return 3;
    }
    return 0;
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::TOFFOLI: return "TOFFOLI";
    }
    return "?";
}

namespace {

Eigen::MatrixXd make_gate_matrix(GateKind kind) {
    const int dim = 1 << gate_arity(kind);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    switch (kind) {
        case GateKind::X:
            m << 0, 1, 1, 0;
            break;
        case GateKind::Z:
            m << 1, 0, 0, -1;
            break;
        case GateKind::H:
            m << 1, 1, 1, -1;
            m /= std::sqrt(2.0);
            break;
        case GateKind::CNOT:
            // control = bit 0, target = bit 1
            for (int c = 0; c < 2; ++c)
                for (int t = 0; t < 2; ++t) m((t ^ c) * 2 + c, t * 2 + c) = 1;
            break;
        case GateKind::CZ:
            m = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
            break;
        case GateKind::TOFFOLI:
            for (int i = 0; i < 8; ++i) {
                const int c1 = i & 1, c2 = (i >> 1) & 1, t = (i >> 2) & 1;
                m(((t ^ (c1 & c2)) << 2) | (c2 << 1) | c1, i) = 1;
            }
            break;
    }
    return m;
}

}  // namespace

const Eigen::MatrixXd& gate_matrix(GateKind kind) {
    static const std::array<Eigen::MatrixXd, 6> matrices = {
        make_gate_matrix(GateKind::X),    make_gate_matrix(GateKind::Z),
        make_gate_matrix(GateKind::H),    make_gate_matrix(GateKind::CNOT),
        make_gate_matrix(GateKind::CZ),   make_gate_matrix(GateKind::TOFFOLI),
    };
    return matrices[static_cast<int>(kind)];
}

std::string_view claim_name(Claim claim) {
    return claim == Claim::member ? "member" : "nonmember";
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

Circuit::Circuit(int data_qubits, int witness_qubits, std::vector<Gate> gates, int output_qubit)
    : data_qubits_(data_qubits),
      witness_qubits_(witness_qubits),
      gates_(std::move(gates)),
      output_qubit_(output_qubit) {
    if (data_qubits_ < 1) throw std::invalid_argument("circuit needs at least one data qubit");
    if (witness_qubits_ < 0) throw std::invalid_argument("witness qubit count must be >= 0");
    const int total = total_qubits();
    if (output_qubit_ < 0 || output_qubit_ >= total)
        throw std::invalid_argument("output qubit " + std::to_string(output_qubit_) +
                                    " outside register of size " + std::to_string(total));
    if (gates_.empty()) {
        // Keep T >= 1: an X,X pair on qubit 0 acts as the identity.
        gates_.push_back({GateKind::X, {0}});
        gates_.push_back({GateKind::X, {0}});
    }
    for (const Gate& g : gates_) {
        if (static_cast<int>(g.targets.size()) != gate_arity(g.kind))
            throw std::invalid_argument(std::string(gate_name(g.kind)) + " expects " +
                                        std::to_string(gate_arity(g.kind)) + " targets");
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            if (g.targets[i] < 0 || g.targets[i] >= total)
                throw std::invalid_argument("gate target " + std::to_string(g.targets[i]) +
                                            " outside register of size " + std::to_string(total));
            for (std::size_t j = i + 1; j < g.targets.size(); ++j)
                if (g.targets[i] == g.targets[j])
                    throw std::invalid_argument("duplicate targets on " +
                                                std::string(gate_name(g.kind)));
        }
    }
}

std::string Circuit::serialize() const {
    std::ostringstream os;
    os << "qubits " << data_qubits_ << "\n";
    if (witness_qubits_ > 0) os << "witness " << witness_qubits_ << "\n";
    os << "output " << output_qubit_ << "\n";
    for (const Gate& g : gates_) {
        os << gate_name(g.kind);
        for (int t : g.targets) os << ' ' << t;
        os << "\n";
    }
    return os.str();
}

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize_line(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

int parse_uint(const Token& tok, int line_no, const char* what) {
    int value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value < 0)
        throw ParseError(line_no, tok.column,
                         std::string("expected a nonnegative integer ") + what + ", got '" +
                             tok.text + "'");
    return value;
}

const std::map<std::string, GateKind, std::less<>>& gate_kinds() {
    static const std::map<std::string, GateKind, std::less<>> kinds = {
        {"X", GateKind::X},   {"Z", GateKind::Z},       {"H", GateKind::H},
        {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ}, {"TOFFOLI", GateKind::TOFFOLI},
    };
    return kinds;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;

    int data_qubits = -1;
    int witness_qubits = 0;
    int output_qubit = -1;
    bool saw_witness = false;
    std::vector<Gate> gates;
    int last_line = 1;

    while (std::getline(is, line)) {
        ++line_no;
        last_line = line_no;
        auto tokens = tokenize_line(line);
        if (tokens.empty()) continue;
        const Token& head = tokens[0];

        if (head.text == "qubits") {
            if (data_qubits >= 0)
                throw ParseError(line_no, head.column, "duplicate 'qubits' directive");
            if (tokens.size() != 2)
                throw ParseError(line_no, head.column, "'qubits' expects one count");
            data_qubits = parse_uint(tokens[1], line_no, "qubit count");
            if (data_qubits < 1)
                throw ParseError(line_no, tokens[1].column, "qubit count must be >= 1");
            continue;
        }
        if (data_qubits < 0)
            throw ParseError(line_no, head.column, "expected 'qubits <n>' as the first directive");

        if (head.text == "witness") {
            if (output_qubit >= 0 || !gates.empty())
                throw ParseError(line_no, head.column,
                                 "'witness' must appear before 'output' and the gates");
            if (saw_witness)
                throw ParseError(line_no, head.column, "duplicate 'witness' directive");
            if (tokens.size() != 2)
                throw ParseError(line_no, head.column, "'witness' expects one count");
            witness_qubits = parse_uint(tokens[1], line_no, "witness count");
            saw_witness = true;
            continue;
        }
        if (head.text == "output") {
            if (output_qubit >= 0)
                throw ParseError(line_no, head.column, "duplicate 'output' directive");
            if (tokens.size() != 2)
                throw ParseError(line_no, head.column, "'output' expects one qubit index");
            output_qubit = parse_uint(tokens[1], line_no, "output qubit");
            if (output_qubit >= data_qubits + witness_qubits)
                throw ParseError(line_no, tokens[1].column,
                                 "output qubit " + std::to_string(output_qubit) +
                                     " outside register of size " +
                                     std::to_string(data_qubits + witness_qubits));
            continue;
        }

        // Gate line.
        auto it = gate_kinds().find(head.text);
        if (it == gate_kinds().end())
            throw ParseError(line_no, head.column, "unknown gate kind '" + head.text + "'");
        if (output_qubit < 0)
            throw ParseError(line_no, head.column, "missing output declaration before gates");
        const GateKind kind = it->second;
        const int arity = gate_arity(kind);
        if (static_cast<int>(tokens.size()) != arity + 1)
            throw ParseError(line_no, head.column,
                             std::string(gate_name(kind)) + " expects " + std::to_string(arity) +
                                 " target(s)");
        Gate gate{kind, {}};
        for (int i = 1; i <= arity; ++i) {
            const int q = parse_uint(tokens[i], line_no, "qubit index");
            if (q >= data_qubits + witness_qubits)
                throw ParseError(line_no, tokens[i].column,
                                 "qubit index " + std::to_string(q) + " outside register of size " +
                                     std::to_string(data_qubits + witness_qubits));
            for (std::size_t j = 0; j < gate.targets.size(); ++j)
                if (gate.targets[j] == q)
                    throw ParseError(line_no, tokens[i].column, "duplicate targets");
            gate.targets.push_back(q);
        }
        gates.push_back(std::move(gate));
    }

    if (data_qubits < 0) throw ParseError(last_line, 1, "missing 'qubits' directive");
    if (output_qubit < 0) throw ParseError(last_line, 1, "missing output declaration");
    return Circuit(data_qubits, witness_qubits, std::move(gates), output_qubit);
}

Circuit with_witness_register(const Circuit& c, int extra) {
    if (extra < 0) throw std::invalid_argument("witness count must be >= 0");
    if (extra == 0) return c;
    return Circuit(c.data_qubits(), c.witness_qubits() + extra, c.gates(), c.output_qubit());
}

Circuit complement_circuit(const Circuit& c) {
    std::vector<Gate> gates = c.gates();
    gates.push_back({GateKind::X, {c.output_qubit()}});
    return Circuit(c.data_qubits(), c.witness_qubits(), std::move(gates), c.output_qubit());
}

Circuit claim_branch_circuit(const Circuit& c, Claim claim) {
    return claim == Claim::member ? c : complement_circuit(c);
}

}  // namespace posthoc
