#include "posthoc/circuit.hpp"

#include <doctest.h>

using namespace posthoc;

namespace {

ParseError capture_parse_error(const std::string& text) {
    try {
        parse_circuit(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    return ParseError(0, 0, "unreachable");
}

}  // namespace

TEST_CASE("gate matrices are real, Hermitian, and involutory") {
    for (GateKind kind : {GateKind::X, GateKind::Z, GateKind::H, GateKind::CNOT, GateKind::CZ,
                          GateKind::TOFFOLI}) {
        const Eigen::MatrixXd& m = gate_matrix(kind);
        const int dim = 1 << gate_arity(kind);
        REQUIRE(m.rows() == dim);
        REQUIRE(m.cols() == dim);
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((m * m - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("CNOT convention: control is bit 0, target is bit 1") {
    const Eigen::MatrixXd& cnot = gate_matrix(GateKind::CNOT);
    // |control=1, target=0> = index 1 maps to |1,1> = index 3.
    CHECK(cnot(3, 1) == 1.0);
    CHECK(cnot(1, 3) == 1.0);
    CHECK(cnot(0, 0) == 1.0);
    CHECK(cnot(2, 2) == 1.0);
    CHECK(cnot(1, 1) == 0.0);
}

TEST_CASE("TOFFOLI convention: controls are bits 0 and 1, target is bit 2") {
    const Eigen::MatrixXd& toffoli = gate_matrix(GateKind::TOFFOLI);
    // |c1=1, c2=1, t=0> = index 3 maps to index 7.
    CHECK(toffoli(7, 3) == 1.0);
    CHECK(toffoli(3, 7) == 1.0);
    for (int i = 0; i < 3; ++i) CHECK(toffoli(i, i) == 1.0);
}

TEST_CASE("parse, serialize, and reparse round-trips") {
    const std::string text =
        "qubits 3\n"
        "witness 1\n"
        "output 2\n"
        "H 0\n"
        "CNOT 0 1\n"
        "TOFFOLI 0 1 2\n"
        "CZ 2 3\n";
    const Circuit c = parse_circuit(text);
    CHECK(c.data_qubits() == 3);
    CHECK(c.witness_qubits() == 1);
    CHECK(c.total_qubits() == 4);
    CHECK(c.output_qubit() == 2);
    CHECK(c.step_count() == 4);
    CHECK(c.gates()[1] == Gate{GateKind::CNOT, {0, 1}});
    CHECK(parse_circuit(c.serialize()) == c);
}

TEST_CASE("comments and blank lines are ignored") {
    const Circuit c = parse_circuit(
        "# a comment line\n"
        "qubits 1   # trailing comment\n"
        "\n"
        "output 0\n"
        "X 0\n");
    CHECK(c.step_count() == 1);
    CHECK(c.gates()[0] == Gate{GateKind::X, {0}});
}

TEST_CASE("an empty gate list is padded so the clock stays defined") {
    const Circuit c = parse_circuit("qubits 2\noutput 1\n");
    REQUIRE(c.step_count() == 2);
    CHECK(c.gates()[0] == Gate{GateKind::X, {0}});
    CHECK(c.gates()[1] == Gate{GateKind::X, {0}});
}

TEST_CASE("parse errors carry 1-based line and column") {
    SUBCASE("missing qubits directive") {
        const ParseError e = capture_parse_error("output 0\nX 0\n");
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("qubits") != std::string::npos);
    }
    SUBCASE("missing output declaration") {
        const ParseError e = capture_parse_error("qubits 1\nX 0\n");
        CHECK(e.line() == 2);
        CHECK(e.column() == 1);
    }
    SUBCASE("unknown gate") {
        const ParseError e = capture_parse_error("qubits 1\noutput 0\nRY 0\n");
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("RY") != std::string::npos);
    }
    SUBCASE("qubit index out of range") {
        const ParseError e = capture_parse_error("qubits 2\noutput 0\nCNOT 0 2\n");
        CHECK(e.line() == 3);
        CHECK(e.column() == 8);
    }
    SUBCASE("wrong arity") {
        const ParseError e = capture_parse_error("qubits 2\noutput 0\nCNOT 0\n");
        CHECK(e.line() == 3);
    }
    SUBCASE("duplicate targets") {
        const ParseError e = capture_parse_error("qubits 2\noutput 0\nCNOT 1 1\n");
        CHECK(e.line() == 3);
    }
    SUBCASE("duplicate directives") {
        CHECK(capture_parse_error("qubits 1\nqubits 1\noutput 0\n").line() == 2);
        CHECK(capture_parse_error("qubits 1\noutput 0\noutput 0\n").line() == 3);
    }
    SUBCASE("witness after gates") {
        const ParseError e = capture_parse_error("qubits 1\noutput 0\nX 0\nwitness 1\n");
        CHECK(e.line() == 4);
    }
    SUBCASE("output outside register") {
        const ParseError e = capture_parse_error("qubits 2\noutput 5\n");
        CHECK(e.line() == 2);
        CHECK(e.column() == 8);
    }
    SUBCASE("negative count") {
        CHECK(capture_parse_error("qubits -1\noutput 0\n").line() == 1);
    }
}

TEST_CASE("complement appends an X on the output qubit") {
    const Circuit c = parse_circuit("qubits 2\noutput 1\nH 0\nCNOT 0 1\n");
    const Circuit comp = complement_circuit(c);
    REQUIRE(comp.step_count() == 3);
    CHECK(comp.gates().back() == Gate{GateKind::X, {1}});
    CHECK(comp.output_qubit() == c.output_qubit());

    CHECK(claim_branch_circuit(c, Claim::member) == c);
    CHECK(claim_branch_circuit(c, Claim::nonmember) == comp);
}

TEST_CASE("witness extension widens the register without touching gates") {
    const Circuit c = parse_circuit("qubits 2\noutput 0\nH 0\n");
    const Circuit wide = with_witness_register(c, 2);
    CHECK(wide.data_qubits() == 2);
    CHECK(wide.witness_qubits() == 2);
    CHECK(wide.total_qubits() == 4);
    CHECK(wide.gates() == c.gates());
    CHECK(with_witness_register(c, 0) == c);
    CHECK_THROWS_AS(with_witness_register(c, -1), std::invalid_argument);
}

TEST_CASE("circuit constructor validates directly built gate lists") {
    CHECK_THROWS_AS(Circuit(1, 0, {{GateKind::X, {1}}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(Circuit(1, 0, {{GateKind::CNOT, {0}}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(Circuit(2, 0, {{GateKind::CNOT, {1, 1}}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(Circuit(0, 0, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(Circuit(1, 0, {}, 3), std::invalid_argument);
}
