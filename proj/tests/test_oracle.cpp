#include "posthoc/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace posthoc;

namespace {

const char* kBattery[] = {
    "qubits 1\noutput 0\nX 0\n",
    "qubits 1\noutput 0\nH 0\n",
    "qubits 2\noutput 0\nH 0\nCNOT 0 1\n",
    "qubits 2\nwitness 1\noutput 1\nH 2\nCNOT 2 0\nTOFFOLI 0 2 1\n",
    "qubits 3\noutput 2\nH 0\nCZ 0 1\nX 1\nCNOT 1 2\nZ 2\n",
};

}  // namespace

TEST_CASE("embed_operator matches the Pauli route") {
    // X on qubit 0 and Z on qubit 2 embedded into 3 qubits, against
    // to_matrix of the same string.
    Eigen::MatrixXcd xz(4, 4);
    xz.setZero();
    // Block index: bit 0 = qubit 0 (X), bit 1 = qubit 2 (Z).
    xz(0, 1) = 1;
    xz(1, 0) = 1;
    xz(2, 3) = -1;
    xz(3, 2) = -1;
    const Eigen::MatrixXcd embedded = oracle::embed_operator(xz, {0, 2}, 3);
    const Eigen::MatrixXcd direct = to_matrix(PauliString({{0, Axis::X}, {2, Axis::Z}}), 3);
    CHECK((embedded - direct).cwiseAbs().maxCoeff() <= 1e-15);

    // Reordered block qubits permute the embedding accordingly.
    const Eigen::MatrixXcd cnot = gate_matrix(GateKind::CNOT).cast<std::complex<double>>();
    const Eigen::MatrixXcd a = oracle::embed_operator(cnot, {1, 0}, 2);
    // Control = qubit 1, target = qubit 0: |01> and |11> swap targets.
    CHECK(std::abs(a(0, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(a(3, 2) - 1.0) <= 1e-15);
    CHECK(std::abs(a(2, 3) - 1.0) <= 1e-15);

    CHECK_THROWS_AS(oracle::embed_operator(cnot, {0, 3}, 2), std::invalid_argument);
}

TEST_CASE("term list and dense projector construction agree on the battery") {
    for (const char* text : kBattery) {
        const Circuit c = parse_circuit(text);
        for (Claim claim : {Claim::member, Claim::nonmember}) {
            const Eigen::MatrixXcd projector = oracle::dense_projector_hamiltonian(c, {}, claim);
            const Eigen::MatrixXcd terms =
                oracle::dense_from_terms(build_history_hamiltonian(c, {}, claim));
            CHECK((projector - terms).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }

    // Non-unit weights flow through both routes.
    const HamiltonianWeights w{0.5, 2.0, 1.5, 3.0};
    const Circuit c = parse_circuit(kBattery[1]);
    const Eigen::MatrixXcd projector =
        oracle::dense_projector_hamiltonian(c, w, Claim::member);
    const Eigen::MatrixXcd terms =
        oracle::dense_from_terms(build_history_hamiltonian(c, w, Claim::member));
    CHECK((projector - terms).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("tampering with a coefficient trips the matrix check") {
    const Circuit c = parse_circuit("qubits 1\noutput 0\nH 0\n");
    const LocalHamiltonian h = build_history_hamiltonian(c);
    const Eigen::MatrixXcd reference = oracle::dense_projector_hamiltonian(c, {}, Claim::member);

    CHECK(oracle::check_terms_against_matrix(h, reference).pass);

    std::vector<WeightedTerm> tampered = h.terms();
    tampered[1].coefficient += 1e-3;
    const LocalHamiltonian bad = LocalHamiltonian::from_terms(h.qubit_count(), tampered);
    const oracle::CheckResult r = oracle::check_terms_against_matrix(bad, reference);
    CHECK(!r.pass);
    CHECK(r.worst >= 1e-4);
}

TEST_CASE("an injected Y factor trips the xz check") {
    const LocalHamiltonian h = LocalHamiltonian::from_terms(
        2, {{1.0, {}}, {-0.5, PauliString({{0, Axis::Y}, {1, Axis::X}})}});
    const oracle::CheckResult r = oracle::check_xz_only(h);
    CHECK(!r.pass);
    CHECK(r.detail.find("Y") != std::string::npos);

    CHECK(oracle::check_xz_only(build_history_hamiltonian(parse_circuit(kBattery[3]))).pass);
}

TEST_CASE("sequential collapse reproduces the joint projector statistics") {
    const PureState bell = run_circuit(parse_circuit("qubits 2\noutput 0\nH 0\nCNOT 0 1\n"));
    const PauliString xx({{0, Axis::X}, {1, Axis::X}});
    CHECK(oracle::joint_product_plus_probability(bell, xx) == doctest::Approx(1.0));
    CHECK(oracle::sequential_product_plus_probability(bell, xx) == doctest::Approx(1.0));

    // A random-ish product state: every support and axis combination.
    const Circuit c = parse_circuit("qubits 3\noutput 0\nH 0\nCNOT 0 1\nH 2\nCZ 1 2\n");
    const PureState s = run_circuit(c);
    const PauliString strings[] = {
        PauliString::single(0, Axis::Z),
        PauliString::single(2, Axis::X),
        PauliString({{0, Axis::X}, {1, Axis::Z}}),
        PauliString({{0, Axis::Z}, {1, Axis::Z}, {2, Axis::X}}),
        PauliString({{0, Axis::X}, {1, Axis::X}, {2, Axis::Z}}),
    };
    for (const PauliString& p : strings) {
        const double joint = oracle::joint_product_plus_probability(s, p);
        const double sequential = oracle::sequential_product_plus_probability(s, p);
        CHECK(std::abs(joint - sequential) <= 1e-10);
    }
}

TEST_CASE("the full battery passes every oracle check") {
    for (const char* text : kBattery) {
        const Circuit c = parse_circuit(text);
        for (const oracle::CheckResult& r : oracle::run_all_checks(c, {}, kDefaultOracleCap)) {
            INFO(r.name, ": ", r.detail);
            CHECK(r.pass);
        }
    }
}
