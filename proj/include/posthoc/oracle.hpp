#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posthoc/circuit.hpp"
#include "posthoc/hamiltonian.hpp"
#include "posthoc/statevector.hpp"

// Dense-matrix cross-checks. Everything here is built along an independent
// route from the term-list implementation it validates: projector blocks are
// assembled directly in the full 2^m space, never through the Pauli
// decomposition, and measurement statistics come from joint projectors rather
// than sequential collapse.
namespace posthoc::oracle {

/// Embed a k-local operator into the full register. Bit j of the block index
/// carries block_qubits[j].
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& block, const std::vector<int>& block_qubits,
                                int total_qubits);

/// Projector-form clock Hamiltonian of the claim branch, assembled densely.
Eigen::MatrixXcd dense_projector_hamiltonian(const Circuit& c, const HamiltonianWeights& weights,
                                             Claim claim);

/// Sum_S d_S to_matrix(S): the term route, densified for comparison.
Eigen::MatrixXcd dense_from_terms(const LocalHamiltonian& h);

double dense_expectation(const Eigen::MatrixXcd& m, const PureState& s);

/// P(product = +1) of measuring the string jointly: Tr((I + S)/2 rho).
double joint_product_plus_probability(const PureState& s, const PauliString& p);

/// P(product = +1) of the sequential per-qubit procedure, by exact branch
/// enumeration (no sampling).
double sequential_product_plus_probability(const PureState& s, const PauliString& p);

struct CheckResult {
    std::string name;
    bool pass;
    double worst;  // largest deviation observed
    std::string detail;
};

CheckResult check_matrix_reconstruction(const Circuit& c, const HamiltonianWeights& weights,
                                        Claim claim, double tol = 1e-9);
CheckResult check_history_energy_identity(const Circuit& c, const HamiltonianWeights& weights,
                                          double tol = 1e-10);
CheckResult check_sequential_vs_joint(const Circuit& c, const HamiltonianWeights& weights,
                                      Claim claim, double tol = 1e-10);
CheckResult check_p_acc_cross_form(const Circuit& c, const HamiltonianWeights& weights, Claim claim,
                                   double tol = 1e-10);
CheckResult check_xz_only(const LocalHamiltonian& h);

/// Matrix reconstruction against an explicit term list (fault-injection entry
/// point; cmd_oracle and the tampering tests share it).
CheckResult check_terms_against_matrix(const LocalHamiltonian& h, const Eigen::MatrixXcd& expected,
                                       double tol = 1e-9);

/// The full oracle battery for one circuit (both claims).
std::vector<CheckResult> run_all_checks(const Circuit& c, const HamiltonianWeights& weights,
                                        int oracle_cap);

}  // namespace posthoc::oracle
