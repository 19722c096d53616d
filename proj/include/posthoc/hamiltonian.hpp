#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "posthoc/circuit.hpp"
#include "posthoc/pauli.hpp"
#include "posthoc/statevector.hpp"

namespace posthoc {

inline constexpr int kDefaultOracleCap = 12;

struct HamiltonianWeights {
    double input = 1.0;
    double clock = 1.0;
    double propagation = 1.0;
    double output = 1.0;
};

// Register layout of a clock Hamiltonian: data and witness qubits first, then
// one clock qubit per circuit step.
struct QubitLayout {
    int data_qubits = 0;
    int witness_qubits = 0;
    int clock_qubits = 0;

    int compute_qubits() const { return data_qubits + witness_qubits; }
    int total_qubits() const { return compute_qubits() + clock_qubits; }
    int clock_qubit(int step) const { return compute_qubits() + step - 1; }  // step in 1..T
};

// Whether the constant (identity string) component participates in the term
// distribution and the acceptance algebra. Both are valid protocols; the
// identity term always measures +1, so including it just mixes a
// deterministic accept-or-reject draw into the rounds.
enum class Normalization { with_identity, without_identity };

std::string_view normalization_name(Normalization n);

// Weighted Pauli-term list Sum_S d_S S with cached Sum|d_S|.
class LocalHamiltonian {
  public:
    static LocalHamiltonian from_terms(int qubit_count, std::vector<WeightedTerm> terms);

    int qubit_count() const { return qubit_count_; }
    const std::vector<WeightedTerm>& terms() const { return terms_; }
    int clock_steps() const { return clock_steps_; }
    const QubitLayout& layout() const { return layout_; }

    double sum_abs(Normalization n = Normalization::with_identity) const;
    /// Coefficient of the identity string (0 when absent).
    double identity_coefficient() const { return identity_coefficient_; }
    /// Index of the identity term in terms(), or -1.
    int identity_index() const { return identity_index_; }

    /// Circuit the Hamiltonian encodes (the claim branch), when built from one.
    const std::optional<Circuit>& source_circuit() const { return source_circuit_; }

    bool xz_only() const;

  private:
    LocalHamiltonian() = default;
    friend LocalHamiltonian build_history_hamiltonian(const Circuit&, const HamiltonianWeights&,
                                                      Claim);

    int qubit_count_ = 0;
    std::vector<WeightedTerm> terms_;
    double sum_abs_ = 0.0;
    double identity_coefficient_ = 0.0;
    int identity_index_ = -1;
    int clock_steps_ = 0;
    QubitLayout layout_;
    std::optional<Circuit> source_circuit_;
};

/// Feynman-Kitaev clock Hamiltonian of the claim branch of `c`, as a weighted
/// Pauli-term list (identity component included). Unary clock encoding with
/// step t = 1^t 0^(T-t); penalty blocks weighted by `weights`:
///   input:       |1><1|_q |0><0|_{clock 1} over every data/witness qubit
///   clock:       |0><0|_{clock t} |1><1|_{clock t+1} for t = 1..T-1
///   propagation: the standard 3-clock-qubit hop terms (2 at the boundaries)
///   output:      |0><0|_output |1><1|_{clock T}
/// All terms are Y-free over the supported gate set.
LocalHamiltonian build_history_hamiltonian(const Circuit& c,
                                           const HamiltonianWeights& weights = {},
                                           Claim claim = Claim::member);

/// (1/sqrt(T+1)) Sum_t |clock=t> (x) U_t...U_1 |0>^(n+w).
PureState history_state(const Circuit& c);

double energy(const LocalHamiltonian& h, const PureState& s);
double energy(const LocalHamiltonian& h, const MixedState& s);

struct EnergyReport {
    double ground_energy = 0.0;
    PureState ground_state;
    std::optional<double> history_energy;  // present when built from a circuit
    std::optional<double> gap_witness;     // history_energy - ground_energy
};

/// Exact dense diagonalization; the desk-scale stand-in for the promise
/// energies. Residual ||Hv - lambda v|| is checked against 1e-8.
EnergyReport ground_energy(const LocalHamiltonian& h, int oracle_cap = kDefaultOracleCap);

/// pi_S = |d_S| / Sum|d_S|, aligned with terms(); the identity slot is 0
/// under Normalization::without_identity.
std::vector<double> term_distribution(const LocalHamiltonian& h,
                                      Normalization n = Normalization::with_identity);

/// Closed-form acceptance probability
///   p_acc = 1 - (Tr(H rho) + Sum|d_S|) / (2 Sum|d_S|),
/// with the sums taken over the terms selected by the normalization.
double p_acc_exact(const LocalHamiltonian& h, const PureState& s,
                   Normalization n = Normalization::with_identity);
double p_acc_exact(const LocalHamiltonian& h, const MixedState& s,
                   Normalization n = Normalization::with_identity);
double p_acc_from_energy(const LocalHamiltonian& h, double full_energy,
                         Normalization n = Normalization::with_identity);

/// Independent route: Sum_S pi_S Tr((I - P_S) rho), P_S = (I + sign(d_S) S)/2.
double p_acc_via_projectors(const LocalHamiltonian& h, const PureState& s,
                            Normalization n = Normalization::with_identity);
double p_acc_via_projectors(const LocalHamiltonian& h, const MixedState& s,
                            Normalization n = Normalization::with_identity);

struct AcceptanceBounds {
    double p_if_energy_a = 0.0;
    double p_if_energy_b = 0.0;
    double a_ref = 0.0;
    double b_ref = 0.0;

    double gap() const { return p_if_energy_a - p_if_energy_b; }
};

/// p_acc evaluated at two reference energies a_ref <= b_ref. The 1-minus form
/// and the 1/2-centered form are both evaluated and must agree to 1e-12.
AcceptanceBounds acceptance_bounds(const LocalHamiltonian& h, double a_ref, double b_ref,
                                   Normalization n = Normalization::with_identity);

/// True iff no term carries a Y axis (the verifier then never needs a Y-basis
/// measurement).
bool xz_only_check(const LocalHamiltonian& h);

/// Term rows for the CSV/JSON term table: index, coefficient, string, pi, sign.
struct TermTableRow {
    int index;
    double coefficient;
    std::string string;
    double pi;
    int sign;
};
std::vector<TermTableRow> term_table(const LocalHamiltonian& h,
                                     Normalization n = Normalization::with_identity);
/// CSV with header "coefficient,string,pi,sign", sorted by |coefficient|
/// descending then string.
void write_term_table_csv(std::ostream& os, const LocalHamiltonian& h,
                          Normalization n = Normalization::with_identity);

}  // namespace posthoc
