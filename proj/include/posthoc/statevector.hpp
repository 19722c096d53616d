#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "posthoc/circuit.hpp"
#include "posthoc/pauli.hpp"
#include "posthoc/rng.hpp"

namespace posthoc {

inline constexpr int kSimulatorQubitCap = 20;

// Dense unit-norm amplitude vector; qubit 0 is the least significant bit of
// the amplitude index. Immutable: gate application and measurement return new
// states.
class PureState {
  public:
    PureState(int qubit_count, std::vector<std::complex<double>> amplitudes);

    int qubit_count() const { return qubit_count_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    double norm() const;

    bool operator==(const PureState&) const = default;

  private:
    int qubit_count_;
    std::vector<std::complex<double>> amplitudes_;
};

// Convex ensemble of pure states on a common register.
struct MixedState {
    struct Member {
        double weight;
        PureState state;
    };
    std::vector<Member> ensemble;

    int qubit_count() const;
    void validate() const;  // weights >= 0, sum 1 within 1e-12, equal registers
};

PureState zero_state(int qubit_count);
PureState basis_state(int qubit_count, std::uint64_t index);

PureState apply_gate(const PureState& s, const Gate& g);
PureState run_circuit(const Circuit& c);

/// Probability of reading 1 on the circuit's output qubit after running it
/// from the all-zero state.
double output_probability(const Circuit& c);

double pauli_expectation(const PureState& s, const PauliString& p);
double pauli_expectation(const MixedState& s, const PauliString& p);

enum class MeasureBasis { X, Z };

struct SingleQubitProjection {
    double p_plus;
    PureState post_plus;   // normalized; zero state sentinel when p ~ 0
    PureState post_minus;
};

/// Both projection branches of a single-qubit X or Z measurement. Shared by
/// the sampling path and the branch-enumeration oracle.
SingleQubitProjection project_single_qubit(const PureState& s, int qubit, MeasureBasis basis);

struct MeasureOutcome {
    int outcome;  // +1 or -1
    PureState post;
};

/// Projective single-qubit measurement; outcome +1 with probability
/// <(I + B)/2>. A branch with probability below 1e-15 is never taken.
MeasureOutcome measure_single_qubit(const PureState& s, int qubit, MeasureBasis basis,
                                    RandomStream& rng);

struct ProductMeasureOutcome {
    int product;                 // +1 or -1; +1 for the identity string
    std::vector<int> per_qubit;  // outcomes in support order
};

/// Measure each support qubit in its axis basis in sequence, collapsing the
/// state between measurements, and return the product of the outcomes.
/// Qubits outside the support are never touched. Y axes are rejected: the
/// verifier only performs X and Z measurements.
ProductMeasureOutcome measure_pauli_product(const PureState& s, const PauliString& p,
                                            RandomStream& rng);

/// Text dump: "qubits <m>" then one "<index> <re> <im>" triple per nonzero
/// amplitude.
void save_state(std::ostream& os, const PureState& s);
PureState load_state(std::istream& is);
PureState load_state_file(const std::string& path);

}  // namespace posthoc
