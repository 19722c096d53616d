#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "posthoc/circuit.hpp"
#include "posthoc/hamiltonian.hpp"
#include "posthoc/rng.hpp"
#include "posthoc/statevector.hpp"

namespace posthoc {

enum class StrategyKind { honest, ground_state, complement_history, maximally_mixed, fixed_state };

struct ProverStrategy {
    StrategyKind kind = StrategyKind::honest;
    std::string state_path;  // fixed_state only

    /// "honest", "ground_state", ..., or "fixed_state,<path>".
    static ProverStrategy parse(const std::string& text);
    std::string str() const;
};

// The state a prover commits to before any term is drawn. Either an explicit
// ensemble or the maximally mixed state kept implicit (a uniformly random
// basis state per round; exact by linearity of the acceptance probability).
class PreparedProver {
  public:
    static PreparedProver from_ensemble(MixedState ensemble);
    static PreparedProver uniform_basis(int qubit_count);

    int qubit_count() const;
    bool is_uniform_basis() const;

    /// Per-round state draw. Consumes exactly one uniform variate for an
    /// ensemble, one bounded draw for the implicit mixed state. Receives no
    /// term information: the prover cannot condition on the verifier's choice.
    PureState draw(RandomStream& rng) const;

    /// Exact Tr(H rho) for the committed state.
    double exact_energy(const LocalHamiltonian& h) const;

  private:
    struct UniformBasis {
        int qubit_count;
    };
    std::variant<MixedState, UniformBasis> state_;

    explicit PreparedProver(std::variant<MixedState, UniformBasis> s) : state_(std::move(s)) {}
};

/// Realize a strategy as a committed state for the Hamiltonian h built from
/// (c, claim).
PreparedProver prover_state(const ProverStrategy& strategy, const Circuit& c, Claim claim,
                            const LocalHamiltonian& h, int oracle_cap = kDefaultOracleCap);

struct RoundRecord {
    int term_index = 0;
    std::vector<int> per_qubit_outcomes;
    int product = 1;
    bool accepted = false;
};

/// One verification round: fix the prover's state, then draw a term S with
/// probability pi_S, measure its support qubits one at a time in the X/Z
/// bases, and accept iff the outcome product equals -sign(d_S).
RoundRecord verifier_round(const LocalHamiltonian& h, const PreparedProver& prover,
                           RandomStream& rng, Normalization n = Normalization::with_identity);

struct ProtocolReport {
    std::uint64_t rounds = 0;
    std::uint64_t accept_count = 0;
    double p_hat = 0.0;
    double p_exact = 0.0;
    double threshold = 0.5;
    bool verdict = false;  // p_hat >= threshold
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::with_identity;
    std::vector<RoundRecord> records;  // populated only when requested
};

struct RunOptions {
    std::uint64_t rounds = 1000;
    std::uint64_t master_seed = 0;
    double threshold = 0.5;
    Normalization normalization = Normalization::with_identity;
    int workers = 1;
    bool keep_records = false;
};

/// Run independent rounds with per-round random streams derived from
/// (master_seed, round index). The result is identical for any worker count.
ProtocolReport run_protocol(const LocalHamiltonian& h, const ProverStrategy& strategy,
                            const Circuit& c, Claim claim, const RunOptions& options,
                            int oracle_cap = kDefaultOracleCap);

/// Same, for an already prepared prover.
ProtocolReport run_protocol(const LocalHamiltonian& h, const PreparedProver& prover,
                            const RunOptions& options);

/// Hoeffding repetition count: distinguishing two means `gap` apart with a
/// midpoint threshold and error probability at most `error` needs
/// ceil(2 ln(2/error) / gap^2) rounds.
std::uint64_t amplification_rounds(double gap, double error);

/// Accept iff p_hat >= threshold (ties accept).
bool decide(const ProtocolReport& report, double threshold);

// Reference energies and thresholds for a paired yes/no study of one circuit:
// the honest world runs the claim branch, the cheating world is the opposite
// branch with the optimal (ground state) prover.
struct PairedReferences {
    double honest_energy = 0.0;    // history energy of the claim branch
    double cheat_energy = 0.0;     // ground energy of the opposite branch
    double p_honest = 0.0;         // acceptance of the honest world
    double p_cheat = 0.0;          // best acceptance of the cheating world
    double gap = 0.0;              // p_honest - p_cheat
    double threshold = 0.5;        // midpoint
};

PairedReferences paired_references(const Circuit& c, Claim claim, const HamiltonianWeights& weights,
                                   Normalization n = Normalization::with_identity,
                                   int oracle_cap = kDefaultOracleCap);

}  // namespace posthoc
