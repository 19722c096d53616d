#include "posthoc/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace posthoc {

ProverStrategy ProverStrategy::parse(const std::string& text) {
    if (text == "honest") return {StrategyKind::honest, {}};
    if (text == "ground_state") return {StrategyKind::ground_state, {}};
    if (text == "complement_history") return {StrategyKind::complement_history, {}};
    if (text == "maximally_mixed") return {StrategyKind::maximally_mixed, {}};
    if (text.rfind("fixed_state,", 0) == 0) {
        std::string path = text.substr(std::string("fixed_state,").size());
        if (path.empty()) throw std::invalid_argument("fixed_state needs a path: fixed_state,<path>");
        return {StrategyKind::fixed_state, std::move(path)};
    }
    throw std::invalid_argument(
        "unknown strategy '" + text +
        "' (expected honest, ground_state, complement_history, maximally_mixed, or "
        "fixed_state,<path>)");
}

std::string ProverStrategy::str() const {
    switch (kind) {
        case StrategyKind::honest: return "honest";
        case StrategyKind::ground_state: return "ground_state";
        case StrategyKind::complement_history: return "complement_history";
        case StrategyKind::maximally_mixed: return "maximally_mixed";
        case StrategyKind::fixed_state: return "fixed_state," + state_path;
    }
    return "?";
}

PreparedProver PreparedProver::from_ensemble(MixedState ensemble) {
    ensemble.validate();
    return PreparedProver(std::move(ensemble));
}

PreparedProver PreparedProver::uniform_basis(int qubit_count) {
    if (qubit_count < 1 || qubit_count > kSimulatorQubitCap)
        throw std::invalid_argument("uniform basis prover outside the simulator cap");
    return PreparedProver(UniformBasis{qubit_count});
}

int PreparedProver::qubit_count() const {
    if (const auto* mixed = std::get_if<MixedState>(&state_)) return mixed->qubit_count();
    return std::get<UniformBasis>(state_).qubit_count;
}

bool PreparedProver::is_uniform_basis() const {
    return std::holds_alternative<UniformBasis>(state_);
}

PureState PreparedProver::draw(RandomStream& rng) const {
    if (const auto* uniform = std::get_if<UniformBasis>(&state_)) {
        const std::uint64_t index =
            rng.uniform_below(std::uint64_t{1} << uniform->qubit_count);
        return basis_state(uniform->qubit_count, index);
    }
    const MixedState& mixed = std::get<MixedState>(state_);
    if (mixed.ensemble.size() == 1) return mixed.ensemble.front().state;
    double u = rng.uniform();
    for (const MixedState::Member& member : mixed.ensemble) {
        u -= member.weight;
        if (u < 0) return member.state;
    }
    return mixed.ensemble.back().state;  // float round-off fell past the end
}

double PreparedProver::exact_energy(const LocalHamiltonian& h) const {
    if (const auto* uniform = std::get_if<UniformBasis>(&state_)) {
        if (uniform->qubit_count != h.qubit_count())
            throw std::invalid_argument("prover register does not match the Hamiltonian");
        // Tr(H)/2^m: every non-identity Pauli string is traceless, so the
        // identity coefficient is the whole answer.
        return h.identity_coefficient();
    }
    return energy(h, std::get<MixedState>(state_));
}

PreparedProver prover_state(const ProverStrategy& strategy, const Circuit& c, Claim claim,
                            const LocalHamiltonian& h, int oracle_cap) {
    switch (strategy.kind) {
        case StrategyKind::honest: {
            const Circuit branch = claim_branch_circuit(c, claim);
            return PreparedProver::from_ensemble({{{1.0, history_state(branch)}}});
        }
        case StrategyKind::ground_state: {
            EnergyReport report = ground_energy(h, oracle_cap);
            return PreparedProver::from_ensemble({{{1.0, std::move(report.ground_state)}}});
        }
        case StrategyKind::complement_history: {
            // The flipped-answer adversary: the honest history state with the
            // output bit inverted in the final snapshot. Running X_out as one
            // extra step would change the clock register size; conjugating
            // only the last snapshot keeps the register intact.
            const Circuit branch = claim_branch_circuit(c, claim);
            const PureState honest = history_state(branch);
            const std::size_t clock_mask = ((std::size_t{1} << branch.step_count()) - 1)
                                           << branch.total_qubits();
            const std::size_t out_bit = std::size_t{1} << branch.output_qubit();
            std::vector<std::complex<double>> amps = honest.amplitudes();
            for (std::size_t i = 0; i < amps.size(); ++i) {
                // Flip the output bit inside the final-clock snapshot only.
                if ((i & clock_mask) != clock_mask) continue;
                if (i & out_bit) continue;
                std::swap(amps[i], amps[i | out_bit]);
            }
            return PreparedProver::from_ensemble(
                {{{1.0, PureState(honest.qubit_count(), std::move(amps))}}});
        }
        case StrategyKind::maximally_mixed:
            return PreparedProver::uniform_basis(h.qubit_count());
        case StrategyKind::fixed_state: {
            PureState state = load_state_file(strategy.state_path);
            if (state.qubit_count() != h.qubit_count())
                throw std::runtime_error("fixed state has " + std::to_string(state.qubit_count()) +
                                         " qubits, the Hamiltonian needs " +
                                         std::to_string(h.qubit_count()));
            return PreparedProver::from_ensemble({{{1.0, std::move(state)}}});
        }
    }
    throw std::invalid_argument("unknown strategy kind");
}

namespace {

// Cumulative distribution over term indices; identity slot excluded under
// without_identity. Shared across rounds.
std::vector<double> cumulative_distribution(const LocalHamiltonian& h, Normalization n) {
    const std::vector<double> pi = term_distribution(h, n);
    std::vector<double> cdf(pi.size());
    double acc = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        acc += pi[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;  // absorb float round-off
    return cdf;
}

int draw_term(const std::vector<double>& cdf, RandomStream& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

RoundRecord run_round(const LocalHamiltonian& h, const PreparedProver& prover,
                      const std::vector<double>& cdf, RandomStream& rng) {
    // Commit the state first: the prover moves before the verifier's coin.
    const PureState state = prover.draw(rng);
    const int index = draw_term(cdf, rng);
    const WeightedTerm& term = h.terms()[static_cast<std::size_t>(index)];

    ProductMeasureOutcome outcome = measure_pauli_product(state, term.string, rng);
    const int target = term.coefficient > 0 ? -1 : +1;  // accept on -sign(d_S)
    return {index, std::move(outcome.per_qubit), outcome.product, outcome.product == target};
}

}  // namespace

RoundRecord verifier_round(const LocalHamiltonian& h, const PreparedProver& prover,
                           RandomStream& rng, Normalization n) {
    return run_round(h, prover, cumulative_distribution(h, n), rng);
}

ProtocolReport run_protocol(const LocalHamiltonian& h, const PreparedProver& prover,
                            const RunOptions& options) {
    if (prover.qubit_count() != h.qubit_count())
        throw std::invalid_argument("prover register does not match the Hamiltonian");
    if (options.workers < 1) throw std::invalid_argument("worker count must be >= 1");

    const std::vector<double> cdf = cumulative_distribution(h, options.normalization);
    const std::uint64_t rounds = options.rounds;

    std::vector<RoundRecord> records;
    std::uint64_t accepted = 0;

    if (options.keep_records) {
        // Record-keeping runs stay single-threaded; they are for inspection,
        // not throughput.
        records.reserve(rounds);
        for (std::uint64_t i = 0; i < rounds; ++i) {
            RandomStream rng = RandomStream::for_round(options.master_seed, i);
            records.push_back(run_round(h, prover, cdf, rng));
            if (records.back().accepted) ++accepted;
        }
    } else {
        const int workers = static_cast<int>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(options.workers),
                                    std::max<std::uint64_t>(rounds, 1)));
        if (workers <= 1) {
            for (std::uint64_t i = 0; i < rounds; ++i) {
                RandomStream rng = RandomStream::for_round(options.master_seed, i);
                accepted += run_round(h, prover, cdf, rng).accepted ? 1 : 0;
            }
        } else {
            // Rounds are independent with per-round streams, so any partition
            // over workers gives the same tally.
            std::vector<std::uint64_t> tallies(static_cast<std::size_t>(workers), 0);
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    std::uint64_t local = 0;
                    for (std::uint64_t i = static_cast<std::uint64_t>(w); i < rounds;
                         i += static_cast<std::uint64_t>(workers)) {
                        RandomStream rng = RandomStream::for_round(options.master_seed, i);
                        local += run_round(h, prover, cdf, rng).accepted ? 1 : 0;
                    }
                    tallies[static_cast<std::size_t>(w)] = local;
                });
            }
            for (std::thread& t : pool) t.join();
            for (std::uint64_t tally : tallies) accepted += tally;
        }
    }

    ProtocolReport report;
    report.rounds = rounds;
    report.accept_count = accepted;
    report.p_hat = rounds == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(rounds);
    report.p_exact =
        p_acc_from_energy(h, prover.exact_energy(h), options.normalization);
    report.threshold = options.threshold;
    report.verdict = report.p_hat >= options.threshold;
    report.seed = options.master_seed;
    report.normalization = options.normalization;
    report.records = std::move(records);
    return report;
}

ProtocolReport run_protocol(const LocalHamiltonian& h, const ProverStrategy& strategy,
                            const Circuit& c, Claim claim, const RunOptions& options,
                            int oracle_cap) {
    return run_protocol(h, prover_state(strategy, c, claim, h, oracle_cap), options);
}

std::uint64_t amplification_rounds(double gap, double error) {
    if (!(gap > 0) || !(gap <= 1)) throw std::invalid_argument("gap must lie in (0, 1]");
    if (!(error > 0) || !(error < 1)) throw std::invalid_argument("error must lie in (0, 1)");
    return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(2.0 / error) / (gap * gap)));
}

bool decide(const ProtocolReport& report, double threshold) { return report.p_hat >= threshold; }

PairedReferences paired_references(const Circuit& c, Claim claim, const HamiltonianWeights& weights,
                                   Normalization n, int oracle_cap) {
    const LocalHamiltonian h_claim = build_history_hamiltonian(c, weights, claim);
    const Claim opposite = claim == Claim::member ? Claim::nonmember : Claim::member;
    const LocalHamiltonian h_opposite = build_history_hamiltonian(c, weights, opposite);

    PairedReferences refs;
    refs.honest_energy = energy(h_claim, history_state(*h_claim.source_circuit()));
    refs.cheat_energy = ground_energy(h_opposite, oracle_cap).ground_energy;
    refs.p_honest = p_acc_from_energy(h_claim, refs.honest_energy, n);
    refs.p_cheat = p_acc_from_energy(h_opposite, refs.cheat_energy, n);
    refs.gap = refs.p_honest - refs.p_cheat;
    refs.threshold = 0.5 * (refs.p_honest + refs.p_cheat);
    return refs;
}

}  // namespace posthoc
