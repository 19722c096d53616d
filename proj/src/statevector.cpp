#include "posthoc/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace posthoc {

namespace {

void check_qubit_count(int qubit_count) {
    if (qubit_count < 1 || qubit_count > kSimulatorQubitCap)
        throw std::invalid_argument("statevector supports 1.." +
                                    std::to_string(kSimulatorQubitCap) + " qubits, got " +
                                    std::to_string(qubit_count));
}

}  // namespace

PureState::PureState(int qubit_count, std::vector<std::complex<double>> amplitudes)
    : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {
    check_qubit_count(qubit_count_);
    if (amplitudes_.size() != (std::size_t{1} << qubit_count_))
        throw std::invalid_argument("amplitude count does not match qubit count");
}

double PureState::norm() const {
    double sum = 0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
}

int MixedState::qubit_count() const {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    return ensemble.front().state.qubit_count();
}

void MixedState::validate() const {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const int m = ensemble.front().state.qubit_count();
    double total = 0;
    for (const Member& member : ensemble) {
        if (member.weight < 0) throw std::invalid_argument("negative ensemble weight");
        if (member.state.qubit_count() != m)
            throw std::invalid_argument("ensemble members act on different registers");
        total += member.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ensemble weights sum to " + std::to_string(total));
}

PureState zero_state(int qubit_count) { return basis_state(qubit_count, 0); }

PureState basis_state(int qubit_count, std::uint64_t index) {
    check_qubit_count(qubit_count);
    if (index >= (std::uint64_t{1} << qubit_count))
        throw std::invalid_argument("basis index outside register");
    std::vector<std::complex<double>> amps(std::size_t{1} << qubit_count);
    amps[index] = 1.0;
    return PureState(qubit_count, std::move(amps));
}

namespace {

// In-place gate application on a raw amplitude buffer. Shared by the public
// immutable wrapper and the measurement loop, which reuses one buffer across
// a whole round.
void apply_gate_inplace(std::vector<std::complex<double>>& amps, int qubit_count, const Gate& g) {
    const int arity = gate_arity(g.kind);
    for (int j = 0; j < arity; ++j)
        if (g.targets[j] < 0 || g.targets[j] >= qubit_count)
            throw std::invalid_argument("gate target outside register");

    switch (g.kind) {
        case GateKind::X: {
            const std::size_t bit = std::size_t{1} << g.targets[0];
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (i & bit) std::swap(amps[i], amps[i ^ bit]);
            return;
        }
        case GateKind::Z: {
            const std::size_t bit = std::size_t{1} << g.targets[0];
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (i & bit) amps[i] = -amps[i];
            return;
        }
        case GateKind::H: {
            const std::size_t bit = std::size_t{1} << g.targets[0];
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (i & bit) continue;
                const auto lo = amps[i];
                const auto hi = amps[i | bit];
                amps[i] = (lo + hi) * inv_sqrt2;
                amps[i | bit] = (lo - hi) * inv_sqrt2;
            }
            return;
        }
        case GateKind::CNOT: {
            const std::size_t control = std::size_t{1} << g.targets[0];
            const std::size_t target = std::size_t{1} << g.targets[1];
            for (std::size_t i = 0; i < amps.size(); ++i)
                if ((i & control) && (i & target)) std::swap(amps[i], amps[i ^ target]);
            return;
        }
        case GateKind::CZ: {
            const std::size_t mask =
                (std::size_t{1} << g.targets[0]) | (std::size_t{1} << g.targets[1]);
            for (std::size_t i = 0; i < amps.size(); ++i)
                if ((i & mask) == mask) amps[i] = -amps[i];
            return;
        }
        case GateKind::TOFFOLI: {
            const std::size_t controls =
                (std::size_t{1} << g.targets[0]) | (std::size_t{1} << g.targets[1]);
            const std::size_t target = std::size_t{1} << g.targets[2];
            for (std::size_t i = 0; i < amps.size(); ++i)
                if ((i & controls) == controls && (i & target)) std::swap(amps[i], amps[i ^ target]);
            return;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

}  // namespace

PureState apply_gate(const PureState& s, const Gate& g) {
    std::vector<std::complex<double>> amps = s.amplitudes();
    apply_gate_inplace(amps, s.qubit_count(), g);
    return PureState(s.qubit_count(), std::move(amps));
}

PureState run_circuit(const Circuit& c) {
    std::vector<std::complex<double>> amps(std::size_t{1} << c.total_qubits());
    amps[0] = 1.0;
    for (const Gate& g : c.gates()) apply_gate_inplace(amps, c.total_qubits(), g);
    return PureState(c.total_qubits(), std::move(amps));
}

double output_probability(const Circuit& c) {
    const PureState final_state = run_circuit(c);
    const std::size_t bit = std::size_t{1} << c.output_qubit();
    double p = 0;
    for (std::size_t i = 0; i < final_state.dimension(); ++i)
        if (i & bit) p += std::norm(final_state.amplitudes()[i]);
    return p;
}

double pauli_expectation(const PureState& s, const PauliString& p) {
    if (p.max_qubit() >= s.qubit_count())
        throw std::invalid_argument("Pauli string acts outside the register");
    std::uint64_t xmask = 0, zymask = 0;
    int y_count = 0;
    for (const auto& [q, axis] : p.axes()) {
        if (axis != Axis::Z) xmask |= std::uint64_t{1} << q;
        if (axis != Axis::X) zymask |= std::uint64_t{1} << q;
        if (axis == Axis::Y) ++y_count;
    }
    static const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> y_phase = i_pow[y_count & 3];

    // <psi|P|psi> = sum_i conj(psi[i ^ x]) * phase(i) * psi[i].
    const auto& amps = s.amplitudes();
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double sign = (std::popcount(i & zymask) & 1) ? -1.0 : 1.0;
        acc += std::conj(amps[i ^ xmask]) * (y_phase * sign) * amps[i];
    }
    return acc.real();
}

double pauli_expectation(const MixedState& s, const PauliString& p) {
    double acc = 0;
    for (const MixedState::Member& member : s.ensemble)
        acc += member.weight * pauli_expectation(member.state, p);
    return acc;
}

SingleQubitProjection project_single_qubit(const PureState& s, int qubit, MeasureBasis basis) {
    if (qubit < 0 || qubit >= s.qubit_count())
        throw std::invalid_argument("measured qubit outside register");
    const std::size_t bit = std::size_t{1} << qubit;
    const auto& amps = s.amplitudes();

    std::vector<std::complex<double>> plus(amps.size()), minus(amps.size());
    double p_plus = 0;
    if (basis == MeasureBasis::Z) {
        // +1 outcome is |0> on the measured qubit.
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & bit)
                minus[i] = amps[i];
            else {
                plus[i] = amps[i];
                p_plus += std::norm(amps[i]);
            }
        }
    } else {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & bit) continue;
            const auto sym = (amps[i] + amps[i | bit]) * 0.5;
            const auto anti = (amps[i] - amps[i | bit]) * 0.5;
            plus[i] = plus[i | bit] = sym;
            minus[i] = anti;
            minus[i | bit] = -anti;
            p_plus += 2.0 * std::norm(sym);
        }
    }
    p_plus = std::clamp(p_plus, 0.0, 1.0);

    auto normalize = [&](std::vector<std::complex<double>>& branch, double prob) {
        if (prob < 1e-15) {
            // Dead branch: park a valid placeholder, the caller never takes it.
            std::fill(branch.begin(), branch.end(), std::complex<double>(0, 0));
            branch[0] = 1.0;
            return;
        }
        const double scale = 1.0 / std::sqrt(prob);
        for (auto& a : branch) a *= scale;
    };
    normalize(plus, p_plus);
    normalize(minus, 1.0 - p_plus);
    return {p_plus, PureState(s.qubit_count(), std::move(plus)),
            PureState(s.qubit_count(), std::move(minus))};
}

MeasureOutcome measure_single_qubit(const PureState& s, int qubit, MeasureBasis basis,
                                    RandomStream& rng) {
    SingleQubitProjection proj = project_single_qubit(s, qubit, basis);
    const bool take_plus = proj.p_plus >= 1e-15 &&
                           (proj.p_plus > 1.0 - 1e-15 || rng.uniform() < proj.p_plus);
    if (take_plus) return {+1, std::move(proj.post_plus)};
    return {-1, std::move(proj.post_minus)};
}

namespace {

// One measurement step directly on a working buffer: draws the outcome,
// collapses in place. Avoids the two full branch copies of
// project_single_qubit, which matters across millions of protocol rounds.
// Loops walk (low, high) index pairs: low enumerates indices with the
// measured bit clear via a split into the bits below and above it.
int measure_inplace(std::vector<std::complex<double>>& amps, int qubit, MeasureBasis basis,
                    RandomStream& rng) {
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t pairs = amps.size() >> 1;

    auto pair_index = [&](std::size_t k) {
        return ((k & ~(bit - 1)) << 1) | (k & (bit - 1));
    };

    double p_plus = 0;
    if (basis == MeasureBasis::Z) {
        for (std::size_t k = 0; k < pairs; ++k) p_plus += std::norm(amps[pair_index(k)]);
    } else {
        // <(I+X)/2> without basis rotation: |a_lo + a_hi|^2 / 2 per pair.
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::size_t lo = pair_index(k);
            p_plus += 0.5 * std::norm(amps[lo] + amps[lo | bit]);
        }
    }
    p_plus = std::clamp(p_plus, 0.0, 1.0);

    const bool take_plus =
        p_plus >= 1e-15 && (p_plus > 1.0 - 1e-15 || rng.uniform() < p_plus);
    const double kept = take_plus ? p_plus : 1.0 - p_plus;
    const double scale = 1.0 / std::sqrt(kept);

    if (basis == MeasureBasis::Z) {
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::size_t lo = pair_index(k);
            if (take_plus) {
                amps[lo] *= scale;
                amps[lo | bit] = 0;
            } else {
                amps[lo] = 0;
                amps[lo | bit] *= scale;
            }
        }
    } else {
        // Collapse onto (I +/- X)/2 directly: both halves of the pair get the
        // (anti)symmetrized amplitude.
        const double half_scale = 0.5 * scale;
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::size_t lo = pair_index(k);
            if (take_plus) {
                const auto sym = (amps[lo] + amps[lo | bit]) * half_scale;
                amps[lo] = sym;
                amps[lo | bit] = sym;
            } else {
                const auto anti = (amps[lo] - amps[lo | bit]) * half_scale;
                amps[lo] = anti;
                amps[lo | bit] = -anti;
            }
        }
    }
    return take_plus ? +1 : -1;
}

}  // namespace

ProductMeasureOutcome measure_pauli_product(const PureState& s, const PauliString& p,
                                            RandomStream& rng) {
    if (!p.xz_only())
        throw std::invalid_argument("verifier measurements are limited to X and Z axes");
    if (p.max_qubit() >= s.qubit_count())
        throw std::invalid_argument("Pauli string acts outside the register");

    ProductMeasureOutcome result{+1, {}};
    if (p.is_identity()) return result;

    std::vector<std::complex<double>> amps = s.amplitudes();
    result.per_qubit.reserve(p.axes().size());
    for (const auto& [qubit, axis] : p.axes()) {
        const int outcome = measure_inplace(
            amps, qubit, axis == Axis::X ? MeasureBasis::X : MeasureBasis::Z, rng);
        result.per_qubit.push_back(outcome);
        result.product *= outcome;
    }
    return result;
}

void save_state(std::ostream& os, const PureState& s) {
    os << "qubits " << s.qubit_count() << "\n";
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        const auto& a = s.amplitudes()[i];
        if (a == std::complex<double>(0, 0)) continue;
        os << i << ' ' << format_double(a.real()) << ' ' << format_double(a.imag()) << "\n";
    }
}

PureState load_state(std::istream& is) {
    std::string word;
    int qubit_count = 0;
    if (!(is >> word) || word != "qubits" || !(is >> qubit_count))
        throw std::runtime_error("state file must start with 'qubits <m>'");
    check_qubit_count(qubit_count);
    std::vector<std::complex<double>> amps(std::size_t{1} << qubit_count);

    std::uint64_t index;
    double re, im;
    while (is >> index >> re >> im) {
        if (index >= amps.size())
            throw std::runtime_error("state file amplitude index outside register");
        amps[index] = {re, im};
    }
    if (!is.eof() && is.fail()) throw std::runtime_error("malformed amplitude line in state file");

    double norm_sq = 0;
    for (const auto& a : amps) norm_sq += std::norm(a);
    if (std::abs(norm_sq - 1.0) > 1e-9)
        throw std::runtime_error("state file is not normalized (|psi|^2 = " +
                                 std::to_string(norm_sq) + ")");
    // Round residual float error away so downstream probabilities stay in range.
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& a : amps) a *= scale;
    return PureState(qubit_count, std::move(amps));
}

PureState load_state_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open state file: " + path);
    return load_state(is);
}

}  // namespace posthoc
