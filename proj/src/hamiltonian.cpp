#include "posthoc/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

namespace posthoc {

std::string_view normalization_name(Normalization n) {
    return n == Normalization::with_identity ? "with-identity" : "without-identity";
}

namespace {

std::vector<WeightedTerm> canonicalize_terms(std::vector<WeightedTerm> terms, int qubit_count) {
    std::map<PauliString, double> merged;
    for (WeightedTerm& t : terms) {
        if (t.string.max_qubit() >= qubit_count)
            throw std::invalid_argument("term acts outside the register");
        merged[std::move(t.string)] += t.coefficient;
    }
    std::vector<WeightedTerm> out;
    out.reserve(merged.size());
    for (auto& [string, coefficient] : merged) {
        if (std::abs(coefficient) <= 1e-12) continue;
        out.push_back({coefficient, string});
    }
    return out;  // map order: identity first, then lexicographic by factors
}

}  // namespace

LocalHamiltonian LocalHamiltonian::from_terms(int qubit_count, std::vector<WeightedTerm> terms) {
    if (qubit_count < 1) throw std::invalid_argument("Hamiltonian needs at least one qubit");
    LocalHamiltonian h;
    h.qubit_count_ = qubit_count;
    h.terms_ = canonicalize_terms(std::move(terms), qubit_count);
    h.layout_ = {qubit_count, 0, 0};
    for (std::size_t i = 0; i < h.terms_.size(); ++i) {
        h.sum_abs_ += std::abs(h.terms_[i].coefficient);
        if (h.terms_[i].string.is_identity()) {
            h.identity_coefficient_ = h.terms_[i].coefficient;
            h.identity_index_ = static_cast<int>(i);
        }
    }
    if (h.terms_.empty()) throw std::invalid_argument("Hamiltonian has no nonzero terms");
    return h;
}

double LocalHamiltonian::sum_abs(Normalization n) const {
    if (n == Normalization::with_identity) return sum_abs_;
    const double reduced = sum_abs_ - std::abs(identity_coefficient_);
    if (reduced <= 0)
        throw std::logic_error("without-identity normalization needs a non-identity term");
    return reduced;
}

bool LocalHamiltonian::xz_only() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const WeightedTerm& t) { return t.string.xz_only(); });
}

namespace {

// Dense kron with A on the high bits: (A (x) B)(ia*db+ib, ja*db+jb) = A*B.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Decompose a real Hermitian block over local qubits and append the terms,
// remapped through `qubits` (bit j of the block index = qubits[j]) and scaled
// by `weight`.
void add_block(std::vector<WeightedTerm>& sink, const Eigen::MatrixXd& block,
               const std::vector<int>& qubits, double weight) {
    const int k = static_cast<int>(qubits.size());
    const auto local = decompose_hermitian(block.cast<std::complex<double>>(), k);
    for (const WeightedTerm& t : local) {
        std::vector<std::pair<int, Axis>> axes;
        axes.reserve(t.string.axes().size());
        for (const auto& [q, axis] : t.string.axes())
            axes.emplace_back(qubits[static_cast<std::size_t>(q)], axis);
        sink.push_back({weight * t.coefficient, PauliString(std::move(axes))});
    }
}

Eigen::MatrixXd ket_bra(int dim, int row, int col) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    m(row, col) = 1;
    return m;
}

const Eigen::MatrixXd kP0 = (Eigen::MatrixXd(2, 2) << 1, 0, 0, 0).finished();
const Eigen::MatrixXd kP1 = (Eigen::MatrixXd(2, 2) << 0, 0, 0, 1).finished();

}  // namespace

LocalHamiltonian build_history_hamiltonian(const Circuit& c, const HamiltonianWeights& weights,
                                           Claim claim) {
    const Circuit branch = claim_branch_circuit(c, claim);
    const int compute = branch.total_qubits();
    const int steps = branch.step_count();
    const QubitLayout layout{branch.data_qubits(), branch.witness_qubits(), steps};

    std::vector<WeightedTerm> terms;

    // Input block: every compute qubit must be |0> while the clock reads 0.
    for (int q = 0; q < compute; ++q)
        add_block(terms, kron(kP0, kP1), {q, layout.clock_qubit(1)}, weights.input);

    // Clock block: forbid the non-unary pattern 0 at t followed by 1 at t+1.
    for (int t = 1; t < steps; ++t)
        add_block(terms, kron(kP1, kP0), {layout.clock_qubit(t), layout.clock_qubit(t + 1)},
                  weights.clock);

    // Propagation block, one term per step. Clock sub-index bit order follows
    // the listed clock qubits; the data factor sits on the low bits.
    for (int t = 1; t <= steps; ++t) {
        const Gate& gate = branch.gates()[static_cast<std::size_t>(t - 1)];
        const Eigen::MatrixXd& u = gate_matrix(gate.kind);
        const int data_dim = static_cast<int>(u.rows());

        std::vector<int> clock_qubits;
        int prev_idx, cur_idx;
        if (steps == 1) {
            clock_qubits = {layout.clock_qubit(1)};
            prev_idx = 0;  // clock 0
            cur_idx = 1;   // clock 1
        } else if (t == 1) {
            clock_qubits = {layout.clock_qubit(1), layout.clock_qubit(2)};
            prev_idx = 0;  // (c1,c2) = (0,0)
            cur_idx = 1;   // (1,0)
        } else if (t < steps) {
            clock_qubits = {layout.clock_qubit(t - 1), layout.clock_qubit(t),
                            layout.clock_qubit(t + 1)};
            prev_idx = 1;  // (1,0,0)
            cur_idx = 3;   // (1,1,0)
        } else {
            clock_qubits = {layout.clock_qubit(steps - 1), layout.clock_qubit(steps)};
            prev_idx = 1;  // (1,0)
            cur_idx = 3;   // (1,1)
        }
        const int clock_dim = 1 << clock_qubits.size();
        const Eigen::MatrixXd clock_diag =
            ket_bra(clock_dim, prev_idx, prev_idx) + ket_bra(clock_dim, cur_idx, cur_idx);
        const Eigen::MatrixXd hop =
            ket_bra(clock_dim, prev_idx, cur_idx) + ket_bra(clock_dim, cur_idx, prev_idx);
        const Eigen::MatrixXd block =
            0.5 * kron(clock_diag, Eigen::MatrixXd::Identity(data_dim, data_dim)) -
            0.5 * kron(hop, u);

        std::vector<int> qubits = gate.targets;
        qubits.insert(qubits.end(), clock_qubits.begin(), clock_qubits.end());
        add_block(terms, block, qubits, weights.propagation);
    }

    // Output block: reading 0 on the output qubit at the final clock value is
    // the rejected outcome.
    add_block(terms, kron(kP1, kP0), {branch.output_qubit(), layout.clock_qubit(steps)},
              weights.output);

    LocalHamiltonian h = LocalHamiltonian::from_terms(compute + steps, std::move(terms));
    h.clock_steps_ = steps;
    h.layout_ = layout;
    h.source_circuit_ = branch;
    return h;
}

PureState history_state(const Circuit& c) {
    const int compute = c.total_qubits();
    const int steps = c.step_count();
    const int total = compute + steps;
    if (total > kSimulatorQubitCap)
        throw std::invalid_argument("history state needs " + std::to_string(total) +
                                    " qubits, over the simulator cap of " +
                                    std::to_string(kSimulatorQubitCap));

    std::vector<std::complex<double>> snapshot(std::size_t{1} << compute);
    snapshot[0] = 1.0;
    std::vector<std::complex<double>> amps(std::size_t{1} << total);
    const double scale = 1.0 / std::sqrt(static_cast<double>(steps + 1));

    auto deposit = [&](int t) {
        // Unary clock for step t: clock qubits 1..t set.
        const std::size_t clock_bits = ((std::size_t{1} << t) - 1) << compute;
        for (std::size_t i = 0; i < snapshot.size(); ++i) amps[clock_bits | i] = scale * snapshot[i];
    };

    deposit(0);
    PureState partial = zero_state(compute);
    for (int t = 1; t <= steps; ++t) {
        partial = apply_gate(partial, c.gates()[static_cast<std::size_t>(t - 1)]);
        snapshot = partial.amplitudes();
        deposit(t);
    }
    return PureState(total, std::move(amps));
}

double energy(const LocalHamiltonian& h, const PureState& s) {
    if (s.qubit_count() != h.qubit_count())
        throw std::invalid_argument("state register does not match the Hamiltonian");
    double e = 0;
    for (const WeightedTerm& t : h.terms()) e += t.coefficient * pauli_expectation(s, t.string);
    return e;
}

double energy(const LocalHamiltonian& h, const MixedState& s) {
    double e = 0;
    for (const MixedState::Member& member : s.ensemble) e += member.weight * energy(h, member.state);
    return e;
}

namespace {

// Accumulate the term list into a dense real symmetric matrix. Valid only for
// Y-free Hamiltonians, which is every Hamiltonian this library builds.
Eigen::MatrixXd dense_real(const LocalHamiltonian& h) {
    const std::int64_t dim = 1ll << h.qubit_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const WeightedTerm& t : h.terms()) {
        std::uint64_t xmask = 0, zmask = 0;
        for (const auto& [q, axis] : t.string.axes()) {
            if (axis != Axis::Z) xmask |= 1ull << q;
            if (axis != Axis::X) zmask |= 1ull << q;
        }
        for (std::int64_t col = 0; col < dim; ++col) {
            const double sign =
                (std::popcount(static_cast<std::uint64_t>(col) & zmask) & 1) ? -1 : 1;
            m(col ^ static_cast<std::int64_t>(xmask), col) += t.coefficient * sign;
        }
    }
    return m;
}

}  // namespace

EnergyReport ground_energy(const LocalHamiltonian& h, int oracle_cap) {
    if (h.qubit_count() > oracle_cap)
        throw std::runtime_error("exact diagonalization capped at " + std::to_string(oracle_cap) +
                                 " qubits; this Hamiltonian has " +
                                 std::to_string(h.qubit_count()));
    if (!h.xz_only())
        throw std::invalid_argument("ground_energy expects a Y-free Hamiltonian");

    const Eigen::MatrixXd m = dense_real(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigensolver failed to converge");
    const double lambda = solver.eigenvalues()(0);
    const Eigen::VectorXd vec = solver.eigenvectors().col(0);

    const double residual = (m * vec - lambda * vec).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
        throw std::runtime_error("eigensolver residual " + std::to_string(residual) +
                                 " above 1e-8");

    std::vector<std::complex<double>> amps(static_cast<std::size_t>(vec.size()));
    for (Eigen::Index i = 0; i < vec.size(); ++i) amps[static_cast<std::size_t>(i)] = vec(i);

    EnergyReport report{lambda, PureState(h.qubit_count(), std::move(amps)), {}, {}};
    if (h.source_circuit() && h.qubit_count() <= kSimulatorQubitCap) {
        report.history_energy = energy(h, history_state(*h.source_circuit()));
        report.gap_witness = *report.history_energy - lambda;
    }
    return report;
}

std::vector<double> term_distribution(const LocalHamiltonian& h, Normalization n) {
    const double total = h.sum_abs(n);
    std::vector<double> pi(h.terms().size(), 0.0);
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (n == Normalization::without_identity &&
            static_cast<int>(i) == h.identity_index())
            continue;
        pi[i] = std::abs(h.terms()[i].coefficient) / total;
    }
    return pi;
}

namespace {

// Energy restricted to the terms the normalization selects, given the energy
// of the complete term list.
double selected_energy(const LocalHamiltonian& h, double full_energy, Normalization n) {
    return n == Normalization::with_identity ? full_energy
                                             : full_energy - h.identity_coefficient();
}

}  // namespace

double p_acc_from_energy(const LocalHamiltonian& h, double full_energy, Normalization n) {
    const double total = h.sum_abs(n);
    return 1.0 - (selected_energy(h, full_energy, n) + total) / (2.0 * total);
}

double p_acc_exact(const LocalHamiltonian& h, const PureState& s, Normalization n) {
    return p_acc_from_energy(h, energy(h, s), n);
}

double p_acc_exact(const LocalHamiltonian& h, const MixedState& s, Normalization n) {
    return p_acc_from_energy(h, energy(h, s), n);
}

namespace {

template <typename State>
double p_acc_projector_route(const LocalHamiltonian& h, const State& s, Normalization n) {
    // Sum_S pi_S Tr((I - P_S) rho) with P_S = (I + sign(d_S) S)/2; the reject
    // projector complement makes each draw accept exactly on product
    // -sign(d_S).
    const std::vector<double> pi = term_distribution(h, n);
    double p = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] == 0.0) continue;
        const WeightedTerm& t = h.terms()[i];
        const double sign = t.coefficient > 0 ? 1.0 : -1.0;
        p += pi[i] * 0.5 * (1.0 - sign * pauli_expectation(s, t.string));
    }
    return p;
}

}  // namespace

double p_acc_via_projectors(const LocalHamiltonian& h, const PureState& s, Normalization n) {
    return p_acc_projector_route(h, s, n);
}

double p_acc_via_projectors(const LocalHamiltonian& h, const MixedState& s, Normalization n) {
    return p_acc_projector_route(h, s, n);
}

AcceptanceBounds acceptance_bounds(const LocalHamiltonian& h, double a_ref, double b_ref,
                                   Normalization n) {
    if (a_ref > b_ref + 1e-12)
        throw std::invalid_argument("acceptance_bounds expects a_ref <= b_ref");
    const double total = h.sum_abs(n);
    auto both_forms = [&](double full_energy) {
        const double selected = selected_energy(h, full_energy, n);
        const double direct = 1.0 - (selected + total) / (2.0 * total);
        const double centered = 0.5 - selected / (2.0 * total);
        if (std::abs(direct - centered) > 1e-12)
            throw std::logic_error("acceptance probability forms disagree");
        return direct;
    };
    return {both_forms(a_ref), both_forms(b_ref), a_ref, b_ref};
}

bool xz_only_check(const LocalHamiltonian& h) { return h.xz_only(); }

std::vector<TermTableRow> term_table(const LocalHamiltonian& h, Normalization n) {
    const std::vector<double> pi = term_distribution(h, n);
    std::vector<TermTableRow> rows;
    rows.reserve(h.terms().size());
    for (std::size_t i = 0; i < h.terms().size(); ++i) {
        const WeightedTerm& t = h.terms()[i];
        rows.push_back({static_cast<int>(i), t.coefficient, t.string.str(), pi[i],
                        t.coefficient > 0 ? 1 : -1});
    }
    return rows;
}

void write_term_table_csv(std::ostream& os, const LocalHamiltonian& h, Normalization n) {
    std::vector<TermTableRow> rows = term_table(h, n);
    std::sort(rows.begin(), rows.end(), [](const TermTableRow& a, const TermTableRow& b) {
        const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
        if (ma != mb) return ma > mb;
        return a.string < b.string;
    });
    os << "coefficient,string,pi,sign\n";
    for (const TermTableRow& r : rows)
        os << format_double(r.coefficient) << ',' << r.string << ',' << format_double(r.pi) << ','
           << r.sign << '\n';
}

}  // namespace posthoc
