#include "posthoc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace posthoc::oracle {

namespace {

std::string format_worst(double worst) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << worst;
    return os.str();
}

}  // namespace

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& block, const std::vector<int>& block_qubits,
                                int total_qubits) {
    const int k = static_cast<int>(block_qubits.size());
    if (block.rows() != (1 << k) || block.cols() != (1 << k))
        throw std::invalid_argument("block dimension does not match its qubit list");
    if (total_qubits > 14)
        throw std::invalid_argument("dense embedding limited to 14 qubits");
    for (int q : block_qubits)
        if (q < 0 || q >= total_qubits)
            throw std::invalid_argument("block qubit outside the register");

    const std::int64_t dim = 1ll << total_qubits;
    std::uint64_t support = 0;
    for (int q : block_qubits) support |= 1ull << q;

    auto gather = [&](std::uint64_t full) {
        int local = 0;
        for (int j = 0; j < k; ++j)
            local |= static_cast<int>((full >> block_qubits[static_cast<std::size_t>(j)]) & 1) << j;
        return local;
    };
    auto scatter = [&](std::uint64_t rest, int local) {
        std::uint64_t full = rest;
        for (int j = 0; j < k; ++j)
            full |= ((static_cast<std::uint64_t>(local) >> j) & 1)
                    << block_qubits[static_cast<std::size_t>(j)];
        return full;
    };

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t col = 0; col < dim; ++col) {
        const std::uint64_t rest = static_cast<std::uint64_t>(col) & ~support;
        const int local_col = gather(static_cast<std::uint64_t>(col));
        for (int local_row = 0; local_row < (1 << k); ++local_row) {
            const std::complex<double> v = block(local_row, local_col);
            if (v == std::complex<double>(0, 0)) continue;
            out(static_cast<std::int64_t>(scatter(rest, local_row)), col) = v;
        }
    }
    return out;
}

Eigen::MatrixXcd dense_projector_hamiltonian(const Circuit& c, const HamiltonianWeights& weights,
                                             Claim claim) {
    const Circuit branch = claim_branch_circuit(c, claim);
    const int compute = branch.total_qubits();
    const int steps = branch.step_count();
    const int total = compute + steps;
    const std::int64_t dim = 1ll << total;
    if (total > 14) throw std::invalid_argument("dense construction limited to 14 qubits");

    const auto clock_qubit = [&](int t) { return compute + t - 1; };
    const Eigen::MatrixXcd p0 =
        (Eigen::MatrixXcd(2, 2) << 1, 0, 0, 0).finished();
    const Eigen::MatrixXcd p1 =
        (Eigen::MatrixXcd(2, 2) << 0, 0, 0, 1).finished();

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    // Input: penalize |1> on each compute qubit while clock qubit 1 reads 0.
    for (int q = 0; q < compute; ++q)
        h += weights.input * embed_operator(p1, {q}, total) *
             embed_operator(p0, {clock_qubit(1)}, total);

    // Clock: penalize the non-unary pattern c_t = 0, c_{t+1} = 1.
    for (int t = 1; t < steps; ++t)
        h += weights.clock * embed_operator(p0, {clock_qubit(t)}, total) *
             embed_operator(p1, {clock_qubit(t + 1)}, total);

    // Propagation: 1/2 (|prev><prev| + |cur><cur|) (x) I - 1/2 (|prev><cur| +
    // |cur><prev|) (x) U_t, with prev/cur the unary clock patterns restricted
    // to the touched clock qubits.
    for (int t = 1; t <= steps; ++t) {
        const Gate& gate = branch.gates()[static_cast<std::size_t>(t - 1)];
        const Eigen::MatrixXcd u = gate_matrix(gate.kind).cast<std::complex<double>>();

        std::vector<int> clocks;
        int prev_idx, cur_idx;
        if (steps == 1) {
            clocks = {clock_qubit(1)};
            prev_idx = 0;
            cur_idx = 1;
        } else if (t == 1) {
            clocks = {clock_qubit(1), clock_qubit(2)};
            prev_idx = 0;
            cur_idx = 1;
        } else if (t < steps) {
            clocks = {clock_qubit(t - 1), clock_qubit(t), clock_qubit(t + 1)};
            prev_idx = 1;
            cur_idx = 3;
        } else {
            clocks = {clock_qubit(steps - 1), clock_qubit(steps)};
            prev_idx = 1;
            cur_idx = 3;
        }
        const int cdim = 1 << clocks.size();
        Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(cdim, cdim);
        Eigen::MatrixXcd cur = Eigen::MatrixXcd::Zero(cdim, cdim);
        Eigen::MatrixXcd hop = Eigen::MatrixXcd::Zero(cdim, cdim);
        prev(prev_idx, prev_idx) = 1;
        cur(cur_idx, cur_idx) = 1;
        hop(prev_idx, cur_idx) = 1;
        hop(cur_idx, prev_idx) = 1;

        const Eigen::MatrixXcd diag_part =
            0.5 * (embed_operator(prev, clocks, total) + embed_operator(cur, clocks, total));
        const Eigen::MatrixXcd hop_part = 0.5 * embed_operator(hop, clocks, total) *
                                          embed_operator(u, gate.targets, total);
        h += weights.propagation * (diag_part - hop_part);
    }

    // Output: penalize reading 0 on the output qubit at the final clock value.
    h += weights.output * embed_operator(p0, {branch.output_qubit()}, total) *
         embed_operator(p1, {clock_qubit(steps)}, total);
    return h;
}

Eigen::MatrixXcd dense_from_terms(const LocalHamiltonian& h) {
    const std::int64_t dim = 1ll << h.qubit_count();
    if (h.qubit_count() > 14) throw std::invalid_argument("dense construction limited to 14 qubits");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const WeightedTerm& t : h.terms())
        m += t.coefficient * to_matrix(t.string, h.qubit_count());
    return m;
}

double dense_expectation(const Eigen::MatrixXcd& m, const PureState& s) {
    const Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(),
                                               static_cast<Eigen::Index>(s.dimension()));
    if (m.rows() != v.size()) throw std::invalid_argument("matrix and state dimensions differ");
    return (v.adjoint() * m * v)(0).real();
}

double joint_product_plus_probability(const PureState& s, const PauliString& p) {
    // Tr((I + S)/2 rho) = (1 + <S>)/2.
    return 0.5 * (1.0 + pauli_expectation(s, p));
}

double sequential_product_plus_probability(const PureState& s, const PauliString& p) {
    if (!p.xz_only()) throw std::invalid_argument("sequential measurement supports X and Z only");
    // Walk every outcome branch of the per-qubit procedure, carrying the
    // branch probability and running product.
    struct Branch {
        PureState state;
        double probability;
        int product;
    };
    std::vector<Branch> branches = {{s, 1.0, +1}};
    for (const auto& [qubit, axis] : p.axes()) {
        const MeasureBasis basis = axis == Axis::X ? MeasureBasis::X : MeasureBasis::Z;
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (const Branch& branch : branches) {
            const SingleQubitProjection proj = project_single_qubit(branch.state, qubit, basis);
            const double p_plus = branch.probability * proj.p_plus;
            const double p_minus = branch.probability * (1.0 - proj.p_plus);
            if (p_plus > 0) next.push_back({proj.post_plus, p_plus, branch.product});
            if (p_minus > 0) next.push_back({proj.post_minus, p_minus, -branch.product});
        }
        branches = std::move(next);
    }
    double plus = 0;
    for (const Branch& branch : branches)
        if (branch.product > 0) plus += branch.probability;
    return plus;
}

CheckResult check_terms_against_matrix(const LocalHamiltonian& h, const Eigen::MatrixXcd& expected,
                                       double tol) {
    const Eigen::MatrixXcd rebuilt = dense_from_terms(h);
    const double worst = (rebuilt - expected).cwiseAbs().maxCoeff();
    return {"matrix-reconstruction", worst <= tol, worst,
            "max entrywise |term-list - projector-form| = " + format_worst(worst)};
}

CheckResult check_matrix_reconstruction(const Circuit& c, const HamiltonianWeights& weights,
                                        Claim claim, double tol) {
    const LocalHamiltonian h = build_history_hamiltonian(c, weights, claim);
    return check_terms_against_matrix(h, dense_projector_hamiltonian(c, weights, claim), tol);
}

CheckResult check_history_energy_identity(const Circuit& c, const HamiltonianWeights& weights,
                                          double tol) {
    // The history state satisfies every block except the output penalty, whose
    // expectation is the rejection probability spread over the T+1 clock
    // values.
    const LocalHamiltonian h = build_history_hamiltonian(c, weights, Claim::member);
    const double measured = energy(h, history_state(c));
    const double expected =
        weights.output * (1.0 - output_probability(c)) / (c.step_count() + 1);
    const double worst = std::abs(measured - expected);
    return {"history-energy-identity", worst <= tol, worst,
            "|energy - J_out (1 - p_out)/(T+1)| = " + format_worst(worst)};
}

CheckResult check_sequential_vs_joint(const Circuit& c, const HamiltonianWeights& weights,
                                      Claim claim, double tol) {
    const LocalHamiltonian h = build_history_hamiltonian(c, weights, claim);
    if (h.qubit_count() > kSimulatorQubitCap)
        return {"sequential-vs-joint", false, 0.0, "instance above the simulator cap"};
    const PureState state = history_state(*h.source_circuit());
    double worst = 0;
    for (const WeightedTerm& t : h.terms()) {
        const double joint = joint_product_plus_probability(state, t.string);
        const double sequential = sequential_product_plus_probability(state, t.string);
        worst = std::max(worst, std::abs(joint - sequential));
    }
    return {"sequential-vs-joint", worst <= tol, worst,
            "max |P_joint(+1) - P_sequential(+1)| over terms = " + format_worst(worst)};
}

CheckResult check_p_acc_cross_form(const Circuit& c, const HamiltonianWeights& weights, Claim claim,
                                   double tol) {
    const LocalHamiltonian h = build_history_hamiltonian(c, weights, claim);
    if (h.qubit_count() > kSimulatorQubitCap)
        return {"p-acc-cross-form", false, 0.0, "instance above the simulator cap"};
    const PureState state = history_state(*h.source_circuit());
    double worst = 0;
    for (const Normalization n : {Normalization::with_identity, Normalization::without_identity}) {
        const double direct = p_acc_exact(h, state, n);
        const double projector = p_acc_via_projectors(h, state, n);
        worst = std::max(worst, std::abs(direct - projector));
    }
    return {"p-acc-cross-form", worst <= tol, worst,
            "max |closed form - projector form| = " + format_worst(worst)};
}

CheckResult check_xz_only(const LocalHamiltonian& h) {
    const bool pass = xz_only_check(h);
    return {"xz-only", pass, pass ? 0.0 : 1.0,
            pass ? "no Y factor in any term" : "found a Y factor"};
}

std::vector<CheckResult> run_all_checks(const Circuit& c, const HamiltonianWeights& weights,
                                        int oracle_cap) {
    std::vector<CheckResult> results;
    results.push_back(check_history_energy_identity(c, weights));
    for (const Claim claim : {Claim::member, Claim::nonmember}) {
        const LocalHamiltonian h = build_history_hamiltonian(c, weights, claim);
        const std::string suffix = std::string(" (") + std::string(claim_name(claim)) + ")";
        if (h.qubit_count() <= std::min(oracle_cap, 14)) {
            CheckResult r = check_matrix_reconstruction(c, weights, claim);
            r.name += suffix;
            results.push_back(std::move(r));
        }
        if (h.qubit_count() <= kSimulatorQubitCap) {
            CheckResult seq = check_sequential_vs_joint(c, weights, claim);
            seq.name += suffix;
            results.push_back(std::move(seq));
            CheckResult cross = check_p_acc_cross_form(c, weights, claim);
            cross.name += suffix;
            results.push_back(std::move(cross));
        }
        CheckResult xz = check_xz_only(h);
        xz.name += suffix;
        results.push_back(std::move(xz));
    }
    return results;
}

}  // namespace posthoc::oracle
