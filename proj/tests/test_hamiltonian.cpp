#include "posthoc/hamiltonian.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace posthoc;

namespace {

const Circuit kX0 = parse_circuit("qubits 1\noutput 0\nX 0\n");
const Circuit kH0 = parse_circuit("qubits 1\noutput 0\nH 0\n");

double coefficient_of(const LocalHamiltonian& h, const std::string& name) {
    for (const WeightedTerm& t : h.terms())
        if (t.string.str() == name) return t.coefficient;
    FAIL("missing term " << name);
    return 0;
}

}  // namespace

TEST_CASE("clock Hamiltonian of X 0, member claim") {
    const LocalHamiltonian h = build_history_hamiltonian(kX0);
    CHECK(h.qubit_count() == 2);
    CHECK(h.clock_steps() == 1);
    CHECK(h.layout().data_qubits == 1);
    CHECK(h.layout().witness_qubits == 0);
    CHECK(h.layout().clock_qubits == 1);
    CHECK(h.layout().clock_qubit(1) == 1);

    // I - (X0*X1 + Z0*Z1)/2, exactly.
    REQUIRE(h.terms().size() == 3);
    CHECK(coefficient_of(h, "I") == 1.0);
    CHECK(coefficient_of(h, "X0*X1") == -0.5);
    CHECK(coefficient_of(h, "Z0*Z1") == -0.5);
    CHECK(h.sum_abs() == 2.0);
    CHECK(h.sum_abs(Normalization::without_identity) == 1.0);
    CHECK(h.identity_coefficient() == 1.0);
    CHECK(h.identity_index() == 0);
    CHECK(h.xz_only());
    REQUIRE(h.source_circuit().has_value());
    CHECK(*h.source_circuit() == kX0);
}

TEST_CASE("clock Hamiltonian of H 0, member claim") {
    const LocalHamiltonian h = build_history_hamiltonian(kH0);
    const double r = 0.5 / std::sqrt(2.0);
    REQUIRE(h.terms().size() == 4);
    // Deterministic canonical order: identity first, then string order.
    CHECK(h.terms()[0].string.str() == "I");
    CHECK(h.terms()[1].string.str() == "X0*X1");
    CHECK(h.terms()[2].string.str() == "Z0*X1");
    CHECK(h.terms()[3].string.str() == "Z0*Z1");
    CHECK(h.terms()[0].coefficient == 1.0);
    CHECK(h.terms()[1].coefficient == doctest::Approx(-r).epsilon(1e-15));
    CHECK(h.terms()[2].coefficient == doctest::Approx(-r).epsilon(1e-15));
    CHECK(h.terms()[3].coefficient == -0.5);
    CHECK(h.sum_abs() == doctest::Approx(2.2071067811865475).epsilon(1e-15));
    CHECK(h.sum_abs(Normalization::without_identity) ==
          doctest::Approx(1.2071067811865475).epsilon(1e-15));

    const std::vector<double> pi = term_distribution(h);
    REQUIRE(pi.size() == 4);
    CHECK(pi[0] == doctest::Approx(0.4530818393219729).epsilon(1e-15));
    CHECK(pi[1] == doctest::Approx(0.16018862050852037).epsilon(1e-15));
    CHECK(pi[2] == doctest::Approx(0.16018862050852037).epsilon(1e-15));
    CHECK(pi[3] == doctest::Approx(0.22654091966098644).epsilon(1e-15));
    CHECK(std::accumulate(pi.begin(), pi.end(), 0.0) == doctest::Approx(1.0));

    // Without the identity the remaining weights are rescaled; slot 0 is 0.
    const std::vector<double> pi2 = term_distribution(h, Normalization::without_identity);
    CHECK(pi2[0] == 0.0);
    CHECK(std::accumulate(pi2.begin(), pi2.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("history state of H 0") {
    const PureState s = history_state(kH0);
    REQUIRE(s.qubit_count() == 2);
    // (|0>|c=0> + H|0>|c=1>)/sqrt(2): clock qubit is bit 1.
    CHECK(std::abs(s.amplitudes()[0] - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(s.amplitudes()[1]) == 0.0);
    CHECK(std::abs(s.amplitudes()[2] - 0.5) <= 1e-15);
    CHECK(std::abs(s.amplitudes()[3] - 0.5) <= 1e-15);
    CHECK(s.norm() == doctest::Approx(1.0));
}

TEST_CASE("history state has the closed-form energy") {
    // E = J_out (1 - P(output=1)) / (T+1): zero for X 0, 0.25 for H 0.
    CHECK(std::abs(energy(build_history_hamiltonian(kX0), history_state(kX0))) <= 1e-10);
    CHECK(std::abs(energy(build_history_hamiltonian(kH0), history_state(kH0)) - 0.25) <= 1e-10);

    // Only the output block sees the history state, so E scales with J_out.
    HamiltonianWeights w;
    w.output = 2.0;
    CHECK(std::abs(energy(build_history_hamiltonian(kH0, w), history_state(kH0)) - 0.5) <= 1e-10);

    // Nonmember branch of X 0 never raises the output: E = 1/(T+1) = 1/3.
    const Circuit no = claim_branch_circuit(kX0, Claim::nonmember);
    CHECK(std::abs(energy(build_history_hamiltonian(no), history_state(no)) - 1.0 / 3.0) <=
          1e-10);
}

TEST_CASE("ground energies from dense diagonalization") {
    const EnergyReport x_yes = ground_energy(build_history_hamiltonian(kX0));
    CHECK(std::abs(x_yes.ground_energy) <= 1e-10);
    REQUIRE(x_yes.history_energy.has_value());
    CHECK(std::abs(*x_yes.history_energy) <= 1e-10);

    const EnergyReport h_yes = ground_energy(build_history_hamiltonian(kH0));
    CHECK(std::abs(h_yes.ground_energy - 0.07612046748871336) <= 1e-12);
    CHECK(std::abs(*h_yes.history_energy - 0.25) <= 1e-10);
    CHECK(std::abs(*h_yes.gap_witness - (0.25 - 0.07612046748871336)) <= 1e-10);

    const Circuit x_no = claim_branch_circuit(kX0, Claim::nonmember);
    const EnergyReport r = ground_energy(build_history_hamiltonian(x_no));
    CHECK(std::abs(r.ground_energy - 0.13397459621556143) <= 1e-12);
    CHECK(std::abs(*r.history_energy - 1.0 / 3.0) <= 1e-10);

    const Circuit h_no = claim_branch_circuit(kH0, Claim::nonmember);
    CHECK(std::abs(ground_energy(build_history_hamiltonian(h_no)).ground_energy -
                   0.034074173710931736) <= 1e-12);

    // The ground state hits its own eigenvalue through the term list.
    CHECK(energy(build_history_hamiltonian(kH0), h_yes.ground_state) ==
          doctest::Approx(h_yes.ground_energy).epsilon(1e-12));

    CHECK_THROWS_AS(ground_energy(build_history_hamiltonian(kX0), 1), std::runtime_error);
}

TEST_CASE("acceptance probability, both routes and both normalizations") {
    const LocalHamiltonian h = build_history_hamiltonian(kH0);
    const PureState hist = history_state(kH0);

    CHECK(p_acc_exact(h, hist) == doctest::Approx(0.4433647700847534).epsilon(1e-15));
    CHECK(p_acc_via_projectors(h, hist) ==
          doctest::Approx(0.4433647700847534).epsilon(1e-12));
    CHECK(p_acc_from_energy(h, 0.25) == doctest::Approx(0.4433647700847534).epsilon(1e-15));

    // The two normalizations agree through p * sum_abs = (Sigma - E)/2 when
    // the identity coefficient is positive.
    const double with = p_acc_exact(h, hist) * h.sum_abs();
    const double without = p_acc_exact(h, hist, Normalization::without_identity) *
                           h.sum_abs(Normalization::without_identity);
    CHECK(with == doctest::Approx(without).epsilon(1e-12));

    // Ground-state cheat on the nonmember branch of X 0.
    const Circuit x_no = claim_branch_circuit(kX0, Claim::nonmember);
    const LocalHamiltonian hn = build_history_hamiltonian(x_no);
    const EnergyReport r = ground_energy(hn);
    CHECK(p_acc_exact(hn, r.ground_state) ==
          doctest::Approx(0.4808607719692055).epsilon(1e-12));

    // A maximally mixed prover scores 1 - (d_I + Sigma)/(2 Sigma) on X 0.
    const LocalHamiltonian hx = build_history_hamiltonian(kX0);
    const MixedState mixed{{{0.25, basis_state(2, 0)},
                            {0.25, basis_state(2, 1)},
                            {0.25, basis_state(2, 2)},
                            {0.25, basis_state(2, 3)}}};
    CHECK(p_acc_exact(hx, mixed) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p_acc_via_projectors(hx, mixed) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("acceptance bounds pair the two reference energies") {
    const Circuit x_no = claim_branch_circuit(kX0, Claim::nonmember);
    const LocalHamiltonian h = build_history_hamiltonian(x_no);
    const double a = 0.0;
    const double b = ground_energy(h).ground_energy;
    const AcceptanceBounds bounds = acceptance_bounds(h, a, b);
    CHECK(bounds.a_ref == a);
    CHECK(bounds.b_ref == b);
    CHECK(bounds.p_if_energy_a == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bounds.p_if_energy_b == doctest::Approx(0.4808607719692055).epsilon(1e-12));
    CHECK(bounds.gap() == doctest::Approx((b - a) / (2.0 * h.sum_abs())).epsilon(1e-12));
    CHECK(bounds.gap() > 0.0);

    CHECK_THROWS_AS(acceptance_bounds(h, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("from_terms merges, prunes, and validates") {
    const PauliString x0 = PauliString::single(0, Axis::X);
    const LocalHamiltonian h = LocalHamiltonian::from_terms(
        2, {{0.5, x0}, {0.25, x0}, {1e-15, PauliString::single(1, Axis::Z)}, {2.0, {}}});
    REQUIRE(h.terms().size() == 2);  // X0 merged, Z1 dropped
    CHECK(h.terms()[0].string.is_identity());
    CHECK(h.terms()[0].coefficient == 2.0);
    CHECK(h.terms()[1].coefficient == 0.75);
    CHECK(h.sum_abs() == 2.75);
    CHECK(h.clock_steps() == 0);
    CHECK(!h.source_circuit().has_value());

    CHECK_THROWS_AS(LocalHamiltonian::from_terms(0, {{1.0, {}}}), std::invalid_argument);
    CHECK_THROWS_AS(LocalHamiltonian::from_terms(1, {{1e-14, {}}}), std::invalid_argument);
    // Term support outside the register.
    CHECK_THROWS_AS(LocalHamiltonian::from_terms(1, {{1.0, PauliString::single(3, Axis::X)}}),
                    std::invalid_argument);
    // Identity-only Hamiltonian cannot drop its identity.
    CHECK_THROWS_AS(LocalHamiltonian::from_terms(1, {{1.0, {}}}).sum_abs(
                        Normalization::without_identity),
                    std::logic_error);
}

TEST_CASE("xz_only_check flags Y terms") {
    CHECK(xz_only_check(build_history_hamiltonian(kH0)));
    const LocalHamiltonian with_y = LocalHamiltonian::from_terms(
        1, {{1.0, {}}, {0.5, PauliString::single(0, Axis::Y)}});
    CHECK(!xz_only_check(with_y));
    CHECK(!with_y.xz_only());
}

TEST_CASE("term table CSV is sorted by weight then string") {
    const LocalHamiltonian h = build_history_hamiltonian(kX0);
    std::ostringstream os;
    write_term_table_csv(os, h);
    CHECK(os.str() ==
          "coefficient,string,pi,sign\n"
          "1,I,0.5,1\n"
          "-0.5,X0*X1,0.25,-1\n"
          "-0.5,Z0*Z1,0.25,-1\n");

    const std::vector<TermTableRow> rows = term_table(h, Normalization::without_identity);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].pi == 0.0);  // identity row keeps its slot but draws nothing
    CHECK(rows[1].pi == 0.5);
    CHECK(rows[2].pi == 0.5);
    CHECK(rows[1].sign == -1);
}
