#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace posthoc {

enum class Axis : std::uint8_t { X, Y, Z };

char axis_letter(Axis axis);

// Sparse tensor product of single-qubit Paulis: qubits absent from the map
// carry identity. Kept canonical (keys sorted, no identity entries), so
// default comparison doubles as a deterministic total order.
class PauliString {
  public:
    PauliString() = default;  // identity
    PauliString(std::initializer_list<std::pair<int, Axis>> axes);
    explicit PauliString(std::vector<std::pair<int, Axis>> axes);

    static PauliString single(int qubit, Axis axis);

    const std::vector<std::pair<int, Axis>>& axes() const { return axes_; }
    std::vector<int> support() const;
    int locality() const { return static_cast<int>(axes_.size()); }
    bool is_identity() const { return axes_.empty(); }
    bool xz_only() const;
    int max_qubit() const;  // -1 for identity

    /// Rendering used across CSV and reports, e.g. "X0*Z3"; identity is "I".
    std::string str() const;

    bool operator==(const PauliString&) const = default;
    auto operator<=>(const PauliString&) const = default;

  private:
    std::vector<std::pair<int, Axis>> axes_;
};

struct WeightedTerm {
    double coefficient = 0.0;
    PauliString string;

    bool operator==(const WeightedTerm&) const = default;
};

/// Dense 2^m x 2^m matrix of a Pauli string (qubit 0 = least significant bit
/// of the amplitude index). Oracle-scale only: m <= 12.
Eigen::MatrixXcd to_matrix(const PauliString& p, int qubit_count);

/// Exhaustive Pauli decomposition of a Hermitian 2^k x 2^k matrix via
/// coefficient = Tr(M P) / 2^k over all 4^k strings. Coefficients with
/// magnitude below tol are dropped. k <= 6.
std::vector<WeightedTerm> decompose_hermitian(const Eigen::MatrixXcd& matrix, int qubit_count,
                                              double tol = 1e-12);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// CSV with header "coefficient,string", one term per row.
void write_term_csv(std::ostream& os, std::span<const WeightedTerm> terms);

}  // namespace posthoc
