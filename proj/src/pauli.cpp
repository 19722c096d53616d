#include "posthoc/pauli.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

namespace posthoc {

char axis_letter(Axis axis) {
    switch (axis) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

PauliString::PauliString(std::initializer_list<std::pair<int, Axis>> axes)
    : PauliString(std::vector<std::pair<int, Axis>>(axes)) {}

PauliString::PauliString(std::vector<std::pair<int, Axis>> axes) : axes_(std::move(axes)) {
    std::sort(axes_.begin(), axes_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (axes_[i].first < 0)
            throw std::invalid_argument("negative qubit index in Pauli string");
        if (i + 1 < axes_.size() && axes_[i].first == axes_[i + 1].first)
            throw std::invalid_argument("repeated qubit index in Pauli string");
    }
}

PauliString PauliString::single(int qubit, Axis axis) { return PauliString({{qubit, axis}}); }

std::vector<int> PauliString::support() const {
    std::vector<int> qubits;
    qubits.reserve(axes_.size());
    for (const auto& [q, axis] : axes_) qubits.push_back(q);
    return qubits;
}

bool PauliString::xz_only() const {
    return std::none_of(axes_.begin(), axes_.end(),
                        [](const auto& f) { return f.second == Axis::Y; });
}

int PauliString::max_qubit() const { return axes_.empty() ? -1 : axes_.back().first; }

std::string PauliString::str() const {
    if (axes_.empty()) return "I";
    std::string out;
    for (const auto& [q, axis] : axes_) {
        if (!out.empty()) out += '*';
        out += axis_letter(axis);
        out += std::to_string(q);
    }
    return out;
}

namespace {

constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

Eigen::MatrixXcd to_matrix(const PauliString& p, int qubit_count) {
    if (qubit_count < 0 || qubit_count > 12)
        throw std::invalid_argument("dense Pauli matrix limited to 12 qubits");
    if (p.max_qubit() >= qubit_count)
        throw std::invalid_argument("Pauli string acts outside the register");

    // Every Pauli string has exactly one nonzero entry per column: column i
    // maps to row i^xmask with phase i^{#Y} * (-1)^{popcount(i & zmask)}.
    std::uint64_t xmask = 0, zmask = 0;
    int y_count = 0;
    for (const auto& [q, axis] : p.axes()) {
        if (axis != Axis::Z) xmask |= 1ull << q;
        if (axis != Axis::X) zmask |= 1ull << q;
        if (axis == Axis::Y) ++y_count;
    }
    const std::complex<double> y_phase = kIPow[y_count & 3];

    const std::int64_t dim = 1ll << qubit_count;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t col = 0; col < dim; ++col) {
        const double sign = (std::popcount(static_cast<std::uint64_t>(col) & zmask) & 1) ? -1 : 1;
        m(col ^ static_cast<std::int64_t>(xmask), col) = y_phase * sign;
    }
    return m;
}

std::vector<WeightedTerm> decompose_hermitian(const Eigen::MatrixXcd& matrix, int qubit_count,
                                              double tol) {
    if (qubit_count < 0 || qubit_count > 6)
        throw std::invalid_argument("Pauli decomposition limited to 6 qubits");
    const std::int64_t dim = 1ll << qubit_count;
    if (matrix.rows() != dim || matrix.cols() != dim)
        throw std::invalid_argument("matrix dimension does not match qubit count");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("Pauli decomposition expects a Hermitian matrix");

    std::vector<WeightedTerm> terms;
    // Enumerate all 4^k strings as base-4 digits: 0=I, 1=X, 2=Y, 3=Z per qubit.
    const std::int64_t total = 1ll << (2 * qubit_count);
    for (std::int64_t code = 0; code < total; ++code) {
        std::uint64_t xmask = 0, zmask = 0;
        int y_count = 0;
        std::vector<std::pair<int, Axis>> axes;
        for (int q = 0; q < qubit_count; ++q) {
            const int digit = static_cast<int>((code >> (2 * q)) & 3);
            if (digit == 0) continue;
            if (digit != 3) xmask |= 1ull << q;
            if (digit != 1) zmask |= 1ull << q;
            if (digit == 2) ++y_count;
            axes.emplace_back(q, digit == 1 ? Axis::X : digit == 2 ? Axis::Y : Axis::Z);
        }
        // Tr(M P) needs only one entry of M per column: P(col^x, col) is the
        // sole nonzero of that column, so Tr(M P) = sum_col M(col, col^x) * P(col^x, col).
        const std::complex<double> y_phase = kIPow[y_count & 3];
        std::complex<double> trace = 0;
        for (std::int64_t col = 0; col < dim; ++col) {
            const double sign =
                (std::popcount(static_cast<std::uint64_t>(col) & zmask) & 1) ? -1 : 1;
            trace += matrix(col, col ^ static_cast<std::int64_t>(xmask)) * (y_phase * sign);
        }
        const std::complex<double> coef = trace / static_cast<double>(dim);
        if (std::abs(coef.imag()) > 1e-10)
            throw std::runtime_error("non-real coefficient in Hermitian decomposition");
        if (std::abs(coef.real()) <= tol) continue;
        terms.push_back({coef.real(), PauliString(std::move(axes))});
    }
    return terms;
}

std::string format_double(double value) {
    // Shortest decimal form that round-trips to the same double.
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buf.data(), ptr);
}

void write_term_csv(std::ostream& os, std::span<const WeightedTerm> terms) {
    os << "coefficient,string\n";
    for (const WeightedTerm& t : terms)
        os << format_double(t.coefficient) << ',' << t.string.str() << '\n';
}

}  // namespace posthoc
