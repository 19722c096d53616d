#include "posthoc/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace posthoc {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::vector<TermTableRow> sorted_rows(const LocalHamiltonian& h, Normalization n) {
    std::vector<TermTableRow> rows = term_table(h, n);
    std::sort(rows.begin(), rows.end(), [](const TermTableRow& a, const TermTableRow& b) {
        const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
        if (ma != mb) return ma > mb;
        return a.string < b.string;
    });
    return rows;
}

std::string verdict_word(bool verdict) { return verdict ? "accept" : "reject"; }

}  // namespace

std::string render_run_json(const ReportContext& ctx, const ProtocolReport& report) {
    ordered_json j;
    j["circuit"] = ctx.circuit;
    j["claim"] = std::string(claim_name(ctx.claim));
    j["strategy"] = ctx.strategy;
    j["n_rounds"] = report.rounds;
    j["seed"] = report.seed;
    j["accept_count"] = report.accept_count;
    j["p_hat"] = report.p_hat;
    j["p_exact"] = report.p_exact;
    j["threshold"] = report.threshold;
    j["verdict"] = verdict_word(report.verdict);
    j["term_table_ref"] =
        ctx.term_table_ref ? ordered_json(*ctx.term_table_ref) : ordered_json(nullptr);
    j["energies"] = {{"ground", optional_number(ctx.ground_energy)},
                     {"history", optional_number(ctx.history_energy)}};
    j["normalization"] = std::string(normalization_name(report.normalization));
    return j.dump(2) + "\n";
}

std::string render_run_text(const ReportContext& ctx, const ProtocolReport& report,
                            const std::string& rounds_note, const std::string& threshold_note) {
    std::ostringstream os;
    os << "circuit       " << ctx.circuit << "\n";
    os << "claim         " << claim_name(ctx.claim) << "\n";
    os << "strategy      " << ctx.strategy << "\n";
    os << "normalization " << normalization_name(report.normalization) << "\n";
    os << "seed          " << report.seed << "\n";
    os << "rounds        " << report.rounds;
    if (!rounds_note.empty()) os << "  (" << rounds_note << ")";
    os << "\n";
    os << "accepted      " << report.accept_count << "\n";
    os << "p_hat         " << format_double(report.p_hat) << "\n";
    os << "p_exact       " << format_double(report.p_exact) << "\n";
    os << "threshold     " << format_double(report.threshold);
    if (!threshold_note.empty()) os << "  (" << threshold_note << ")";
    os << "\n";
    if (ctx.ground_energy)
        os << "ground energy  " << format_double(*ctx.ground_energy) << "\n";
    if (ctx.history_energy)
        os << "history energy " << format_double(*ctx.history_energy) << "\n";
    if (ctx.term_table_ref) os << "term table    " << *ctx.term_table_ref << "\n";
    os << "verdict       " << verdict_word(report.verdict) << "\n";
    return os.str();
}

namespace {

ordered_json weights_json(const HamiltonianWeights& w) {
    return {{"input", w.input},
            {"clock", w.clock},
            {"propagation", w.propagation},
            {"output", w.output}};
}

ordered_json bounds_json(const AcceptanceBounds& bounds) {
    return {{"a_ref", bounds.a_ref},
            {"b_ref", bounds.b_ref},
            {"p_if_energy_a", bounds.p_if_energy_a},
            {"p_if_energy_b", bounds.p_if_energy_b},
            {"gap", bounds.gap()}};
}

}  // namespace

std::string render_energy_json(const EnergyReportContext& ctx, const LocalHamiltonian& h,
                               const EnergyReport& report, const AcceptanceBounds& bounds,
                               Normalization n) {
    ordered_json j;
    j["circuit"] = ctx.circuit;
    j["claim"] = std::string(claim_name(ctx.claim));
    j["weights"] = weights_json(ctx.weights);
    j["qubits"] = h.qubit_count();
    j["clock_steps"] = h.clock_steps();
    j["sum_abs"] = h.sum_abs(n);
    j["ground_energy"] = report.ground_energy;
    j["history_energy"] = optional_number(report.history_energy);
    j["gap_witness"] = optional_number(report.gap_witness);
    j["acceptance"] = bounds_json(bounds);
    j["normalization"] = std::string(normalization_name(n));
    return j.dump(2) + "\n";
}

std::string render_energy_text(const EnergyReportContext& ctx, const LocalHamiltonian& h,
                               const EnergyReport& report, const AcceptanceBounds& bounds,
                               Normalization n) {
    std::ostringstream os;
    os << "circuit        " << ctx.circuit << "\n";
    os << "claim          " << claim_name(ctx.claim) << "\n";
    os << "qubits         " << h.qubit_count() << " (" << h.layout().compute_qubits()
       << " compute + " << h.clock_steps() << " clock)\n";
    os << "sum_abs        " << format_double(h.sum_abs(n)) << "  (" << normalization_name(n)
       << ")\n";
    os << "ground energy  " << format_double(report.ground_energy) << "\n";
    if (report.history_energy)
        os << "history energy " << format_double(*report.history_energy) << "\n";
    if (report.gap_witness)
        os << "gap witness    " << format_double(*report.gap_witness) << "\n";
    os << "p_acc at a     " << format_double(bounds.p_if_energy_a) << "  (a = "
       << format_double(bounds.a_ref) << ")\n";
    os << "p_acc at b     " << format_double(bounds.p_if_energy_b) << "  (b = "
       << format_double(bounds.b_ref) << ")\n";
    os << "p_acc gap      " << format_double(bounds.gap()) << "\n";
    return os.str();
}

std::string render_inspect_json(const std::string& circuit, const LocalHamiltonian& h,
                                Normalization n) {
    const std::vector<TermTableRow> rows = sorted_rows(h, n);

    std::map<int, int> locality_counts;
    for (const WeightedTerm& t : h.terms()) ++locality_counts[t.string.locality()];

    ordered_json j;
    j["circuit"] = circuit;
    j["qubits"] = h.qubit_count();
    j["layout"] = {{"data", h.layout().data_qubits},
                   {"witness", h.layout().witness_qubits},
                   {"clock", h.layout().clock_qubits}};
    j["clock_steps"] = h.clock_steps();
    j["term_count"] = h.terms().size();
    j["sum_abs"] = h.sum_abs(n);
    j["xz_only"] = xz_only_check(h);
    j["normalization"] = std::string(normalization_name(n));
    ordered_json histogram = ordered_json::object();
    for (const auto& [locality, count] : locality_counts)
        histogram[std::to_string(locality)] = count;
    j["locality_histogram"] = histogram;
    ordered_json terms = ordered_json::array();
    for (const TermTableRow& r : rows)
        terms.push_back({{"index", r.index},
                         {"coefficient", r.coefficient},
                         {"string", r.string},
                         {"pi", r.pi},
                         {"sign", r.sign}});
    j["terms"] = terms;
    return j.dump(2) + "\n";
}

std::string render_inspect_text(const std::string& circuit, const LocalHamiltonian& h,
                                Normalization n) {
    const std::vector<TermTableRow> rows = sorted_rows(h, n);

    std::map<int, int> locality_counts;
    for (const WeightedTerm& t : h.terms()) ++locality_counts[t.string.locality()];

    std::ostringstream os;
    os << "circuit        " << circuit << "\n";
    os << "qubits         " << h.qubit_count() << " (" << h.layout().compute_qubits()
       << " compute + " << h.layout().clock_qubits << " clock)\n";
    os << "terms          " << h.terms().size() << "\n";
    os << "sum_abs        " << format_double(h.sum_abs(n)) << "  (" << normalization_name(n)
       << ")\n";
    os << "xz_only        " << (xz_only_check(h) ? "true" : "false") << "\n";
    os << "locality       ";
    bool first = true;
    for (const auto& [locality, count] : locality_counts) {
        if (!first) os << ", ";
        os << locality << "-local x" << count;
        first = false;
    }
    os << "\n\n";
    os << "coefficient            string        pi                     sign\n";
    for (const TermTableRow& r : rows) {
        std::ostringstream coef, pi;
        coef << format_double(r.coefficient);
        pi << format_double(r.pi);
        os << coef.str() << std::string(std::max<int>(1, 23 - static_cast<int>(coef.str().size())), ' ')
           << r.string << std::string(std::max<int>(1, 14 - static_cast<int>(r.string.size())), ' ')
           << pi.str() << std::string(std::max<int>(1, 23 - static_cast<int>(pi.str().size())), ' ')
           << (r.sign > 0 ? "+1" : "-1") << "\n";
    }
    return os.str();
}

}  // namespace posthoc
