#pragma once

#include <optional>
#include <string>

#include "posthoc/hamiltonian.hpp"
#include "posthoc/protocol.hpp"

namespace posthoc {

// Context threaded into every rendered report so reruns with the same config
// and seed produce byte-identical output.
struct ReportContext {
    std::string circuit;  // path as given on the command line
    Claim claim = Claim::member;
    std::string strategy;
    std::optional<std::string> term_table_ref;  // CSV path when one is written
    std::optional<double> ground_energy;
    std::optional<double> history_energy;
};

/// The protocol report JSON: {circuit, claim, strategy, n_rounds, seed,
/// accept_count, p_hat, p_exact, threshold, verdict, term_table_ref,
/// energies{ground,history}, normalization}. Keys in that order; numbers as
/// shortest round-trip decimals; trailing newline.
std::string render_run_json(const ReportContext& ctx, const ProtocolReport& report);
std::string render_run_text(const ReportContext& ctx, const ProtocolReport& report,
                            const std::string& rounds_note, const std::string& threshold_note);

struct EnergyReportContext {
    std::string circuit;
    Claim claim = Claim::member;
    HamiltonianWeights weights;
};

std::string render_energy_json(const EnergyReportContext& ctx, const LocalHamiltonian& h,
                               const EnergyReport& report, const AcceptanceBounds& bounds,
                               Normalization n);
std::string render_energy_text(const EnergyReportContext& ctx, const LocalHamiltonian& h,
                               const EnergyReport& report, const AcceptanceBounds& bounds,
                               Normalization n);

std::string render_inspect_json(const std::string& circuit, const LocalHamiltonian& h,
                                Normalization n);
std::string render_inspect_text(const std::string& circuit, const LocalHamiltonian& h,
                                Normalization n);

}  // namespace posthoc
