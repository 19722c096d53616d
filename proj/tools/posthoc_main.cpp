// posthoc: build clock Hamiltonians from circuit files, inspect their term
// structure, compute reference energies, and run the verification protocol.
//
// Exit codes: 0 success, 1 failed oracle check or failed decision, 2 usage or
// parse errors (including instances over the diagonalization cap).

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "posthoc/circuit.hpp"
#include "posthoc/hamiltonian.hpp"
#include "posthoc/oracle.hpp"
#include "posthoc/protocol.hpp"
#include "posthoc/report.hpp"

namespace {

using nlohmann::ordered_json;
using namespace posthoc;

struct CommonOptions {
    std::string circuit_path;
    std::string claim_text = "member";
    std::string weights_text = "1,1,1,1";
    std::string normalization_text = "with-identity";
    std::string format = "json";
    std::string out_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--circuit", opts.circuit_path, "Circuit file")->required();
    cmd->add_option("--claim", opts.claim_text, "Claimed direction: member|nonmember")
        ->check(CLI::IsMember({"member", "nonmember"}));
    cmd->add_option("--weights", opts.weights_text,
                    "Block weights J_in,J_clock,J_prop,J_out (default 1,1,1,1)");
    cmd->add_option("--normalization", opts.normalization_text,
                    "Term distribution: with-identity|without-identity")
        ->check(CLI::IsMember({"with-identity", "without-identity"}));
    cmd->add_option("--format", opts.format, "Output format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", opts.out_path, "Write the report to a file instead of stdout");
}

Claim parse_claim(const std::string& text) {
    return text == "member" ? Claim::member : Claim::nonmember;
}

Normalization parse_normalization(const std::string& text) {
    return text == "with-identity" ? Normalization::with_identity
                                   : Normalization::without_identity;
}

HamiltonianWeights parse_weights(const std::string& text) {
    std::istringstream is(text);
    double values[4];
    char comma;
    for (int i = 0; i < 4; ++i) {
        if (i > 0 && (!(is >> comma) || comma != ','))
            throw std::invalid_argument("--weights expects four comma-separated reals");
        if (!(is >> values[i]))
            throw std::invalid_argument("--weights expects four comma-separated reals");
        if (values[i] < 0) throw std::invalid_argument("block weights must be >= 0");
    }
    char trailing;
    if (is >> trailing) throw std::invalid_argument("--weights expects exactly four values");
    return {values[0], values[1], values[2], values[3]};
}

int oracle_cap_from_env() {
    const char* raw = std::getenv("POSTHOC_ORACLE_CAP");
    if (raw == nullptr) return kDefaultOracleCap;
    try {
        const int cap = std::stoi(raw);
        if (cap < 1 || cap > 14)
            throw std::invalid_argument("POSTHOC_ORACLE_CAP must lie in 1..14");
        return cap;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("POSTHOC_ORACLE_CAP must be an integer in 1..14");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("POSTHOC_ORACLE_CAP must be an integer in 1..14");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open circuit file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Circuit load_circuit(const std::string& path) {
    try {
        return parse_circuit(read_text_file(path));
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void emit(const CommonOptions& opts, const std::string& report) {
    if (opts.out_path.empty()) {
        std::cout << report;
        return;
    }
    std::ofstream os(opts.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + opts.out_path);
    os << report;
}

// --- inspect ---------------------------------------------------------------

struct InspectOptions {
    CommonOptions common;
    std::string csv_path;
};

int cmd_inspect(const InspectOptions& opts) {
    const Circuit circuit = load_circuit(opts.common.circuit_path);
    const HamiltonianWeights weights = parse_weights(opts.common.weights_text);
    const Normalization normalization = parse_normalization(opts.common.normalization_text);
    const LocalHamiltonian h =
        build_history_hamiltonian(circuit, weights, parse_claim(opts.common.claim_text));

    if (!opts.csv_path.empty()) {
        std::ofstream csv(opts.csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open output file: " + opts.csv_path);
        write_term_table_csv(csv, h, normalization);
    }
    emit(opts.common, opts.common.format == "json"
                          ? render_inspect_json(opts.common.circuit_path, h, normalization)
                          : render_inspect_text(opts.common.circuit_path, h, normalization));
    return 0;
}

// --- energy ----------------------------------------------------------------

int cmd_energy(const CommonOptions& opts) {
    const Circuit circuit = load_circuit(opts.circuit_path);
    const HamiltonianWeights weights = parse_weights(opts.weights_text);
    const Normalization normalization = parse_normalization(opts.normalization_text);
    const Claim claim = parse_claim(opts.claim_text);
    const LocalHamiltonian h = build_history_hamiltonian(circuit, weights, claim);

    const EnergyReport report = ground_energy(h, oracle_cap_from_env());
    const AcceptanceBounds bounds = acceptance_bounds(
        h, report.ground_energy, report.history_energy.value_or(report.ground_energy),
        normalization);

    const EnergyReportContext ctx{opts.circuit_path, claim, weights};
    emit(opts, opts.format == "json" ? render_energy_json(ctx, h, report, bounds, normalization)
                                     : render_energy_text(ctx, h, report, bounds, normalization));
    return 0;
}

// --- run -------------------------------------------------------------------

struct RunCliOptions {
    CommonOptions common;
    std::string strategy_text = "honest";
    std::string rounds_text = "1000";
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string term_table_path;
};

std::uint64_t parse_round_count(const std::string& text) {
    try {
        const unsigned long long n = std::stoull(text);
        if (n < 1) throw std::invalid_argument("--rounds must be >= 1");
        return n;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("--rounds expects a positive integer or 'auto'");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("--rounds value out of range");
    }
}

int cmd_run(const RunCliOptions& opts) {
    const Circuit circuit = load_circuit(opts.common.circuit_path);
    const HamiltonianWeights weights = parse_weights(opts.common.weights_text);
    const Normalization normalization = parse_normalization(opts.common.normalization_text);
    const Claim claim = parse_claim(opts.common.claim_text);
    if (!(opts.epsilon > 0.0) || !(opts.epsilon < 1.0))
        throw std::invalid_argument("--epsilon must lie in (0, 1)");
    const int oracle_cap = oracle_cap_from_env();

    const LocalHamiltonian h = build_history_hamiltonian(circuit, weights, claim);
    const ProverStrategy strategy = ProverStrategy::parse(opts.strategy_text);

    RunOptions run_options;
    run_options.master_seed = opts.seed;
    run_options.normalization = normalization;
    run_options.workers = opts.workers;

    std::string rounds_note, threshold_note;
    if (opts.rounds_text == "auto") {
        // Hoeffding-sized repetition count against the paired references; the
        // midpoint threshold is the matching engineering choice, not part of
        // the protocol itself.
        const PairedReferences refs =
            paired_references(circuit, claim, weights, normalization, oracle_cap);
        if (refs.gap <= 0)
            throw std::runtime_error("auto rounds need a positive acceptance gap; got " +
                                     format_double(refs.gap));
        run_options.rounds = amplification_rounds(refs.gap, opts.epsilon);
        run_options.threshold = refs.threshold;
        rounds_note = "auto: Hoeffding count for gap " + format_double(refs.gap) +
                      " at error " + format_double(opts.epsilon);
        threshold_note = "midpoint of honest and best-cheat acceptance";
    } else {
        run_options.rounds = parse_round_count(opts.rounds_text);
        run_options.threshold = 0.5;
        threshold_note = "default";
    }

    const ProtocolReport report =
        run_protocol(h, strategy, circuit, claim, run_options, oracle_cap);

    ReportContext ctx;
    ctx.circuit = opts.common.circuit_path;
    ctx.claim = claim;
    ctx.strategy = strategy.str();
    if (!opts.term_table_path.empty()) {
        std::ofstream csv(opts.term_table_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open output file: " + opts.term_table_path);
        write_term_table_csv(csv, h, normalization);
        ctx.term_table_ref = opts.term_table_path;
    }
    if (h.qubit_count() <= oracle_cap)
        ctx.ground_energy = ground_energy(h, oracle_cap).ground_energy;
    if (h.source_circuit() && h.qubit_count() <= kSimulatorQubitCap)
        ctx.history_energy = energy(h, history_state(*h.source_circuit()));

    emit(opts.common, opts.common.format == "json"
                          ? render_run_json(ctx, report)
                          : render_run_text(ctx, report, rounds_note, threshold_note));
    return 0;
}

// --- decide ----------------------------------------------------------------

struct DecideOptions {
    CommonOptions common;
    std::string rounds_text = "auto";
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    int workers = 1;
};

int cmd_decide(const DecideOptions& opts) {
    const Circuit circuit = load_circuit(opts.common.circuit_path);
    const HamiltonianWeights weights = parse_weights(opts.common.weights_text);
    const Normalization normalization = parse_normalization(opts.common.normalization_text);
    const Claim claim = parse_claim(opts.common.claim_text);
    const Claim opposite = claim == Claim::member ? Claim::nonmember : Claim::member;
    if (!(opts.epsilon > 0.0) || !(opts.epsilon < 1.0))
        throw std::invalid_argument("--epsilon must lie in (0, 1)");
    const int oracle_cap = oracle_cap_from_env();

    const PairedReferences refs =
        paired_references(circuit, claim, weights, normalization, oracle_cap);
    if (refs.gap <= 0)
        throw std::runtime_error("paired decision needs a positive acceptance gap; got " +
                                 format_double(refs.gap));

    RunOptions run_options;
    run_options.rounds = opts.rounds_text == "auto"
                             ? amplification_rounds(refs.gap, opts.epsilon)
                             : parse_round_count(opts.rounds_text);
    run_options.threshold = refs.threshold;
    run_options.normalization = normalization;
    run_options.workers = opts.workers;

    const LocalHamiltonian h_honest = build_history_hamiltonian(circuit, weights, claim);
    const LocalHamiltonian h_cheat = build_history_hamiltonian(circuit, weights, opposite);

    run_options.master_seed = opts.seed;
    const ProtocolReport honest = run_protocol(
        h_honest, ProverStrategy{StrategyKind::honest, {}}, circuit, claim, run_options,
        oracle_cap);
    run_options.master_seed = opts.seed + 1;  // decorrelate the two worlds
    const ProtocolReport cheat = run_protocol(
        h_cheat, ProverStrategy{StrategyKind::ground_state, {}}, circuit, opposite, run_options,
        oracle_cap);

    const bool separated = honest.verdict && !cheat.verdict;

    std::string rendered;
    if (opts.common.format == "json") {
        auto side = [](const ProtocolReport& r) {
            return ordered_json{{"p_exact", r.p_exact},
                                {"p_hat", r.p_hat},
                                {"accept_count", r.accept_count},
                                {"verdict", r.verdict ? "accept" : "reject"}};
        };
        ordered_json j;
        j["circuit"] = opts.common.circuit_path;
        j["claim"] = std::string(claim_name(claim));
        j["seed"] = opts.seed;
        j["n_rounds"] = run_options.rounds;
        j["gap"] = refs.gap;
        j["threshold"] = refs.threshold;
        j["honest"] = side(honest);
        j["cheat"] = side(cheat);
        j["separated"] = separated;
        j["normalization"] = std::string(normalization_name(normalization));
        rendered = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "circuit    " << opts.common.circuit_path << "\n";
        os << "claim      " << claim_name(claim) << "\n";
        os << "rounds     " << run_options.rounds << " per world (seed " << opts.seed << ")\n";
        os << "gap        " << format_double(refs.gap) << "\n";
        os << "threshold  " << format_double(refs.threshold) << "  (midpoint)\n";
        os << "honest     p_hat " << format_double(honest.p_hat) << "  p_exact "
           << format_double(honest.p_exact) << "  -> "
           << (honest.verdict ? "accept" : "reject") << "\n";
        os << "cheat      p_hat " << format_double(cheat.p_hat) << "  p_exact "
           << format_double(cheat.p_exact) << "  -> " << (cheat.verdict ? "accept" : "reject")
           << "\n";
        os << "separated  " << (separated ? "true" : "false") << "\n";
        rendered = os.str();
    }
    emit(opts.common, rendered);
    return separated ? 0 : 1;
}

// --- oracle ----------------------------------------------------------------

int cmd_oracle(const CommonOptions& opts) {
    const Circuit circuit = load_circuit(opts.circuit_path);
    const HamiltonianWeights weights = parse_weights(opts.weights_text);
    const int oracle_cap = oracle_cap_from_env();

    const std::vector<oracle::CheckResult> results =
        oracle::run_all_checks(circuit, weights, oracle_cap);
    const bool all_pass = std::all_of(results.begin(), results.end(),
                                      [](const oracle::CheckResult& r) { return r.pass; });

    std::string rendered;
    if (opts.format == "json") {
        ordered_json j;
        j["circuit"] = opts.circuit_path;
        ordered_json checks = ordered_json::array();
        for (const oracle::CheckResult& r : results)
            checks.push_back({{"name", r.name},
                              {"pass", r.pass},
                              {"worst", r.worst},
                              {"detail", r.detail}});
        j["checks"] = checks;
        j["all_pass"] = all_pass;
        rendered = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (const oracle::CheckResult& r : results)
            os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
        os << (all_pass ? "all checks passed" : "at least one check FAILED") << "\n";
        rendered = os.str();
    }
    emit(opts, rendered);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-prover post hoc verification of quantum computation, simulated"};
    app.require_subcommand(1);

    InspectOptions inspect_opts;
    CLI::App* inspect = app.add_subcommand(
        "inspect", "Term table, sampling distribution, and locality of a clock Hamiltonian");
    add_common_options(inspect, inspect_opts.common);
    inspect->add_option("--csv", inspect_opts.csv_path, "Also write the term table as CSV");

    CommonOptions energy_opts;
    CLI::App* energy = app.add_subcommand(
        "energy", "Ground and history energies with the implied acceptance bounds");
    add_common_options(energy, energy_opts);

    RunCliOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "Run verification rounds against a prover strategy");
    add_common_options(run, run_opts.common);
    run->add_option("--strategy", run_opts.strategy_text,
                    "honest|ground_state|complement_history|maximally_mixed|fixed_state,<path>");
    run->add_option("--rounds", run_opts.rounds_text, "Round count, or 'auto' (Hoeffding bound)");
    run->add_option("--epsilon", run_opts.epsilon, "Target error for auto rounds (default 0.05)");
    run->add_option("--seed", run_opts.seed, "Master seed (default 0)");
    run->add_option("--workers", run_opts.workers, "Worker threads (default 1)")
        ->check(CLI::Range(1, 256));
    run->add_option("--term-table", run_opts.term_table_path,
                    "Write the term table CSV and reference it from the report");

    DecideOptions decide_opts;
    CLI::App* decide = app.add_subcommand(
        "decide", "Paired study: honest run on the claim vs ground-state cheat on its opposite");
    add_common_options(decide, decide_opts.common);
    decide->add_option("--rounds", decide_opts.rounds_text,
                       "Round count per world, or 'auto' (default auto)");
    decide->add_option("--epsilon", decide_opts.epsilon,
                       "Target error for auto rounds (default 0.05)");
    decide->add_option("--seed", decide_opts.seed, "Master seed (default 0)");
    decide->add_option("--workers", decide_opts.workers, "Worker threads (default 1)")
        ->check(CLI::Range(1, 256));

    CommonOptions oracle_opts;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Dense-matrix cross-check suite for one circuit");
    add_common_options(oracle_cmd, oracle_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
    }

    try {
        if (inspect->parsed()) return cmd_inspect(inspect_opts);
        if (energy->parsed()) return cmd_energy(energy_opts);
        if (run->parsed()) return cmd_run(run_opts);
        if (decide->parsed()) return cmd_decide(decide_opts);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_opts);
    } catch (const std::exception& e) {
        std::cerr << "posthoc: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
