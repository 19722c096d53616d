#include "posthoc/report.hpp"

#include <doctest.h>

#include <cmath>

#include <json.hpp>

using namespace posthoc;

namespace {

const Circuit kX0 = parse_circuit("qubits 1\noutput 0\nX 0\n");

ProtocolReport sample_report() {
    ProtocolReport r;
    r.rounds = 1000;
    r.accept_count = 497;
    r.p_hat = 0.497;
    r.p_exact = 0.5;
    r.threshold = 0.25;
    r.verdict = true;
    r.seed = 42;
    return r;
}

}  // namespace

TEST_CASE("run report JSON is byte-stable") {
    ReportContext ctx;
    ctx.circuit = "circuits/x0.circ";
    ctx.strategy = "honest";
    ctx.ground_energy = 0.0;
    ctx.history_energy = 0.0;

    // Golden output: key order, shortest-decimal numbers, trailing newline.
    CHECK(render_run_json(ctx, sample_report()) ==
          "{\n"
          "  \"circuit\": \"circuits/x0.circ\",\n"
          "  \"claim\": \"member\",\n"
          "  \"strategy\": \"honest\",\n"
          "  \"n_rounds\": 1000,\n"
          "  \"seed\": 42,\n"
          "  \"accept_count\": 497,\n"
          "  \"p_hat\": 0.497,\n"
          "  \"p_exact\": 0.5,\n"
          "  \"threshold\": 0.25,\n"
          "  \"verdict\": \"accept\",\n"
          "  \"term_table_ref\": null,\n"
          "  \"energies\": {\n"
          "    \"ground\": 0.0,\n"
          "    \"history\": 0.0\n"
          "  },\n"
          "  \"normalization\": \"with-identity\"\n"
          "}\n");

    // Optional fields fall back to null.
    ReportContext bare;
    bare.circuit = "c";
    bare.strategy = "honest";
    const nlohmann::json parsed = nlohmann::json::parse(render_run_json(bare, sample_report()));
    CHECK(parsed["term_table_ref"].is_null());
    CHECK(parsed["energies"]["ground"].is_null());
    CHECK(parsed["energies"]["history"].is_null());

    // Numbers print as shortest round-trip decimals.
    CHECK(nlohmann::json(0.1).dump() == "0.1");
    CHECK(nlohmann::json(0.4433647700847534).dump() == "0.4433647700847534");
}

TEST_CASE("run report text carries the notes") {
    ReportContext ctx;
    ctx.circuit = "circuits/x0.circ";
    ctx.strategy = "honest";
    const std::string text =
        render_run_text(ctx, sample_report(), "set by --rounds", "midpoint of the paired bounds");
    CHECK(text.find("circuits/x0.circ") != std::string::npos);
    CHECK(text.find("accept") != std::string::npos);
    CHECK(text.find("set by --rounds") != std::string::npos);
    CHECK(text.find("midpoint of the paired bounds") != std::string::npos);
    CHECK(text.find("0.497") != std::string::npos);
}

TEST_CASE("energy report JSON carries the bounds") {
    const LocalHamiltonian h = build_history_hamiltonian(kX0);
    const EnergyReport energies = ground_energy(h);
    const AcceptanceBounds bounds = acceptance_bounds(h, 0.0, 0.25);
    EnergyReportContext ctx;
    ctx.circuit = "circuits/x0.circ";

    const nlohmann::json parsed = nlohmann::json::parse(
        render_energy_json(ctx, h, energies, bounds, Normalization::with_identity));
    CHECK(parsed["circuit"] == "circuits/x0.circ");
    CHECK(parsed["claim"] == "member");
    CHECK(parsed["weights"]["input"] == 1.0);
    CHECK(parsed["weights"]["output"] == 1.0);
    CHECK(parsed["qubits"] == 2);
    CHECK(parsed["clock_steps"] == 1);
    CHECK(parsed["sum_abs"] == 2.0);
    CHECK(std::abs(parsed["ground_energy"].get<double>()) <= 1e-10);
    CHECK(parsed["acceptance"]["a_ref"] == 0.0);
    CHECK(parsed["acceptance"]["b_ref"] == 0.25);
    CHECK(parsed["acceptance"]["p_if_energy_a"] == 0.5);
    CHECK(parsed["acceptance"]["gap"] == doctest::Approx(0.0625));
    CHECK(parsed["normalization"] == "with-identity");

    const std::string text =
        render_energy_text(ctx, h, energies, bounds, Normalization::with_identity);
    CHECK(text.find("ground energy") != std::string::npos);
    CHECK(text.find("0.0625") != std::string::npos);
}

TEST_CASE("inspect JSON lists terms by weight") {
    const LocalHamiltonian h = build_history_hamiltonian(kX0);
    const nlohmann::json parsed =
        nlohmann::json::parse(render_inspect_json("circuits/x0.circ", h,
                                                  Normalization::with_identity));
    CHECK(parsed["qubits"] == 2);
    CHECK(parsed["layout"]["data"] == 1);
    CHECK(parsed["layout"]["witness"] == 0);
    CHECK(parsed["layout"]["clock"] == 1);
    CHECK(parsed["clock_steps"] == 1);
    CHECK(parsed["term_count"] == 3);
    CHECK(parsed["sum_abs"] == 2.0);
    CHECK(parsed["xz_only"] == true);
    CHECK(parsed["locality_histogram"]["0"] == 1);
    CHECK(parsed["locality_histogram"]["2"] == 2);

    REQUIRE(parsed["terms"].size() == 3);
    CHECK(parsed["terms"][0]["string"] == "I");
    CHECK(parsed["terms"][0]["coefficient"] == 1.0);
    CHECK(parsed["terms"][0]["pi"] == 0.5);
    CHECK(parsed["terms"][0]["sign"] == 1);
    CHECK(parsed["terms"][1]["string"] == "X0*X1");  // |coef| ties break on the string
    CHECK(parsed["terms"][2]["string"] == "Z0*Z1");
    CHECK(parsed["terms"][1]["sign"] == -1);

    const std::string text =
        render_inspect_text("circuits/x0.circ", h, Normalization::with_identity);
    CHECK(text.find("X0*X1") != std::string::npos);
    CHECK(text.find("sum_abs") != std::string::npos);
}
