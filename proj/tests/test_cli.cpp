#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

#ifndef CUNTZ_CLI_PATH
#define CUNTZ_CLI_PATH ""
#endif

using namespace cuntz;

namespace {

std::string cli_path() {
    if (const char* env = std::getenv("CUNTZ_CLI")) return env;
    return CUNTZ_CLI_PATH;
}

std::filesystem::path work_dir() {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "cuntz_cli_fixtures";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_raw(const std::string& name, const std::string& body) {
    const std::filesystem::path path = work_dir() / name;
    std::ofstream out(path);
    out << body;
    return path.string();
}

std::string write_fixture(const std::string& name, const nlohmann::json& j) {
    return write_raw(name, j.dump());
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = {}) {
    static int counter = 0;
    const std::filesystem::path out_path =
        work_dir() / ("capture" + std::to_string(counter++) + ".txt");
    std::string cmd;
    if (!env.empty()) cmd += "env " + env + " ";
    cmd += "\"" + cli_path() + "\" " + args + " > \"" + out_path.string() +
           "\" 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    if (status != -1 && WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    result.output = ss.str();
    return result;
}

const DualGroup& z2() {
    static const DualGroup g = DualGroup::cyclic({2});
    return g;
}

}  // namespace

TEST_CASE("cli binary is reachable") {
    REQUIRE_FALSE(cli_path().empty());
    REQUIRE(std::filesystem::exists(cli_path()));
}

TEST_CASE("replication over the two element group passes") {
    const RunResult run = run_cli("replicate --group 2 --m 4");
    INFO(run.output);
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.output.find("overall: PASS") != std::string::npos);
    REQUIRE(run.output.find("[FAIL]") == std::string::npos);
    REQUIRE(run.output.find("ht_upper_level_two") != std::string::npos);
}

TEST_CASE("replication emits machine readable reports") {
    const RunResult run = run_cli("replicate --group 2 --m 3 --format json");
    INFO(run.output);
    REQUIRE(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(run.output);
    REQUIRE(j["overall"] == true);
    REQUIRE(j["checks"].is_array());
    REQUIRE_FALSE(j["checks"].empty());
    bool saw_citation = false, saw_computed = false;
    for (const auto& v : j["values"]) {
        if (v["provenance"] == "citation") saw_citation = true;
        if (v["provenance"] == "computed") saw_computed = true;
    }
    REQUIRE(saw_citation);
    REQUIRE(saw_computed);
    REQUIRE(j["entropy"]["twisted"]["counts"] ==
            nlohmann::json({2, 4, 8}));
}

TEST_CASE("trivial and malformed group specs are usage errors") {
    REQUIRE(run_cli("replicate --group 1").exit_code == 2);
    REQUIRE(run_cli("replicate --group bogus").exit_code == 2);
    REQUIRE(run_cli("replicate --group 2x").exit_code == 2);
    REQUIRE(run_cli("replicate").exit_code == 2);
}

TEST_CASE("missing subcommands and bad flags are usage errors") {
    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("--help").exit_code == 0);
    REQUIRE(run_cli("replicate --no-such-flag 1").exit_code == 2);
    REQUIRE(run_cli("check").exit_code == 2);
}

TEST_CASE("unitarity verdicts") {
    const std::string good =
        write_fixture("flip.json", element_to_json(flip_unitary(2)));
    const std::string bad =
        write_fixture("isometry.json", element_to_json(Element::isometry(2, 0)));
    REQUIRE(run_cli("check unitary --elem \"" + good + "\"").exit_code == 0);
    const RunResult fail = run_cli("check unitary --elem \"" + bad + "\"");
    REQUIRE(fail.exit_code == 1);
    REQUIRE(nlohmann::json::parse(fail.output)["ok"] == false);
}

TEST_CASE("diagonal preservation verdicts carry witnesses") {
    const std::string izumi = write_fixture(
        "izumi2.json", endomorphism_to_json(izumi_endomorphism(z2())));
    const RunResult fail =
        run_cli("check masa --endo \"" + izumi + "\" --depth 1");
    REQUIRE(fail.exit_code == 1);
    const nlohmann::json j = nlohmann::json::parse(fail.output);
    REQUIRE(j["ok"] == false);
    REQUIRE(j.contains("cylinder"));
    REQUIRE(j.contains("witness"));

    const std::string twisted = write_fixture(
        "twisted2.json",
        endomorphism_to_json(
            compose(izumi_endomorphism(z2()), fourier_automorphism(z2()))));
    REQUIRE(run_cli("check masa --endo \"" + twisted + "\" --depth 3")
                .exit_code == 0);
}

TEST_CASE("closed form verdicts") {
    REQUIRE(run_cli("check closed-forms --group 3").exit_code == 0);
    REQUIRE(run_cli("check closed-forms --group 2x2").exit_code == 0);
}

TEST_CASE("pentagon verdicts") {
    const std::string id4 =
        write_fixture("id4.json", matrix_to_json(ComplexMatrix::identity(4)));
    const std::string flip =
        write_fixture("flipmat.json", matrix_to_json(flip_matrix(2)));
    REQUIRE(run_cli("check pentagon --file \"" + id4 + "\" --N 2").exit_code ==
            0);
    REQUIRE(run_cli("check pentagon --file \"" + flip + "\" --N 2")
                .exit_code == 1);
    REQUIRE(run_cli("check pentagon --file \"" + id4 + "\" --N 3").exit_code ==
            2);
}

TEST_CASE("state invariance verdict") {
    const std::string izumi = write_fixture(
        "izumi2.json", endomorphism_to_json(izumi_endomorphism(z2())));
    REQUIRE(run_cli("check phi --endo \"" + izumi + "\"").exit_code == 0);
}

TEST_CASE("entropy tables from a rule file") {
    const std::string rule = write_fixture(
        "diff2.json",
        rule_to_json(closed_form_rule(RuleKind::difference, z2(), 5)));
    const RunResult run =
        run_cli("entropy --rule \"" + rule + "\" --n 1 --m 4 --format json");
    REQUIRE(run.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(run.output);
    REQUIRE(j["counts"] == nlohmann::json({2, 4, 8, 16}));
    REQUIRE(run_cli("entropy --rule \"" + rule + "\" --n 0 --m 4").exit_code ==
            2);
}

TEST_CASE("rule extraction to a file") {
    const std::string twisted = write_fixture(
        "twisted2.json",
        endomorphism_to_json(
            compose(izumi_endomorphism(z2()), fourier_automorphism(z2()))));
    const std::string out = (work_dir() / "extracted.json").string();
    REQUIRE(run_cli("extract-rule --endo \"" + twisted +
                    "\" --depth 3 --emit-rule \"" + out + "\"")
                .exit_code == 0);
    std::ifstream in(out);
    const LocalRule rule = rule_from_json(nlohmann::json::parse(in));
    REQUIRE(rules_equal(rule, closed_form_rule(RuleKind::difference, z2(), 3),
                        3));

    const std::string izumi = write_fixture(
        "izumi2.json", endomorphism_to_json(izumi_endomorphism(z2())));
    REQUIRE(run_cli("extract-rule --endo \"" + izumi + "\" --depth 2")
                .exit_code == 1);
}

TEST_CASE("commutant dimensions from the command line") {
    const std::string shift = write_fixture(
        "shift2.json", endomorphism_to_json(canonical_shift(2)));
    const RunResult run = run_cli("commutant --endo \"" + shift +
                                  "\" --k 1 --m 2 --format json");
    REQUIRE(run.exit_code == 0);
    REQUIRE(nlohmann::json::parse(run.output)["commutant_dimension"] == 4);
    REQUIRE(run_cli("commutant --endo \"" + shift + "\" --k 1 --m 0")
                .exit_code == 2);
}

TEST_CASE("applying an endomorphism from files") {
    const std::string shift = write_fixture(
        "shift2.json", endomorphism_to_json(canonical_shift(2)));
    const std::string unit = write_fixture(
        "unit.json",
        element_to_json(Element::monomial(2, Complex(1.0), {0}, {0})));
    const RunResult run =
        run_cli("apply --endo \"" + shift + "\" --elem \"" + unit + "\"");
    REQUIRE(run.exit_code == 0);
    const Element result = element_from_json(nlohmann::json::parse(run.output));
    const Element expected =
        apply(canonical_shift(2),
              Element::monomial(2, Complex(1.0), {0}, {0}));
    REQUIRE(equals(result, expected));
}

TEST_CASE("malformed input files are usage errors") {
    const std::string broken = write_raw("broken.json", "{nope");
    REQUIRE(run_cli("check masa --endo \"" + broken + "\"").exit_code == 2);
    REQUIRE(run_cli("check unitary --elem \"" + broken + "\"").exit_code == 2);
    REQUIRE(run_cli("apply --endo \"" + broken + "\" --elem \"" + broken +
                    "\"").exit_code == 2);
    const std::string missing = (work_dir() / "absent.json").string();
    REQUIRE(run_cli("check unitary --elem \"" + missing + "\"").exit_code ==
            2);
}

TEST_CASE("the enumeration budget honors its environment override") {
    const RunResult run =
        run_cli("replicate --group 2 --m 6", "CUNTZ_BUDGET=8");
    INFO(run.output);
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.output.find("truncated") != std::string::npos);
    REQUIRE(run_cli("replicate --group 2", "CUNTZ_BUDGET=frog").exit_code ==
            2);
    REQUIRE(run_cli("replicate --group 2", "CUNTZ_BUDGET=0").exit_code == 2);
}
