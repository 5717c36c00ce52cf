// End-to-end tests for the bellviol command-line tool.  Each test launches the
// real binary (path injected at compile time) and inspects stdout plus the
// process exit code.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>

#include "json.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BELLVIOL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    CliResult result;
    result.output = out;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("violation subcommand reproduces reference optima") {
    const auto three = run_cli("violation --n 3");
    CHECK(three.exit_code == 0);
    CHECK(contains(three.output, "lambda_max: 0.236068"));
    CHECK(contains(three.output, "x: 0.786151 0.786151 0.786151"));
    CHECK(contains(three.output, "method: equal-angle-cubic"));

    const auto two = run_cli("violation --n 2");
    CHECK(two.exit_code == 0);
    CHECK(contains(two.output, "lambda_max: 0.207107"));
    CHECK(contains(two.output, "x: 0.707107 0.707107"));
}

TEST_CASE("violation evaluates fixed angles without optimizing") {
    const auto res = run_cli("violation --n 2 --angles 1.0,1.0");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "method: fixed-angles"));
    CHECK(contains(res.output, "lambda_max: 0.000000"));

    const auto equal = run_cli("violation --n 3 --equal-angle 0.786151");
    CHECK(equal.exit_code == 0);
    CHECK(contains(equal.output, "lambda_max: 0.236068"));

    // --angles alone fixes n.
    const auto implied = run_cli("violation --angles 0.707107,0.707107");
    CHECK(implied.exit_code == 0);
    CHECK(contains(implied.output, "n: 2"));
    CHECK(contains(implied.output, "lambda_max: 0.207107"));
}

TEST_CASE("violation --full agrees with the equal-angle reference value") {
    const auto res = run_cli("violation --n 5 --full --restarts 32 --seed 7 --format json");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["method"] == "full-operator");
    CHECK(j["converged"] == true);
    CHECK(std::abs(j["lambda_max"].get<double>() - 0.257836) < 1e-5);
    REQUIRE(j["xs"].size() == 5);
    for (const auto& x : j["xs"]) CHECK(std::abs(x.get<double>() - 0.860012) < 1e-4);
}

TEST_CASE("table emits the reference curve as CSV") {
    const auto res = run_cli("table --n-max 7");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.output);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "n,x,lambda_max");
    CHECK(lines[1] == "3,0.786151,0.236068");
    CHECK(lines[2] == "4,0.830913,0.249757");
    CHECK(lines[3] == "5,0.860012,0.257836");
    CHECK(lines[4] == "6,0.880509,0.263187");
    CHECK(lines[5] == "7,0.895745,0.266998");
    // Locale-independent: decimal points, newline separators only.
    CHECK(!contains(res.output, ","+std::string("0,")));
    CHECK(!contains(res.output, "\r"));
}

TEST_CASE("table honours n-min and the gnuplot emission mode") {
    const auto res = run_cli("table --n-min 2 --n-max 3");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.output);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "2,0.707107,0.207107");
    CHECK(lines[2] == "3,0.786151,0.236068");

    const auto plot = run_cli("table --n-min 2 --n-max 3 --gnuplot");
    REQUIRE(plot.exit_code == 0);
    const auto plot_lines = lines_of(plot.output);
    REQUIRE(plot_lines.size() == 2);
    CHECK(plot_lines[0] == "2 0.207107");
    CHECK(plot_lines[1] == "3 0.236068");
}

TEST_CASE("game reports classical and quantum values") {
    const auto res = run_cli("game");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "classical_value: 0.800000"));
    CHECK(contains(res.output, "classical_witness: 00 00 00"));
    CHECK(contains(res.output, "quantum_value: 0.847214"));
    CHECK(contains(res.output, "quantum_value_simulated: 0.847214"));
    CHECK(contains(res.output, "psi3prime_value: 0.825000"));
    CHECK(contains(res.output, "psi3prime_value_simulated: 0.825000"));
    CHECK(contains(res.output, "delta: 0.236068"));

    const auto j = nlohmann::json::parse(run_cli("game --format json").output);
    CHECK(std::abs(j["quantum_value"].get<double>() - 0.8472135954999579) < 1e-12);
    CHECK(std::abs(j["psi3prime_delta"].get<double>() - 0.125) < 1e-12);
}

TEST_CASE("verify passes at default tolerance and fails when over-tightened") {
    const auto ok = run_cli("verify");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "verify: PASS"));
    CHECK(!contains(ok.output, "FAIL "));
    for (const char* name :
         {"block-equivalence", "equal-angle-consistency", "classical-bound", "proof-coverage",
          "named-states", "state-marginal", "char-poly-oracle", "stationarity", "monotonicity"}) {
        CHECK(contains(ok.output, name));
    }

    const auto tight = run_cli("verify --tol 1e-15");
    CHECK(tight.exit_code == 2);
    CHECK(contains(tight.output, "verify: FAIL"));
    CHECK(contains(tight.output, "residual="));  // reported, not crashed
}

TEST_CASE("state subcommand prints named states") {
    const auto psi2 = run_cli("state psi2 --format csv");
    CHECK(psi2.exit_code == 0);
    const auto lines = lines_of(psi2.output);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "index,bits,re,im");
    CHECK(lines[1] == "0,00,0.653281,0.000000");
    CHECK(lines[4] == "3,11,-0.653281,0.000000");

    const auto prime = run_cli("state psi3prime");
    CHECK(prime.exit_code == 0);
    CHECK(contains(prime.output, "0 000 0.353553 0.000000"));
    CHECK(contains(prime.output, "7 111 -0.353553 0.000000"));

    const auto j = nlohmann::json::parse(run_cli("state psi3 --format json").output);
    CHECK(j["n"] == 3);
    REQUIRE(j["amplitudes"].size() == 8);
    CHECK(j["amplitudes"][0]["bits"] == "000");
    CHECK(std::abs(j["amplitudes"][0]["re"].get<double>() - 0.6498393924658126) < 1e-12);
}

TEST_CASE("classical subcommand reports the zero bound with coverage proof") {
    const auto res = run_cli("classical --n 3");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "classical_value: 0.000000"));
    CHECK(contains(res.output, "proof_min_multiplicity: 1"));
    CHECK(contains(res.output, "strategies: 64"));
    CHECK(contains(res.output, "proof_sequences: 8"));
}

TEST_CASE("usage errors exit with status 1") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("bogus").exit_code == 1);
    CHECK(run_cli("violation").exit_code == 1);
    CHECK(run_cli("violation --n 1").exit_code == 1);
    CHECK(run_cli("violation --n 3 --angles 0.5,0.5").exit_code == 1);
    CHECK(run_cli("violation --n 2 --angles 0.5,0.5 --equal-angle 0.5").exit_code == 1);
    CHECK(run_cli("violation --n 2 --angles 1.5,0.5").exit_code == 1);
    CHECK(run_cli("violation --n 3 --format xml").exit_code == 1);
    CHECK(run_cli("state nope").exit_code == 1);
    CHECK(run_cli("classical --n 42").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("identical invocations give byte-identical output") {
    for (const char* args : {"violation --n 4 --full --restarts 8 --seed 11 --format json",
                             "table --n-max 5", "verify", "game --format csv"}) {
        const auto a = run_cli(args);
        const auto b = run_cli(args);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.output == b.output);
    }
}

TEST_CASE("json output round-trips through parse and re-serialization") {
    for (const char* args : {"violation --n 3 --format json", "table --n-max 4 --format json",
                             "game --format json", "verify --format json",
                             "state psi2 --format json", "classical --n 2 --format json"}) {
        const auto res = run_cli(args);
        REQUIRE(res.exit_code == 0);
        const auto j = nlohmann::json::parse(res.output);
        CHECK(j.dump() + "\n" == res.output);
    }
    // Full precision survives the round trip.
    const auto j = nlohmann::json::parse(run_cli("violation --n 3 --format json").output);
    CHECK(j["lambda_max"].get<double>() == 0.23606797749978967);
}

TEST_CASE("out flag writes the same bytes to a file") {
    const std::string path = "cli_out_check.txt";
    const auto direct = run_cli("violation --n 3");
    const auto redirected = run_cli("violation --n 3 --out " + path);
    REQUIRE(redirected.exit_code == 0);
    CHECK(redirected.output.empty());
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file.good());
    std::stringstream content;
    content << file.rdbuf();
    CHECK(content.str() == direct.output);
    std::remove(path.c_str());
}

TEST_CASE("violation --state appends eigenvector amplitudes") {
    const auto res = run_cli("violation --n 2 --state");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "state:"));
    const auto j = nlohmann::json::parse(run_cli("violation --n 2 --state --format json").output);
    REQUIRE(j.contains("eigvec"));
    REQUIRE(j["eigvec"].size() == 4);
    double norm = 0.0;
    for (const auto& amp : j["eigvec"]) {
        norm += amp[0].get<double>() * amp[0].get<double>() +
                amp[1].get<double>() * amp[1].get<double>();
    }
    CHECK(std::abs(norm - 1.0) < 1e-12);
}
