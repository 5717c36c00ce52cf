// Command-line interface for the bellviol library.
//
// Subcommands:
//   violation -- maximize (or evaluate) the largest eigenvalue of the n-party
//                Bell operator over measurement tilt angles
//   table     -- per-party-count table of optimal angles and violations
//   game      -- classical/quantum values of the associated cooperative game
//   verify    -- self-check suite; exit code 2 if any check fails
//   state     -- amplitudes of a named extremal state (psi2, psi3, psi3prime)
//   classical -- deterministic-strategy bound and coverage proof for n parties
//
// Output formats: human (default), csv, json.  Human and CSV values are fixed
// at six decimals; JSON carries full round-trip precision.  Identical
// invocations produce byte-identical output.

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellviol/bell_core.hpp"
#include "bellviol/lhv.hpp"
#include "bellviol/optimize.hpp"
#include "bellviol/states.hpp"

namespace {

using nlohmann::json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string sci3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string bit_string(std::size_t index, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t l = 0; l < n; ++l) {
        if (index & (std::size_t{1} << (n - 1 - l))) s[l] = '1';
    }
    return s;
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
}

// ---------------------------------------------------------------------------
// violation

struct ViolationOutput {
    std::size_t n = 0;
    std::string method;
    bool converged = false;
    std::vector<double> xs;
    double lambda_max = 0.0;
    std::vector<bellviol::cdouble> eigvec;
    bool include_state = false;
};

std::string render_violation(const ViolationOutput& v, const std::string& format) {
    if (format == "json") {
        json j;
        j["n"] = v.n;
        j["method"] = v.method;
        j["converged"] = v.converged;
        j["xs"] = v.xs;
        j["lambda_max"] = v.lambda_max;
        if (v.include_state) {
            json amps = json::array();
            for (const auto& a : v.eigvec) amps.push_back({a.real(), a.imag()});
            j["eigvec"] = amps;
        }
        return j.dump() + "\n";
    }
    if (format == "csv") {
        std::string header = "n,method,converged,lambda_max";
        std::string row = std::to_string(v.n) + "," + v.method + "," +
                          (v.converged ? "1" : "0") + "," + fixed6(v.lambda_max);
        for (std::size_t i = 0; i < v.xs.size(); ++i) {
            header += ",x" + std::to_string(i + 1);
            row += "," + fixed6(v.xs[i]);
        }
        return header + "\n" + row + "\n";
    }
    std::string out;
    out += "n: " + std::to_string(v.n) + "\n";
    out += "method: " + v.method + "\n";
    out += std::string("converged: ") + (v.converged ? "true" : "false") + "\n";
    out += "x:";
    for (double x : v.xs) out += " " + fixed6(x);
    out += "\n";
    out += "lambda_max: " + fixed6(v.lambda_max) + "\n";
    if (v.include_state) {
        out += "state:\n";
        for (std::size_t i = 0; i < v.eigvec.size(); ++i) {
            out += "  " + std::to_string(i) + " " + bit_string(i, v.n) + " " +
                   fixed6(v.eigvec[i].real()) + " " + fixed6(v.eigvec[i].imag()) + "\n";
        }
    }
    return out;
}

ViolationOutput evaluate_fixed_angles(const bellviol::JordanParams& params) {
    const auto op = bellviol::bell_operator(params);
    const auto eig = bellviol::hermitian_eigen(op.matrix);
    const std::size_t dim = op.matrix.rows;
    const std::size_t top = dim - 1;
    ViolationOutput out;
    out.n = params.n;
    out.method = "fixed-angles";
    out.converged = true;
    out.xs = params.xs;
    out.lambda_max = eig.eigenvalues[top];
    out.eigvec.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) out.eigvec[i] = eig.eigenvectors(i, top);
    return out;
}

int run_violation(std::size_t n, const std::vector<double>& angles, double equal_angle,
                  bool has_equal_angle, bool full, std::size_t restarts, std::uint64_t seed,
                  bool include_state, const std::string& format, const std::string& out_path) {
    ViolationOutput out;
    if (!angles.empty()) {
        if (n != 0 && n != angles.size()) {
            throw std::invalid_argument("--n disagrees with the number of --angles entries");
        }
        out = evaluate_fixed_angles(bellviol::JordanParams(angles.size(), angles));
    } else if (has_equal_angle) {
        if (n == 0) throw std::invalid_argument("--equal-angle requires --n");
        out = evaluate_fixed_angles(bellviol::JordanParams::equal(n, equal_angle));
    } else {
        if (n == 0) throw std::invalid_argument("violation requires --n or --angles");
        const bellviol::ViolationResult res =
            full ? bellviol::maximize_full(n, restarts, seed)
                 : bellviol::maximize_equal_angle(n);
        out.n = res.n;
        out.method = bellviol::method_name(res.method);
        out.converged = res.converged;
        out.xs = res.xs.xs;
        out.lambda_max = res.lambda_max;
        out.eigvec = res.eigvec;
    }
    out.include_state = include_state;
    emit_text(render_violation(out, format), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// table

std::string render_table(const std::vector<bellviol::CurvePoint>& rows,
                         const std::string& format, bool gnuplot) {
    if (gnuplot) {
        std::string out;
        for (const auto& r : rows) {
            out += std::to_string(r.n) + " " + fixed6(r.lambda_max) + "\n";
        }
        return out;
    }
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"n", r.n}, {"x", r.x}, {"lambda_max", r.lambda_max}});
        }
        json j;
        j["rows"] = arr;
        return j.dump() + "\n";
    }
    std::string out = "n,x,lambda_max\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + fixed6(r.x) + "," + fixed6(r.lambda_max) + "\n";
    }
    return out;
}

int run_table(std::size_t n_min, std::size_t n_max, const std::string& format,
              bool gnuplot, const std::string& out_path) {
    const auto rows = bellviol::violation_curve(n_min, n_max);
    emit_text(render_table(rows, format, gnuplot), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// game

struct GameOutput {
    double classical = 0.0;
    bellviol::GameReplyStrategy witness{};
    double delta = 0.0;
    double quantum = 0.0;
    double quantum_simulated = 0.0;
    double prime_delta = 0.0;
    double prime = 0.0;
    double prime_simulated = 0.0;
};

std::string witness_string(const bellviol::GameReplyStrategy& w) {
    std::string s;
    for (int party = 0; party < 3; ++party) {
        if (party) s += " ";
        s += std::to_string(w.reply[party][0]);
        s += std::to_string(w.reply[party][1]);
    }
    return s;
}

std::string render_game(const GameOutput& g, const std::string& format) {
    if (format == "json") {
        json j;
        j["classical_value"] = g.classical;
        j["classical_witness"] = {{g.witness.reply[0][0], g.witness.reply[0][1]},
                                  {g.witness.reply[1][0], g.witness.reply[1][1]},
                                  {g.witness.reply[2][0], g.witness.reply[2][1]}};
        j["delta"] = g.delta;
        j["quantum_value"] = g.quantum;
        j["quantum_value_simulated"] = g.quantum_simulated;
        j["psi3prime_delta"] = g.prime_delta;
        j["psi3prime_value"] = g.prime;
        j["psi3prime_value_simulated"] = g.prime_simulated;
        return j.dump() + "\n";
    }
    if (format == "csv") {
        std::string out = "quantity,value\n";
        out += "classical_value," + fixed6(g.classical) + "\n";
        out += "classical_witness," + witness_string(g.witness) + "\n";
        out += "delta," + fixed6(g.delta) + "\n";
        out += "quantum_value," + fixed6(g.quantum) + "\n";
        out += "quantum_value_simulated," + fixed6(g.quantum_simulated) + "\n";
        out += "psi3prime_delta," + fixed6(g.prime_delta) + "\n";
        out += "psi3prime_value," + fixed6(g.prime) + "\n";
        out += "psi3prime_value_simulated," + fixed6(g.prime_simulated) + "\n";
        return out;
    }
    std::string out;
    out += "classical_value: " + fixed6(g.classical) + "\n";
    out += "classical_witness: " + witness_string(g.witness) + "\n";
    out += "delta: " + fixed6(g.delta) + "\n";
    out += "quantum_value: " + fixed6(g.quantum) + "\n";
    out += "quantum_value_simulated: " + fixed6(g.quantum_simulated) + "\n";
    out += "psi3prime_delta: " + fixed6(g.prime_delta) + "\n";
    out += "psi3prime_value: " + fixed6(g.prime) + "\n";
    out += "psi3prime_value_simulated: " + fixed6(g.prime_simulated) + "\n";
    return out;
}

int run_game(const std::string& format, const std::string& out_path) {
    GameOutput g;
    g.classical = bellviol::game_classical_value();
    g.witness = bellviol::game_classical_witness();

    const auto opt = bellviol::maximize_equal_angle(3);
    g.delta = opt.lambda_max;
    g.quantum = bellviol::game_quantum_value(g.delta);
    g.quantum_simulated = bellviol::game_quantum_simulate(
        bellviol::psi3(), bellviol::MeasurementSet::jordan(opt.xs));

    const auto prime_state = bellviol::psi3_prime();
    const auto zx = bellviol::MeasurementSet::zx(3);
    g.prime_delta = bellviol::violation_of(prime_state, zx);
    g.prime = bellviol::game_quantum_value(g.prime_delta);
    g.prime_simulated = bellviol::game_quantum_simulate(prime_state, zx);

    emit_text(render_game(g, format), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// state

std::string render_state(const std::string& name, const bellviol::PureState& state,
                         const std::string& format) {
    const std::size_t dim = state.amplitudes.size();
    if (format == "json") {
        json amps = json::array();
        for (std::size_t i = 0; i < dim; ++i) {
            amps.push_back({{"index", i},
                            {"bits", bit_string(i, state.n)},
                            {"re", state.amplitudes[i].real()},
                            {"im", state.amplitudes[i].imag()}});
        }
        json j;
        j["name"] = name;
        j["n"] = state.n;
        j["amplitudes"] = amps;
        return j.dump() + "\n";
    }
    if (format == "csv") {
        std::string out = "index,bits,re,im\n";
        for (std::size_t i = 0; i < dim; ++i) {
            out += std::to_string(i) + "," + bit_string(i, state.n) + "," +
                   fixed6(state.amplitudes[i].real()) + "," +
                   fixed6(state.amplitudes[i].imag()) + "\n";
        }
        return out;
    }
    std::string out;
    out += "name: " + name + "\n";
    out += "n: " + std::to_string(state.n) + "\n";
    for (std::size_t i = 0; i < dim; ++i) {
        out += std::to_string(i) + " " + bit_string(i, state.n) + " " +
               fixed6(state.amplitudes[i].real()) + " " +
               fixed6(state.amplitudes[i].imag()) + "\n";
    }
    return out;
}

int run_state(const std::string& name, const std::string& format, const std::string& out_path) {
    bellviol::PureState state = name == "psi2"        ? bellviol::psi2()
                                : name == "psi3"      ? bellviol::psi3()
                                                      : bellviol::psi3_prime();
    emit_text(render_state(name, state, format), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// classical

std::string render_classical(const bellviol::CoverageReport& report, double value,
                             const std::string& format) {
    const std::size_t strategies = std::size_t{1} << (2 * report.n);
    if (format == "json") {
        json j;
        j["n"] = report.n;
        j["classical_value"] = value;
        j["strategies"] = strategies;
        j["proof_sequences"] = report.sequences_checked;
        j["proof_min_multiplicity"] = report.min_multiplicity;
        return j.dump() + "\n";
    }
    if (format == "csv") {
        return "n,classical_value,strategies,proof_sequences,proof_min_multiplicity\n" +
               std::to_string(report.n) + "," + fixed6(value) + "," +
               std::to_string(strategies) + "," + std::to_string(report.sequences_checked) +
               "," + std::to_string(report.min_multiplicity) + "\n";
    }
    std::string out;
    out += "n: " + std::to_string(report.n) + "\n";
    out += "classical_value: " + fixed6(value) + "\n";
    out += "strategies: " + std::to_string(strategies) + "\n";
    out += "proof_sequences: " + std::to_string(report.sequences_checked) + "\n";
    out += "proof_min_multiplicity: " + std::to_string(report.min_multiplicity) + "\n";
    return out;
}

int run_classical(std::size_t n, const std::string& format, const std::string& out_path) {
    const double value = bellviol::classical_value(n);
    const auto report = bellviol::proof_check(n);
    emit_text(render_classical(report, value, format), out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Largest |lambda| mismatch between the dense-operator spectrum and the
// reduced-block spectrum over random angle draws.
double block_equivalence_residual(std::uint64_t seed) {
    bellviol::Xoshiro256StarStar rng(seed);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int draw = 0; draw < 10; ++draw) {
            std::vector<double> xs(n);
            for (double& x : xs) x = rng.uniform(0.05, 0.95);
            const bellviol::JordanParams params(n, xs);
            auto dense = bellviol::hermitian_eigenvalues(bellviol::bell_operator(params).matrix);
            const auto block = bellviol::reduced_matrix(params);
            std::vector<double> reduced;
            for (const auto& ev : bellviol::real_eigenvalues(block)) {
                reduced.push_back(ev.real());
            }
            std::sort(reduced.begin(), reduced.end());
            // Strip the (2^n - n - 2)-fold zero eigenvalues from the dense list.
            std::vector<double> nonzero;
            for (double ev : dense) {
                if (std::abs(ev) > 1e-9) nonzero.push_back(ev);
            }
            std::vector<double> reduced_nonzero;
            for (double ev : reduced) {
                if (std::abs(ev) > 1e-9) reduced_nonzero.push_back(ev);
            }
            if (nonzero.size() != reduced_nonzero.size()) return 1.0;
            for (std::size_t i = 0; i < nonzero.size(); ++i) {
                worst = std::max(worst, std::abs(nonzero[i] - reduced_nonzero[i]));
            }
        }
    }
    return worst;
}

// Largest mismatch between the equal-angle cubic root and the dense spectrum
// over a grid of tilt angles.
double equal_angle_residual() {
    double worst = 0.0;
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int k = 1; k < 50; ++k) {
            const double x = static_cast<double>(k) / 50.0;
            const auto poly = bellviol::cubic_equal_angle(n, x);
            double lambda_poly = 0.0;
            try {
                lambda_poly = std::max(0.0, bellviol::max_real_root(poly));
            } catch (const std::runtime_error&) {
                lambda_poly = 0.0;
            }
            const auto params = bellviol::JordanParams::equal(n, x);
            const auto dense =
                bellviol::hermitian_eigenvalues(bellviol::bell_operator(params).matrix);
            const double lambda_dense = std::max(0.0, dense.back());
            worst = std::max(worst, std::abs(lambda_poly - lambda_dense));
        }
    }
    return worst;
}

double named_state_residual() {
    double worst = 0.0;
    // Two-party extremal state reaches the two-party maximum.
    {
        const auto params = bellviol::JordanParams::equal(2, 1.0 / std::sqrt(2.0));
        const double value =
            bellviol::violation_of(bellviol::psi2(), bellviol::MeasurementSet::jordan(params));
        worst = std::max(worst, std::abs(value - (std::sqrt(2.0) - 1.0) / 2.0));
        const double target = (2.0 + std::sqrt(2.0)) / 4.0;
        for (const auto& rec : bellviol::correlation_table_psi2()) {
            worst = std::max(worst, std::abs(rec.probability - target));
        }
    }
    // Equal-magnitude three-party state reaches 1/8 with z/x settings.
    {
        const double delta =
            bellviol::violation_of(bellviol::psi3_prime(), bellviol::MeasurementSet::zx(3));
        worst = std::max(worst, std::abs(delta - 0.125));
    }
    // z/x-setting operator spectrum: zero (x3), -1/2 (x2), plus the cubic roots.
    {
        const auto spec = bellviol::b3_prime_spectrum();
        const auto cubic = bellviol::cubic_equal_angle(3, 1.0 / std::sqrt(2.0));
        std::vector<double> expected = {0.0, 0.0, 0.0, -0.5, -0.5};
        for (const auto& root : bellviol::poly_roots(cubic)) {
            expected.push_back(root.real());
        }
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < spec.size(); ++i) {
            worst = std::max(worst, std::abs(spec[i] - expected[i]));
        }
    }
    // Optimal three-party state is the top eigenvector of the optimal operator.
    {
        const auto opt = bellviol::maximize_equal_angle(3);
        const auto state = bellviol::psi3();
        bellviol::cdouble overlap = 0.0;
        for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
            overlap += std::conj(opt.eigvec[i]) * state.amplitudes[i];
        }
        worst = std::max(worst, std::abs(1.0 - std::abs(overlap)));
        worst = std::max(worst, std::abs(opt.lambda_max -
                                         bellviol::violation_of(
                                             state, bellviol::MeasurementSet::jordan(opt.xs))));
    }
    return worst;
}

double char_poly_residual(std::uint64_t seed) {
    bellviol::Xoshiro256StarStar rng(seed);
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        std::vector<double> xs = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95),
                                  rng.uniform(0.05, 0.95)};
        const bellviol::JordanParams params(3, xs);
        const auto poly = bellviol::char_poly_n3(params);
        for (const auto& ev :
             bellviol::real_eigenvalues(bellviol::reduced_matrix_n3(xs[0], xs[1], xs[2]))) {
            worst = std::max(worst, std::abs(poly(ev)));
        }
    }
    return worst;
}

double monotonicity_residual() {
    const auto rows = bellviol::violation_curve(2, 7);
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        worst = std::max(worst, rows[i - 1].lambda_max - rows[i].lambda_max);
    }
    return std::max(0.0, worst);
}

std::string render_verify(const std::vector<CheckResult>& checks, bool all_pass,
                          const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& c : checks) {
            arr.push_back({{"name", c.name},
                           {"residual", c.residual},
                           {"bound", c.bound},
                           {"pass", c.pass}});
        }
        json j;
        j["checks"] = arr;
        j["pass"] = all_pass;
        return j.dump() + "\n";
    }
    if (format == "csv") {
        std::string out = "name,residual,bound,pass\n";
        for (const auto& c : checks) {
            out += c.name + "," + sci3(c.residual) + "," + sci3(c.bound) + "," +
                   (c.pass ? "1" : "0") + "\n";
        }
        return out;
    }
    std::string out;
    for (const auto& c : checks) {
        out += std::string(c.pass ? "PASS" : "FAIL") + " " + c.name +
               " residual=" + sci3(c.residual) + " bound=" + sci3(c.bound) + "\n";
    }
    out += std::string("verify: ") + (all_pass ? "PASS" : "FAIL") + " (" +
           std::to_string(checks.size()) + " checks)\n";
    return out;
}

int run_verify(double tol, std::uint64_t seed, const std::string& format,
               const std::string& out_path) {
    std::vector<CheckResult> checks;
    auto add = [&checks](const std::string& name, double residual, double bound) {
        checks.push_back({name, residual, bound, residual <= bound});
    };

    add("block-equivalence", block_equivalence_residual(seed), tol);
    add("equal-angle-consistency", equal_angle_residual(), tol);

    {
        double worst = 0.0;
        for (std::size_t n = 2; n <= 7; ++n) {
            worst = std::max(worst, std::abs(bellviol::classical_value(n)));
        }
        add("classical-bound", worst, 0.0);
    }
    {
        double residual = 0.0;
        for (std::size_t n = 2; n <= 12; ++n) {
            const auto report = bellviol::proof_check(n);
            if (report.min_multiplicity < 1) residual = 1.0;
        }
        add("proof-coverage", residual, 0.0);
    }

    add("named-states", named_state_residual(), tol);

    {
        const auto report = bellviol::ghz_check(bellviol::psi3());
        add("state-marginal", std::max(0.0, 0.01 - report.max_distance), 0.0);
    }

    add("char-poly-oracle", char_poly_residual(seed + 1), tol);

    {
        const auto opt = bellviol::maximize_equal_angle(3);
        const auto report = bellviol::stationarity_report(opt.xs, opt.lambda_max);
        add("stationarity", report.max_abs, 1e-5);
    }

    add("monotonicity", monotonicity_residual(), 0.0);

    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c.pass;
    emit_text(render_verify(checks, all_pass, format), out_path);
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximum quantum violations of an n-party CH-type Bell inequality"};
    app.require_subcommand(1);

    std::string format = "human";
    std::string out_path;
    const auto add_io = [&format, &out_path](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"human", "json", "csv"}));
        sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    };

    // violation
    std::size_t n = 0;
    std::vector<double> angles;
    double equal_angle = 0.0;
    bool full = false;
    std::size_t restarts = 32;
    std::uint64_t seed = 0;
    bool include_state = false;
    auto* viol = app.add_subcommand(
        "violation", "Maximal eigenvalue of the Bell operator (optimized or at fixed angles)");
    viol->add_option("--n", n, "Number of parties");
    viol->add_option("--angles", angles, "Fixed tilt angles x_1,...,x_n (evaluation mode)")
        ->delimiter(',');
    auto* ea = viol->add_option("--equal-angle", equal_angle,
                                "Fixed common tilt angle (evaluation mode)");
    ea->excludes("--angles");
    viol->add_flag("--full", full, "Optimize over all n angles (Nelder-Mead restarts)");
    viol->add_option("--restarts", restarts, "Restart count for --full");
    viol->add_option("--seed", seed, "Seed for --full restarts");
    viol->add_flag("--state", include_state, "Include top-eigenvector amplitudes (human/json)");
    add_io(viol);

    // table
    std::size_t n_min = 3;
    std::size_t n_max = 7;
    bool gnuplot = false;
    auto* table = app.add_subcommand("table", "Optimal angle and violation per party count");
    table->add_option("--n-min", n_min, "Smallest party count");
    table->add_option("--n-max", n_max, "Largest party count");
    table->add_flag("--gnuplot", gnuplot, "Two-column (n, lambda_max) output for plotting");
    add_io(table);

    // game
    auto* game = app.add_subcommand("game", "Classical and quantum values of the guessing game");
    add_io(game);

    // verify
    double tol = 1e-8;
    auto* verify = app.add_subcommand("verify", "Run the self-check suite");
    verify->add_option("--tol", tol, "Tolerance for residual-based checks");
    verify->add_option("--seed", seed, "Seed for randomized checks");
    add_io(verify);

    // state
    std::string state_name;
    auto* state = app.add_subcommand("state", "Print a named extremal state");
    state->add_option("name", state_name, "State name")
        ->required()
        ->check(CLI::IsMember({"psi2", "psi3", "psi3prime"}));
    add_io(state);

    // classical
    auto* classical =
        app.add_subcommand("classical", "Classical bound and coverage proof for n parties");
    classical->add_option("--n", n, "Number of parties")->required();
    add_io(classical);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (viol->parsed()) {
            return run_violation(n, angles, equal_angle, ea->count() > 0, full, restarts, seed,
                                 include_state, format, out_path);
        }
        if (table->parsed()) return run_table(n_min, n_max, format, gnuplot, out_path);
        if (game->parsed()) return run_game(format, out_path);
        if (verify->parsed()) return run_verify(tol, seed, format, out_path);
        if (state->parsed()) return run_state(state_name, format, out_path);
        if (classical->parsed()) return run_classical(n, format, out_path);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
