#pragma once

// Classical side of the inequality: deterministic local strategies and the
// exhaustive certification that none of them violates, the combinatorial
// covering argument behind the bound, and the three-party nonlocal game the
// inequality turns into.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellviol/states.hpp"

namespace bellviol {

// ---------------------------------------------------------------------------
// Deterministic local strategies.
// ---------------------------------------------------------------------------

// A local deterministic assignment: party l answers outcomes[l][j] in {+1,-1}
// when asked setting j, independent of the other parties.  There are exactly
// 4^n such strategies; from_index enumerates them bijectively.
struct DeterministicStrategy {
    std::size_t n = 0;
    std::vector<std::array<int, 2>> outcomes;  // [party][setting]

    DeterministicStrategy(std::size_t n_, std::vector<std::array<int, 2>> outcomes_)
        : n(n_), outcomes(std::move(outcomes_)) {
        if (outcomes.size() != n)
            throw std::invalid_argument("DeterministicStrategy: expected " + std::to_string(n) +
                                        " outcome pairs, got " + std::to_string(outcomes.size()));
        for (const auto& pair : outcomes)
            for (int o : pair)
                if (o != 1 && o != -1)
                    throw std::invalid_argument(
                        "DeterministicStrategy: outcomes must be +1 or -1, got " +
                        std::to_string(o));
    }

    // Strategy `index` of the 4^n enumeration: two bits per party, low bit =
    // setting 1, high bit = setting 2; bit 0 means outcome +1.
    static DeterministicStrategy from_index(std::size_t n_, std::size_t index) {
        if (n_ < 2 || n_ > 31)
            throw std::invalid_argument("DeterministicStrategy: party count out of range");
        const std::size_t total = std::size_t{1} << (2 * n_);
        if (index >= total)
            throw std::invalid_argument("DeterministicStrategy: index " + std::to_string(index) +
                                        " out of range for " + std::to_string(total) +
                                        " strategies");
        std::vector<std::array<int, 2>> outcomes(n_);
        for (std::size_t l = 0; l < n_; ++l) {
            outcomes[l][0] = ((index >> (2 * l)) & 1) ? -1 : 1;
            outcomes[l][1] = ((index >> (2 * l + 1)) & 1) ? -1 : 1;
        }
        return DeterministicStrategy(n_, std::move(outcomes));
    }
};

// Value of the inequality functional on a deterministic strategy: every joint
// probability collapses to 0 or 1.  The covering argument below guarantees
// the result is never positive.
inline double bell_functional(const DeterministicStrategy& s) {
    bool all_first = true, all_second = true;
    for (const auto& o : s.outcomes) {
        all_first = all_first && o[0] == 1;
        all_second = all_second && o[1] == 1;
    }
    double value = (all_first ? 1.0 : 0.0) - (all_second ? 1.0 : 0.0);
    for (std::size_t flip = 0; flip < s.n; ++flip) {
        bool term = s.outcomes[flip][1] == -1;
        for (std::size_t l = 0; l < s.n && term; ++l)
            if (l != flip && s.outcomes[l][0] != 1) term = false;
        if (term) value -= 1.0;
    }
    return value;
}

// Maximum of bell_functional over all 4^n deterministic strategies; the
// classical bound of the inequality.  Exhaustive, hence a proof: equals 0.
inline double classical_value(std::size_t n) {
    if (n < 2 || n > 10)
        throw std::invalid_argument("classical_value: exhaustive enumeration supports 2 <= n <= 10");
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t total = std::size_t{1} << (2 * n);
    for (std::size_t index = 0; index < total; ++index)
        best = std::max(best, bell_functional(DeterministicStrategy::from_index(n, index)));
    return best;
}

// ---------------------------------------------------------------------------
// The covering argument.
// ---------------------------------------------------------------------------

// Coverage audit of the combinatorial proof that the classical bound is 0:
// every outcome sequence contributing to the left-hand probability (first n
// outcomes all +1, any second half) must be counted by at least one
// right-hand term.  Term 0 is the all-setting-2 probability; term 1+l the
// single-flip probability of party l.
struct CoverageReport {
    std::size_t n = 0;
    std::size_t sequences_checked = 0;             // 2^n second-half patterns
    std::vector<std::size_t> per_term_counts;      // n+1 terms
    std::vector<std::size_t> multiplicity_histogram;  // [m] = sequences covered m times
    std::size_t min_multiplicity = 0;
};

inline CoverageReport proof_check(std::size_t n) {
    if (n < 2 || n > 12)
        throw std::invalid_argument("proof_check: supported for 2 <= n <= 12");
    CoverageReport report;
    report.n = n;
    report.sequences_checked = std::size_t{1} << n;
    report.per_term_counts.assign(n + 1, 0);
    report.multiplicity_histogram.assign(n + 2, 0);
    report.min_multiplicity = n + 2;
    for (std::size_t pattern = 0; pattern < report.sequences_checked; ++pattern) {
        // bit l of `pattern` set means party l answers -1 on setting 2
        std::size_t covered = 0;
        if (pattern == 0) {
            ++report.per_term_counts[0];  // second half all +1: the first term
            ++covered;
        }
        for (std::size_t l = 0; l < n; ++l) {
            if ((pattern >> l) & 1) {
                ++report.per_term_counts[1 + l];
                ++covered;
            }
        }
        if (covered == 0)
            throw std::logic_error("proof_check: uncovered outcome sequence " +
                                   std::to_string(pattern));
        ++report.multiplicity_histogram[covered];
        report.min_multiplicity = std::min(report.min_multiplicity, covered);
    }
    return report;
}

// ---------------------------------------------------------------------------
// The three-party game.
// ---------------------------------------------------------------------------

// Three players each receive one instruction bit from the five equiprobable
// instructions and answer one reply bit without communicating.  Winning:
//   000 -> every reply is 0;
//   111 -> not every reply is 0;
//   one-hot instruction -> NOT (the party holding the 1 replies 1 while both
//   others reply 0).
struct GameSpec {
    static constexpr std::array<std::array<int, 3>, 5> instructions{
        {{0, 0, 0}, {1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static bool wins(const std::array<int, 3>& instruction, const std::array<int, 3>& replies) {
        const bool all_zero = replies[0] == 0 && replies[1] == 0 && replies[2] == 0;
        const int ones = instruction[0] + instruction[1] + instruction[2];
        if (ones == 0) return all_zero;
        if (ones == 3) return !all_zero;
        for (int l = 0; l < 3; ++l)
            if (instruction[l] == 1)
                return !(replies[l] == 1 && replies[(l + 1) % 3] == 0 &&
                         replies[(l + 2) % 3] == 0);
        return false;  // unreachable: instructions carry 0, 1 or 3 ones
    }
};

// A deterministic classical game strategy: party l replies reply[l][b] to
// instruction bit b.
struct GameReplyStrategy {
    std::array<std::array<int, 2>, 3> reply{};  // [party][instruction bit]
};

// Win probability of a deterministic reply strategy under the uniform
// distribution over the five instructions.
inline double game_strategy_value(const GameReplyStrategy& strategy) {
    int wins = 0;
    for (const auto& instruction : GameSpec::instructions) {
        std::array<int, 3> replies{};
        for (int l = 0; l < 3; ++l) replies[l] = strategy.reply[l][instruction[l]];
        if (GameSpec::wins(instruction, replies)) ++wins;
    }
    return static_cast<double>(wins) / 5.0;
}

// First deterministic strategy attaining the classical maximum in enumeration
// order: all parties always reply 0.
inline GameReplyStrategy game_classical_witness() {
    GameReplyStrategy best{};
    double best_value = -1.0;
    for (std::size_t index = 0; index < 64; ++index) {
        GameReplyStrategy s{};
        for (int l = 0; l < 3; ++l)
            for (int b = 0; b < 2; ++b) s.reply[l][b] = (index >> (2 * l + b)) & 1;
        const double value = game_strategy_value(s);
        if (value > best_value) {
            best_value = value;
            best = s;
        }
    }
    return best;
}

// Classical maximum of the game over all 64 deterministic reply strategies;
// equals 4/5.
inline double game_classical_value() { return game_strategy_value(game_classical_witness()); }

// Quantum win probability from the inequality value delta = lhs - rhs of the
// shared state and measurements: 4/5 + delta/5.
inline double game_quantum_value(double delta) { return 0.8 + delta / 5.0; }

// Full simulation of the quantum game: party l measures its setting
// instruction[l]+1 observable and replies 0 on outcome +1, 1 on outcome -1;
// the win probability sums the joint outcome probabilities of every winning
// reply triple.  Must agree with game_quantum_value(violation_of(...)).
inline double game_quantum_simulate(const PureState& state, const MeasurementSet& meas) {
    if (state.n != 3 || meas.n != 3)
        throw std::invalid_argument("game_quantum_simulate: the game is defined for 3 parties");
    const ComplexMatrix id = ComplexMatrix::identity(2);
    double total = 0.0;
    for (const auto& instruction : GameSpec::instructions) {
        for (int ra = 0; ra < 2; ++ra)
            for (int rb = 0; rb < 2; ++rb)
                for (int rc = 0; rc < 2; ++rc) {
                    const std::array<int, 3> replies{ra, rb, rc};
                    if (!GameSpec::wins(instruction, replies)) continue;
                    std::vector<cdouble> v = state.amplitudes;
                    for (std::size_t l = 0; l < 3; ++l) {
                        const ComplexMatrix& onto_plus =
                            meas.settings[l][static_cast<std::size_t>(instruction[l])].matrix;
                        const ComplexMatrix effect =
                            (replies[l] == 0) ? onto_plus : id - onto_plus;
                        v = apply_single_qubit(v, 3, l, effect);
                    }
                    total += vec_dot(state.amplitudes, v).real();
                }
    }
    return total / 5.0;
}

}  // namespace bellviol
