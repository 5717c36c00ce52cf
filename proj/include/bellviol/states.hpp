#pragma once

// Named extremal states of the inequality family, measurement-set containers,
// and probability-level evaluation of the inequality: everything needed to
// reproduce the published violation values from outcome statistics rather
// than from operator algebra.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellviol/bell_core.hpp"
#include "bellviol/linalg.hpp"

namespace bellviol {

// ---------------------------------------------------------------------------
// States.
// ---------------------------------------------------------------------------

// Unit-norm n-qubit state in computational-basis order, |00...0> first, party
// 0 on the most significant bit.
struct PureState {
    std::size_t n = 0;
    std::vector<cdouble> amplitudes;

    PureState(std::size_t n_, std::vector<cdouble> amplitudes_)
        : n(n_), amplitudes(std::move(amplitudes_)) {
        if (amplitudes.size() != (std::size_t{1} << n))
            throw std::invalid_argument("PureState: expected " +
                                        std::to_string(std::size_t{1} << n) +
                                        " amplitudes, got " + std::to_string(amplitudes.size()));
        double norm2 = 0.0;
        for (const cdouble& a : amplitudes) norm2 += std::norm(a);
        if (std::abs(norm2 - 1.0) > 1e-12)
            throw std::invalid_argument("PureState: norm deviates from 1 by " +
                                        detail::format_double(std::abs(norm2 - 1.0)));
    }

    // Normalizes an arbitrary vector and fixes the global phase so the first
    // nonzero amplitude is real-positive (reproducible serialization).
    static PureState from_vector(std::size_t n_, std::vector<cdouble> v) {
        double norm2 = 0.0;
        for (const cdouble& a : v) norm2 += std::norm(a);
        if (norm2 <= 0.0) throw std::invalid_argument("PureState: zero vector");
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& a : v) a *= inv;
        for (const cdouble& a : v) {
            if (std::abs(a) > 1e-12) {
                const cdouble phase = a / std::abs(a);
                for (auto& b : v) b /= phase;
                break;
            }
        }
        return PureState(n_, std::move(v));
    }
};

// ---------------------------------------------------------------------------
// Measurement sets.
// ---------------------------------------------------------------------------

// Two binary observables per party, each given as the projector onto its +1
// outcome (the -1 outcome is the implicit complement).
struct MeasurementSet {
    std::size_t n = 0;
    std::vector<std::array<Projector, 2>> settings;  // [party][setting]

    MeasurementSet(std::size_t n_, std::vector<std::array<Projector, 2>> settings_)
        : n(n_), settings(std::move(settings_)) {
        if (settings.size() != n)
            throw std::invalid_argument("MeasurementSet: expected " + std::to_string(n) +
                                        " parties, got " + std::to_string(settings.size()));
        for (const auto& pair : settings)
            for (const auto& p : pair) {
                if (p.matrix.rows != 2 || p.matrix.cols != 2)
                    throw std::invalid_argument("MeasurementSet: projectors must be 2x2");
                if (p.matrix.hermitian_defect() > 1e-12)
                    throw std::invalid_argument("MeasurementSet: projector not Hermitian");
                ComplexMatrix sq = p.matrix * p.matrix;
                double defect = 0.0;
                for (std::size_t k = 0; k < sq.entries.size(); ++k)
                    defect = std::max(defect, std::abs(sq.entries[k] - p.matrix.entries[k]));
                if (defect > 1e-12)
                    throw std::invalid_argument("MeasurementSet: projector not idempotent");
            }
    }

    // The canonical realization: setting 1 projects onto |0>, setting 2 onto
    // the tilted vector with overlap cosine x_l.
    static MeasurementSet jordan(const JordanParams& params) {
        std::vector<std::array<Projector, 2>> s;
        s.reserve(params.n);
        for (double x : params.xs) s.push_back({projector_z(), projector_tilted(x)});
        return MeasurementSet(params.n, std::move(s));
    }

    // sigma_z / sigma_x observables for every party (overlap cosine 1/sqrt2).
    static MeasurementSet zx(std::size_t n_) {
        return jordan(JordanParams::equal(n_, 1.0 / std::sqrt(2.0)));
    }
};

// ---------------------------------------------------------------------------
// State/operator evaluation helpers.
// ---------------------------------------------------------------------------

// Applies a 2x2 matrix to one qubit of an n-qubit amplitude vector.
inline std::vector<cdouble> apply_single_qubit(const std::vector<cdouble>& v, std::size_t n,
                                               std::size_t party, const ComplexMatrix& m) {
    if (party >= n) throw std::invalid_argument("apply_single_qubit: party index out of range");
    const std::size_t mask = std::size_t{1} << (n - 1 - party);
    std::vector<cdouble> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i & mask) continue;
        const cdouble a0 = v[i], a1 = v[i | mask];
        out[i] = m(0, 0) * a0 + m(0, 1) * a1;
        out[i | mask] = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return out;
}

// <state| M |state> for a Hermitian operator M of matching dimension.
inline double expectation_value(const PureState& state, const ComplexMatrix& m) {
    if (m.rows != state.amplitudes.size() || m.cols != state.amplitudes.size())
        throw std::invalid_argument("expectation_value: dimension mismatch");
    const std::vector<cdouble> mv = m * state.amplitudes;
    return vec_dot(state.amplitudes, mv).real();
}

// Single-party 2x2 reduced density matrix of an n-qubit pure state.
inline ComplexMatrix reduced_density(const PureState& state, std::size_t party) {
    if (party >= state.n) throw std::invalid_argument("reduced_density: party index out of range");
    const std::size_t mask = std::size_t{1} << (state.n - 1 - party);
    ComplexMatrix rho(2, 2);
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        if (i & mask) continue;
        const cdouble a0 = state.amplitudes[i], a1 = state.amplitudes[i | mask];
        rho(0, 0) += a0 * std::conj(a0);
        rho(0, 1) += a0 * std::conj(a1);
        rho(1, 0) += a1 * std::conj(a0);
        rho(1, 1) += a1 * std::conj(a1);
    }
    return rho;
}

// ---------------------------------------------------------------------------
// The inequality evaluated from outcome probabilities.
// ---------------------------------------------------------------------------

// The n+2 joint outcome probabilities the inequality is built from.  The
// inequality states lhs <= rhs_all_second + sum(rhs_single_flips); a positive
// value() is a quantum violation and equals the operator expectation value.
struct ViolationBreakdown {
    double lhs = 0.0;                    // P(all +1 | every party on setting 1)
    double rhs_all_second = 0.0;         // P(all +1 | every party on setting 2)
    std::vector<double> rhs_single_flips;  // P(party l on setting 2 gets -1, rest +1 on setting 1)

    double value() const {
        double v = lhs - rhs_all_second;
        for (double p : rhs_single_flips) v -= p;
        return v;
    }
};

// Evaluates each term of the inequality as a product-projector expectation
// value on `state`.  This is the probability-level route; it must agree with
// <state| B |state> from the dense operator.
inline ViolationBreakdown violation_breakdown(const PureState& state, const MeasurementSet& meas) {
    if (meas.n != state.n)
        throw std::invalid_argument("violation_breakdown: state has " + std::to_string(state.n) +
                                    " parties, measurement set has " + std::to_string(meas.n));
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const auto joint_probability = [&](const std::vector<const ComplexMatrix*>& ps) {
        std::vector<cdouble> v = state.amplitudes;
        for (std::size_t l = 0; l < state.n; ++l) v = apply_single_qubit(v, state.n, l, *ps[l]);
        return vec_dot(state.amplitudes, v).real();
    };

    ViolationBreakdown out;
    std::vector<const ComplexMatrix*> ps(state.n);
    for (std::size_t l = 0; l < state.n; ++l) ps[l] = &meas.settings[l][0].matrix;
    out.lhs = joint_probability(ps);
    for (std::size_t l = 0; l < state.n; ++l) ps[l] = &meas.settings[l][1].matrix;
    out.rhs_all_second = joint_probability(ps);
    out.rhs_single_flips.resize(state.n);
    for (std::size_t flip = 0; flip < state.n; ++flip) {
        const ComplexMatrix complement = id - meas.settings[flip][1].matrix;
        for (std::size_t l = 0; l < state.n; ++l)
            ps[l] = (l == flip) ? &complement : &meas.settings[l][0].matrix;
        out.rhs_single_flips[flip] = joint_probability(ps);
    }
    return out;
}

// lhs - rhs of the inequality for `state` under `meas`; positive = violation.
inline double violation_of(const PureState& state, const MeasurementSet& meas) {
    return violation_breakdown(state, meas).value();
}

// ---------------------------------------------------------------------------
// Named two-party state and its correlation structure.
// ---------------------------------------------------------------------------

// The two-party state reaching the maximal violation (sqrt2-1)/2 under z/x
// observables: (1/2) sqrt(1/(2+sqrt2)) [ (1+sqrt2)(|00> - |11>) + |01> + |10> ].
inline PureState psi2() {
    const double r2 = std::sqrt(2.0);
    const double k = 0.5 * std::sqrt(1.0 / (2.0 + r2));
    return PureState(2, {k * (1.0 + r2), k, k, -k * (1.0 + r2)});
}

// One row of the two-party correlation table: when Alice measures `bases[0]`
// and obtains outcome index `alice_outcome`, Bob (measuring `bases[1]`)
// obtains `bob_outcome` with conditional probability `probability`.
// Outcome index 0 means |0> in the z basis and |+x> in the x basis.
struct CorrelationRecord {
    std::string bases;  // "zz", "zx", "xz" or "xx"
    int alice_outcome = 0;
    int bob_outcome = 0;
    double probability = 0.0;
};

// The eight correspondences of the two-party state: same outcome index for
// zz, zx and xz; opposite for xx; all with probability (2+sqrt2)/4.
inline std::vector<CorrelationRecord> correlation_table_psi2() {
    const PureState state = psi2();
    const double r2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix zplus(2, 1), zminus(2, 1), xplus(2, 1), xminus(2, 1);
    zplus(0, 0) = 1.0;
    zminus(1, 0) = 1.0;
    xplus(0, 0) = r2;
    xplus(1, 0) = r2;
    xminus(0, 0) = r2;
    xminus(1, 0) = -r2;
    const auto basis_vector = [&](char basis, int outcome) -> const ComplexMatrix& {
        if (basis == 'z') return outcome == 0 ? zplus : zminus;
        return outcome == 0 ? xplus : xminus;
    };
    const auto joint = [&](char ab, int i, char bb, int j) {
        const ComplexMatrix& a = basis_vector(ab, i);
        const ComplexMatrix& b = basis_vector(bb, j);
        cdouble amp = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 2; ++s)
                amp += std::conj(a(r, 0) * b(s, 0)) * state.amplitudes[2 * r + s];
        return std::norm(amp);
    };

    std::vector<CorrelationRecord> table;
    for (const std::string& bases : {"zz", "zx", "xz", "xx"}) {
        for (int i = 0; i < 2; ++i) {
            const int j = (bases == "xx") ? 1 - i : i;
            const double pij = joint(bases[0], i, bases[1], j);
            const double pi = pij + joint(bases[0], i, bases[1], 1 - j);
            table.push_back({bases, i, j, pij / pi});
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Named three-party states.
// ---------------------------------------------------------------------------

// The equal-magnitude three-party state violating the inequality by 1/8 under
// z/x observables: amplitude +1/(2 sqrt2) on basis states with at most one
// excited qubit, -1/(2 sqrt2) on the rest.
inline PureState psi3_prime() {
    const double k = 1.0 / (2.0 * std::sqrt(2.0));
    std::vector<cdouble> amps(8);
    for (std::size_t i = 0; i < 8; ++i)
        amps[i] = (std::popcount(i) <= 1) ? k : -k;
    return PureState(3, std::move(amps));
}

// Eigenvalues (ascending) of the three-party operator under z/x observables:
// three zeros, a double eigenvalue -1/2, and the three roots of the cubic
// 8 l^3 + 16 l^2 + 5 l - 2, whose positive root 0.223 exceeds the 1/8
// reached by the equal-magnitude state above.
inline std::vector<double> b3_prime_spectrum() {
    return hermitian_eigenvalues(
        bell_operator(JordanParams::equal(3, 1.0 / std::sqrt(2.0))).matrix);
}

// The three-party state reaching the maximal violation sqrt5 - 2 at the
// optimal overlap cosine x* with x*^2 = (sqrt5-1)/2.  Amplitudes:
// c0 on |000>, c1 on each single-excitation state, -c2 on each
// double-excitation state, -c1 on |111>, with c0 = sqrt(4 - 8/sqrt5),
// c1 = sqrt(7/(2 sqrt5) - 3/2), c2 = sqrt(1 - 2/sqrt5) = c0/2.
inline PureState psi3() {
    const double r5 = std::sqrt(5.0);
    const double c0 = std::sqrt(4.0 - 8.0 / r5);
    const double c1 = std::sqrt(7.0 / (2.0 * r5) - 1.5);
    const double c2 = std::sqrt(1.0 - 2.0 / r5);
    std::vector<cdouble> amps(8);
    for (std::size_t i = 0; i < 8; ++i) {
        const int pop = std::popcount(i);
        if (pop == 0)
            amps[i] = c0;
        else if (pop == 1)
            amps[i] = c1;
        else if (pop == 2)
            amps[i] = -c2;
        else
            amps[i] = -c1;
    }
    return PureState(3, std::move(amps));
}

// ---------------------------------------------------------------------------
// Entanglement-structure check.
// ---------------------------------------------------------------------------

// Per-party reduced density matrices and their distance from the maximally
// mixed I/2.  A GHZ-type state has every distance 0; a product state has
// distance 1/2.
struct GhzReport {
    std::vector<ComplexMatrix> reduced;  // one 2x2 per party
    std::vector<double> distances;       // max-abs entry distance from I/2
    double max_distance = 0.0;
    double min_distance = 0.0;
};

inline GhzReport ghz_check(const PureState& state) {
    if (state.n != 3) throw std::invalid_argument("ghz_check: expected a 3-qubit state");
    GhzReport report;
    for (std::size_t party = 0; party < state.n; ++party) {
        ComplexMatrix rho = reduced_density(state, party);
        double dist = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 2; ++s) {
                const cdouble target = (r == s) ? cdouble(0.5, 0.0) : cdouble(0.0, 0.0);
                dist = std::max(dist, std::abs(rho(r, s) - target));
            }
        report.reduced.push_back(std::move(rho));
        report.distances.push_back(dist);
    }
    report.max_distance = *std::max_element(report.distances.begin(), report.distances.end());
    report.min_distance = *std::min_element(report.distances.begin(), report.distances.end());
    return report;
}

}  // namespace bellviol
