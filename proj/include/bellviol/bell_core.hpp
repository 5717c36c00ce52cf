#pragma once

// Core operator constructions for the n-party, two-setting, two-outcome
// correlation inequality family: the full 2^n qubit Bell operator, the small
// (n+2)-dimensional block that carries its entire nonzero spectrum in a
// non-orthogonal product basis, and the characteristic polynomials that make
// the block tractable by hand.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellviol/linalg.hpp"

namespace bellviol {

// ---------------------------------------------------------------------------
// Parameters: one overlap cosine per party.
// ---------------------------------------------------------------------------

// Per-party overlap cosines x_l = cos(theta_l) between the two measurement
// directions of party l.  These are the variables every maximization in this
// library runs over; x_l = 0 means orthogonal settings, x_l = 1 identical.
struct JordanParams {
    std::size_t n = 0;
    std::vector<double> xs;

    JordanParams(std::size_t n_, std::vector<double> xs_) : n(n_), xs(std::move(xs_)) {
        if (n < 2)
            throw std::invalid_argument("JordanParams: need at least 2 parties, got n=" +
                                        std::to_string(n));
        if (xs.size() != n)
            throw std::invalid_argument("JordanParams: expected " + std::to_string(n) +
                                        " overlap cosines, got " + std::to_string(xs.size()));
        for (double x : xs)
            if (!(x >= 0.0 && x <= 1.0))
                throw std::invalid_argument("JordanParams: overlap cosine outside [0,1]: " +
                                            detail::format_double(x));
    }

    // All parties share the same overlap cosine x.
    static JordanParams equal(std::size_t n_, double x) {
        return JordanParams(n_, std::vector<double>(n_, x));
    }
};

// ---------------------------------------------------------------------------
// Single-party projectors.
// ---------------------------------------------------------------------------

// 2x2 Hermitian idempotent describing the +1 outcome of a binary observable;
// the -1 outcome is the implicit complement I - P.
struct Projector {
    ComplexMatrix matrix;
};

// Projector onto |0>: every party's first setting.
inline Projector projector_z() {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    return {std::move(m)};
}

// Rank-1 projector onto u+ = x|0> + sqrt(1-x^2)|1>, so <0|u+> = x: every
// party's second setting, tilted from the first by the overlap cosine x.
inline Projector projector_tilted(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("projector_tilted: overlap cosine outside [0,1]: " +
                                    detail::format_double(x));
    const double s = std::sqrt(1.0 - x * x);
    ComplexMatrix m(2, 2);
    m(0, 0) = x * x;
    m(0, 1) = x * s;
    m(1, 0) = x * s;
    m(1, 1) = s * s;
    return {std::move(m)};
}

// ---------------------------------------------------------------------------
// The full 2^n operator.
// ---------------------------------------------------------------------------

// The qubit realization of the inequality operator.  A Jordan-basis argument
// splits any realization into two-dimensional invariant subspaces per party,
// so one qubit per party already carries the extremal spectrum.
struct BellOperator {
    std::size_t n = 0;
    ComplexMatrix matrix;
    JordanParams params;
};

// B = (x) Q_{l,1}  -  (x) Q_{l,2}  -  sum_l [ (x)_{m<l} Q_{m,1}  (x)
// (I - Q_{l,2})  (x)  (x)_{m>l} Q_{m,1} ], with Q_{l,1} the |0> projector and
// Q_{l,2} the tilted projector at x_l.  Party 0 occupies the most significant
// qubit.  The result is real symmetric with trace -n.
inline BellOperator bell_operator(const JordanParams& params) {
    const std::size_t n = params.n;
    const ComplexMatrix id = ComplexMatrix::identity(2);
    std::vector<ComplexMatrix> first(n), second(n);
    for (std::size_t l = 0; l < n; ++l) {
        first[l] = projector_z().matrix;
        second[l] = projector_tilted(params.xs[l]).matrix;
    }
    const auto fold = [](const std::vector<ComplexMatrix>& factors) {
        ComplexMatrix out = ComplexMatrix::identity(1);
        for (const auto& f : factors) out = kron(out, f);
        return out;
    };
    ComplexMatrix b = fold(first) - fold(second);
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<ComplexMatrix> factors = first;
        factors[l] = id - second[l];
        b = b - fold(factors);
    }
    return {n, std::move(b), params};
}

// Matrix-free application of the same operator.  Every term above is a rank-1
// projector: the first onto |0...0>, the second onto the product of tilted
// vectors, and term l onto |0..0> with the orthogonal complement u- at slot l.
// One application therefore costs O(2^n) instead of O(4^n).
class BellApplier {
public:
    explicit BellApplier(const JordanParams& params)
        : dim_(std::size_t{1} << params.n) {
        const std::size_t n = params.n;
        tilted_.assign(1, 1.0);
        for (std::size_t l = 0; l < n; ++l) {
            const double x = params.xs[l];
            const double s = std::sqrt(1.0 - x * x);
            std::vector<double> next(tilted_.size() * 2);
            for (std::size_t i = 0; i < tilted_.size(); ++i) {
                next[2 * i] = tilted_[i] * x;
                next[2 * i + 1] = tilted_[i] * s;
            }
            tilted_ = std::move(next);
        }
        flips_.reserve(n);
        for (std::size_t l = 0; l < n; ++l) {
            const double x = params.xs[l];
            // u- = sqrt(1-x^2)|0> - x|1> on the qubit of party l (bit n-1-l)
            flips_.push_back({std::size_t{1} << (n - 1 - l), std::sqrt(1.0 - x * x), -x});
        }
    }

    std::size_t dimension() const { return dim_; }

    // out = B in (real arithmetic; the operator is real symmetric)
    void operator()(const double* in, double* out) const {
        double tdot = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) tdot += tilted_[i] * in[i];
        for (std::size_t i = 0; i < dim_; ++i) out[i] = -tdot * tilted_[i];
        out[0] += in[0];
        for (const Flip& f : flips_) {
            const double d = f.at_zero * in[0] + f.at_bit * in[f.index];
            out[0] -= d * f.at_zero;
            out[f.index] -= d * f.at_bit;
        }
    }

private:
    struct Flip {
        std::size_t index;    // basis state with exactly party l's bit set
        double at_zero;       // amplitude of the u- product vector at |0...0>
        double at_bit;        // amplitude at `index`
    };
    std::size_t dim_;
    std::vector<double> tilted_;  // product of tilted vectors, length 2^n
    std::vector<Flip> flips_;
};

// ---------------------------------------------------------------------------
// Reduced blocks in the non-orthogonal product basis.
// ---------------------------------------------------------------------------

// (n+2)-dimensional block carrying every nonzero eigenvalue of the full
// operator.  Basis order: [all parties on setting 1; the n single-flip
// states with exactly one party on setting 2, last party's flip first; all
// parties on setting 2].  The basis is non-orthogonal, so the block is not
// symmetric, but its eigenvalues are real.
inline ComplexMatrix reduced_matrix(const JordanParams& params) {
    const std::size_t n = params.n;
    const auto& xs = params.xs;
    const std::size_t d = n + 2;
    const auto flipped_party = [n](std::size_t i) { return n - 1 - i; };
    const auto product_except = [&](std::size_t skip) {
        double p = 1.0;
        for (std::size_t m = 0; m < n; ++m)
            if (m != skip) p *= xs[m];
        return p;
    };
    double product = 1.0;
    for (double x : xs) product *= x;

    ComplexMatrix r(d, d);
    r(0, 0) = 1.0 - static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) r(1 + i, 0) = xs[flipped_party(i)];
    r(d - 1, 0) = -product;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = flipped_party(j);
        r(0, 1 + j) = -(static_cast<double>(n) - 2.0) * xs[k];
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t l = flipped_party(i);
            if (l != k) r(1 + i, 1 + j) = xs[k] * xs[l];
        }
        r(d - 1, 1 + j) = -product_except(k);
    }
    r(0, d - 1) = product;
    r(d - 1, d - 1) = -1.0;
    return r;
}

// Two-party specialization: 4x4 block in basis (c11, c12, c21, c22), the
// coefficients on u1 v1, u1 v2, u2 v1, u2 v2.
inline ComplexMatrix reduced_matrix_n2(double x_a, double x_b) {
    return reduced_matrix(JordanParams(2, {x_a, x_b}));
}

// Three-party specialization: 5x5 block in basis (all setting 1; flips of
// parties c, b, a; all setting 2).
inline ComplexMatrix reduced_matrix_n3(double x_a, double x_b, double x_c) {
    return reduced_matrix(JordanParams(3, {x_a, x_b, x_c}));
}

// ---------------------------------------------------------------------------
// Characteristic polynomials.
// ---------------------------------------------------------------------------

// The three symmetric combinations of (x_a, x_b, x_c) that the three-party
// characteristic polynomial is built from.
struct SymmetricInvariants {
    double alpha = 0.0;  // (x_a x_b)^2 + (x_a x_c)^2 + (x_b x_c)^2
    double beta = 0.0;   // (x_a x_b x_c)^2
    double gamma = 0.0;  // x_a^2 + x_b^2 + x_c^2

    static SymmetricInvariants from(double x_a, double x_b, double x_c) {
        const double ab = x_a * x_b, ac = x_a * x_c, bc = x_b * x_c;
        SymmetricInvariants s;
        s.alpha = ab * ab + ac * ac + bc * bc;
        s.beta = (x_a * bc) * (x_a * bc);
        s.gamma = x_a * x_a + x_b * x_b + x_c * x_c;
        return s;
    }
};

// Characteristic polynomial of the two-party 4x4 block, ascending:
// lambda^2 (lambda+1)^2 - K with K = x_a^2 (1-x_a^2) x_b^2 (1-x_b^2).
inline RealPolynomial char_poly_n2(double x_a, double x_b) {
    const double k = x_a * x_a * (1.0 - x_a * x_a) * x_b * x_b * (1.0 - x_b * x_b);
    return RealPolynomial{{-k, 0.0, 1.0, 2.0, 1.0}};
}

// Characteristic polynomial of the three-party 5x5 block, ascending:
// lambda^5 + 3 lambda^4 + (2+gamma-alpha+beta) lambda^3 + (gamma-alpha+beta)
// lambda^2 + beta (2 gamma - alpha - 3) lambda + beta (alpha - 2 beta - 1).
inline RealPolynomial char_poly_n3(const JordanParams& params) {
    if (params.n != 3)
        throw std::invalid_argument("char_poly_n3: requires exactly 3 parties, got n=" +
                                    std::to_string(params.n));
    const auto s = SymmetricInvariants::from(params.xs[0], params.xs[1], params.xs[2]);
    return RealPolynomial{{s.beta * (s.alpha - 2.0 * s.beta - 1.0),
                           s.beta * (2.0 * s.gamma - s.alpha - 3.0),
                           s.gamma - s.alpha + s.beta,
                           2.0 + s.gamma - s.alpha + s.beta,
                           3.0,
                           1.0}};
}

// Cubic factor of the characteristic polynomial when all parties share the
// overlap cosine x; its largest real root is the maximal eigenvalue of the
// full operator.  Ascending coefficients:
// [ n x^{2n} - (n-1) x^{2n+2} - x^2,  (n-1) - n x^2 + x^{2n},
//   n - (n-1) x^2,  1 ].
inline RealPolynomial cubic_equal_angle(std::size_t n, double x) {
    if (n < 2)
        throw std::invalid_argument("cubic_equal_angle: need at least 2 parties, got n=" +
                                    std::to_string(n));
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("cubic_equal_angle: overlap cosine outside [0,1]: " +
                                    detail::format_double(x));
    const double nn = static_cast<double>(n);
    const double x2 = x * x;
    const double x2n = std::pow(x2, nn);
    return RealPolynomial{{nn * x2n - (nn - 1.0) * x2n * x2 - x2,
                           (nn - 1.0) - nn * x2 + x2n,
                           nn - (nn - 1.0) * x2,
                           1.0}};
}

}  // namespace bellviol
