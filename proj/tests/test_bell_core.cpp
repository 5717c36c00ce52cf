#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bellviol/bell_core.hpp"

using namespace bellviol;

namespace {

struct TestRng {
    std::uint64_t s;
    explicit TestRng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
};

std::vector<double> random_params(TestRng& rng, std::size_t n) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.uniform(0.05, 0.95);
    return xs;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    REQUIRE(a.rows == b.rows);
    REQUIRE(a.cols == b.cols);
    double d = 0.0;
    for (std::size_t k = 0; k < a.entries.size(); ++k)
        d = std::max(d, std::abs(a.entries[k] - b.entries[k]));
    return d;
}

// eigenvalues of the full operator and of the reduced block, both filtered to
// magnitude > cut and sorted ascending
std::pair<std::vector<double>, std::vector<double>> nonzero_spectra(const JordanParams& p,
                                                                    double cut) {
    std::vector<double> full, reduced;
    for (double v : hermitian_eigenvalues(bell_operator(p).matrix))
        if (std::abs(v) > cut) full.push_back(v);
    for (const cdouble& v : real_eigenvalues(reduced_matrix(p))) {
        REQUIRE(std::abs(v.imag()) < 1e-9);
        if (std::abs(v.real()) > cut) reduced.push_back(v.real());
    }
    std::sort(full.begin(), full.end());
    std::sort(reduced.begin(), reduced.end());
    return {full, reduced};
}

}  // namespace

TEST_CASE("JordanParams validates its inputs") {
    CHECK_THROWS_AS(JordanParams(1, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(JordanParams(3, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(JordanParams(2, {0.5, 1.2}), std::invalid_argument);
    CHECK_THROWS_AS(JordanParams(2, {-0.1, 0.5}), std::invalid_argument);
    const JordanParams p = JordanParams::equal(4, 0.5);
    CHECK(p.n == 4);
    CHECK(p.xs == std::vector<double>(4, 0.5));
}

TEST_CASE("projectors: values, idempotency, complements") {
    const ComplexMatrix pz = projector_z().matrix;
    CHECK(std::abs(pz(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(pz(1, 1)) == 0.0);
    CHECK(max_abs_diff(pz * pz, pz) < 1e-15);

    CHECK(max_abs_diff(projector_tilted(1.0).matrix, pz) < 1e-15);
    const ComplexMatrix flip = projector_tilted(0.0).matrix;
    CHECK(std::abs(flip(1, 1) - 1.0) < 1e-15);
    CHECK(std::abs(flip(0, 0)) < 1e-15);

    const ComplexMatrix px = projector_tilted(1.0 / std::sqrt(2.0)).matrix;
    for (const auto& z : px.entries) CHECK(std::abs(z - cdouble(0.5, 0.0)) < 1e-14);

    for (double x : {0.0, 0.3, 0.77, 1.0}) {
        const ComplexMatrix p = projector_tilted(x).matrix;
        CHECK(max_abs_diff(p * p, p) < 1e-12);
        CHECK(std::abs(p.trace() - cdouble(1.0, 0.0)) < 1e-12);
        CHECK(std::abs(p(0, 0) - cdouble(x * x, 0.0)) < 1e-14);
    }
    CHECK_THROWS_AS(projector_tilted(1.5), std::invalid_argument);
    CHECK_THROWS_AS(projector_tilted(-0.2), std::invalid_argument);
}

TEST_CASE("bell_operator: hermiticity, trace, known extremal values") {
    TestRng rng(7);
    for (std::size_t n = 2; n <= 5; ++n) {
        const JordanParams p(n, random_params(rng, n));
        const BellOperator b = bell_operator(p);
        CHECK(b.matrix.rows == (std::size_t{1} << n));
        CHECK(b.matrix.hermitian_defect() < 1e-12);
        CHECK(std::abs(b.matrix.trace() - cdouble(-static_cast<double>(n), 0.0)) < 1e-12);
    }

    // identical settings per party: no violation possible
    const auto flat = hermitian_eigenvalues(bell_operator(JordanParams::equal(2, 1.0)).matrix);
    CHECK(std::abs(flat.back()) < 1e-12);

    const auto two = hermitian_eigenvalues(
        bell_operator(JordanParams::equal(2, 1.0 / std::sqrt(2.0))).matrix);
    CHECK(std::abs(two.back() - 0.5 * (std::sqrt(2.0) - 1.0)) < 1e-12);

    const auto three = hermitian_eigenvalues(bell_operator(JordanParams::equal(3, 0.786151)).matrix);
    CHECK(std::abs(three.back() - (std::sqrt(5.0) - 2.0)) < 1e-9);
}

TEST_CASE("BellApplier agrees with the dense operator") {
    TestRng rng(17);
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
        const JordanParams p(n, random_params(rng, n));
        const BellOperator dense = bell_operator(p);
        const BellApplier apply(p);
        REQUIRE(apply.dimension() == dense.matrix.rows);
        const std::size_t dim = apply.dimension();
        std::vector<double> in(dim), out(dim);
        for (int rep = 0; rep < 5; ++rep) {
            for (auto& v : in) v = rng.uniform(-1.0, 1.0);
            apply(in.data(), out.data());
            for (std::size_t i = 0; i < dim; ++i) {
                cdouble want = 0.0;
                for (std::size_t j = 0; j < dim; ++j) want += dense.matrix(i, j) * in[j];
                CHECK(std::abs(want - cdouble(out[i], 0.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("reduced_matrix_n2 reproduces the displayed 4x4 block") {
    const double xa = 0.3, xb = 0.8;
    ComplexMatrix want(4, 4);
    const double ab = xa * xb;
    // rows in basis (c11, c12, c21, c22)
    want(0, 0) = -1.0; want(0, 3) = ab;
    want(1, 0) = xb;   want(1, 2) = ab;
    want(2, 0) = xa;   want(2, 1) = ab;
    want(3, 0) = -ab;  want(3, 1) = -xa; want(3, 2) = -xb; want(3, 3) = -1.0;
    CHECK(max_abs_diff(reduced_matrix_n2(xa, xb), want) < 1e-15);

    // orthogonal settings: spectrum {-1, -1, 0, 0}
    auto ev = real_eigenvalues(reduced_matrix_n2(0.0, 0.0));
    REQUIRE(ev.size() == 4);
    CHECK(std::abs(ev[0] - cdouble(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(ev[1] - cdouble(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(std::abs(ev[3]) < 1e-12);
}

TEST_CASE("reduced_matrix_n3 reproduces the displayed 5x5 block") {
    const double xa = 0.3, xb = 0.8, xc = 0.55;
    ComplexMatrix want(5, 5);
    want(0, 0) = -2.0; want(0, 1) = -xc; want(0, 2) = -xb; want(0, 3) = -xa;
    want(0, 4) = xa * xb * xc;
    want(1, 0) = xc; want(1, 2) = xb * xc; want(1, 3) = xa * xc;
    want(2, 0) = xb; want(2, 1) = xb * xc; want(2, 3) = xa * xb;
    want(3, 0) = xa; want(3, 1) = xa * xc; want(3, 2) = xa * xb;
    want(4, 0) = -xa * xb * xc; want(4, 1) = -xa * xb; want(4, 2) = -xa * xc;
    want(4, 3) = -xb * xc; want(4, 4) = -1.0;
    CHECK(max_abs_diff(reduced_matrix_n3(xa, xb, xc), want) < 1e-15);

    auto ev = real_eigenvalues(reduced_matrix_n3(0.0, 0.0, 0.0));
    REQUIRE(ev.size() == 5);
    CHECK(std::abs(ev.front() - cdouble(-2.0, 0.0)) < 1e-12);
    CHECK(std::abs(ev[1] - cdouble(-1.0, 0.0)) < 1e-12);
    for (std::size_t i = 2; i < 5; ++i) CHECK(std::abs(ev[i]) < 1e-12);
}

TEST_CASE("reduced block and full operator share their nonzero spectrum") {
    TestRng rng(27);
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            const JordanParams p(n, random_params(rng, n));
            const auto [full, reduced] = nonzero_spectra(p, 1e-9);
            REQUIRE(full.size() == reduced.size());
            for (std::size_t i = 0; i < full.size(); ++i)
                CHECK(std::abs(full[i] - reduced[i]) < 1e-8);
        }
    }
}

TEST_CASE("char_poly_n3 matches the determinant of the 5x5 block") {
    // degenerate corner: lambda^5 + 3 lambda^4 + 2 lambda^3
    const RealPolynomial zero = char_poly_n3(JordanParams(3, {0.0, 0.0, 0.0}));
    REQUIRE(zero.coefficients.size() == 6);
    const std::vector<double> want{0.0, 0.0, 0.0, 2.0, 3.0, 1.0};
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(zero.coefficients[i] - want[i]) < 1e-15);

    TestRng rng(37);
    for (int rep = 0; rep < 50; ++rep) {
        const double xa = rng.uniform(), xb = rng.uniform(), xc = rng.uniform();
        const RealPolynomial p = char_poly_n3(JordanParams(3, {xa, xb, xc}));
        for (const cdouble& ev : real_eigenvalues(reduced_matrix_n3(xa, xb, xc)))
            CHECK(std::abs(p(ev)) < 1e-8);
        // symmetric under any permutation of the three overlaps
        const RealPolynomial q = char_poly_n3(JordanParams(3, {xc, xa, xb}));
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::abs(p.coefficients[i] - q.coefficients[i]) < 1e-12);
    }

    CHECK_THROWS_AS(char_poly_n3(JordanParams(2, {0.5, 0.5})), std::invalid_argument);
}

TEST_CASE("the lambda coefficient must carry the beta factor") {
    // dropping beta from the lambda coefficient breaks the determinant oracle
    const double xa = 0.3, xb = 0.8, xc = 0.55;
    const auto s = SymmetricInvariants::from(xa, xb, xc);
    RealPolynomial mutated = char_poly_n3(JordanParams(3, {xa, xb, xc}));
    mutated.coefficients[1] = 2.0 * s.gamma - s.alpha - 3.0;  // bare, no beta
    double worst = 0.0;
    for (const cdouble& ev : real_eigenvalues(reduced_matrix_n3(xa, xb, xc)))
        worst = std::max(worst, std::abs(mutated(ev)));
    CHECK(worst > 1e-4);
}

TEST_CASE("char_poly_n2 matches the 4x4 block") {
    const double r2 = 1.0 / std::sqrt(2.0);
    const RealPolynomial q = char_poly_n2(r2, r2);
    REQUIRE(q.coefficients.size() == 5);
    CHECK(std::abs(q.coefficients[0] + 1.0 / 16.0) < 1e-15);
    CHECK(std::abs(max_real_root(q) - 0.5 * (std::sqrt(2.0) - 1.0)) < 1e-12);

    TestRng rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        const double xa = rng.uniform(), xb = rng.uniform();
        const RealPolynomial p = char_poly_n2(xa, xb);
        for (const cdouble& ev : real_eigenvalues(reduced_matrix_n2(xa, xb)))
            CHECK(std::abs(p(ev)) < 1e-10);
    }
}

TEST_CASE("cubic_equal_angle hits the published extremal roots") {
    const double x3 = std::sqrt(0.5 * (std::sqrt(5.0) - 1.0));
    CHECK(std::abs(max_real_root(cubic_equal_angle(3, x3)) - (std::sqrt(5.0) - 2.0)) < 1e-12);

    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(max_real_root(cubic_equal_angle(2, r2)) - max_real_root(char_poly_n2(r2, r2))) <
          1e-12);

    CHECK(std::abs(max_real_root(cubic_equal_angle(7, 0.895745)) - 0.26699783278410777) < 1e-10);
    CHECK(std::abs(max_real_root(cubic_equal_angle(7, 0.895745)) - 0.266998) < 1e-6);

    CHECK_THROWS_AS(cubic_equal_angle(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(cubic_equal_angle(3, 1.5), std::invalid_argument);
}

TEST_CASE("equal-angle cubic tracks the full operator on a grid") {
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int g = 0; g <= 49; ++g) {
            const double x = static_cast<double>(g) / 49.0;
            const double from_cubic = max_real_root(cubic_equal_angle(n, x));
            const double from_dense =
                hermitian_eigenvalues(bell_operator(JordanParams::equal(n, x)).matrix).back();
            CHECK(std::abs(from_cubic - from_dense) < 1e-8);
        }
    }
}

TEST_CASE("no violation at the classical boundary settings") {
    for (std::size_t n = 2; n <= 7; ++n) {
        for (double x : {0.0, 1.0}) {
            const auto ev = hermitian_eigenvalues(bell_operator(JordanParams::equal(n, x)).matrix);
            CHECK(std::abs(ev.back()) < 1e-10);
        }
    }
}
