#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bellviol/optimize.hpp"

using namespace bellviol;

namespace {

double residual_norm(const ViolationResult& r) {
    const ComplexMatrix b = bell_operator(r.xs).matrix;
    const std::vector<cdouble> bv = b * r.eigvec;
    double sum = 0.0;
    for (std::size_t i = 0; i < bv.size(); ++i)
        sum += std::norm(bv[i] - r.lambda_max * r.eigvec[i]);
    return std::sqrt(sum);
}

}  // namespace

TEST_CASE("deterministic PRNG reproduces its stream") {
    Xoshiro256StarStar a(42), b(42), c(7);
    bool all_equal = true, any_differs = false;
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t va = a.next();
        all_equal = all_equal && va == b.next();
        any_differs = any_differs || va != c.next();
    }
    CHECK(all_equal);
    CHECK(any_differs);

    Xoshiro256StarStar d(1);
    for (int i = 0; i < 100; ++i) {
        const double u = d.uniform(0.05, 0.95);
        CHECK(u >= 0.05);
        CHECK(u <= 0.95);
    }
}

TEST_CASE("equal-angle maximization reproduces the published optima") {
    const ViolationResult two = maximize_equal_angle(2);
    CHECK(std::abs(two.xs.xs[0] - 1.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(two.lambda_max - 0.5 * (std::sqrt(2.0) - 1.0)) < 1e-12);
    CHECK(two.method == Method::equal_angle_cubic);
    CHECK(two.converged);

    const ViolationResult three = maximize_equal_angle(3);
    CHECK(std::abs(three.xs.xs[0] * three.xs.xs[0] - 0.5 * (std::sqrt(5.0) - 1.0)) < 1e-9);
    CHECK(std::abs(three.lambda_max - (std::sqrt(5.0) - 2.0)) < 1e-9);
    CHECK(std::abs(three.xs.xs[0] - 0.786151) < 1e-5);

    const ViolationResult six = maximize_equal_angle(6);
    CHECK(std::abs(six.xs.xs[0] - 0.8805085117829257) < 1e-9);
    CHECK(std::abs(six.lambda_max - 0.263186656707002) < 1e-9);

    CHECK_THROWS_AS(maximize_equal_angle(1), std::invalid_argument);
    CHECK_THROWS_AS(maximize_equal_angle(17), std::invalid_argument);
}

TEST_CASE("equal-angle results certify their eigenpair") {
    for (std::size_t n : {std::size_t{2}, std::size_t{4}, std::size_t{7}}) {
        const ViolationResult r = maximize_equal_angle(n);
        CHECK(r.lambda_max >= 0.0);
        double norm2 = 0.0;
        for (const auto& a : r.eigvec) norm2 += std::norm(a);
        CHECK(std::abs(norm2 - 1.0) < 1e-10);
        CHECK(residual_norm(r) < 1e-8);

        const PureState state(n, r.eigvec);
        CHECK(std::abs(expectation_value(state, bell_operator(r.xs).matrix) - r.lambda_max) <
              1e-9);
    }
}

TEST_CASE("matrix-free path handles party counts beyond dense reach") {
    const ViolationResult r = maximize_equal_angle(12);
    CHECK(std::abs(r.xs.xs[0] - 0.936278) < 5e-6);
    CHECK(std::abs(r.lambda_max - 0.276509) < 5e-6);
    REQUIRE(r.eigvec.size() == std::size_t{1} << 12);

    // residual through the matrix-free applier
    const BellApplier apply(r.xs);
    std::vector<double> v(r.eigvec.size()), bv(r.eigvec.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(std::abs(r.eigvec[i].imag()) < 1e-12);
        v[i] = r.eigvec[i].real();
    }
    apply(v.data(), bv.data());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) sum += (bv[i] - r.lambda_max * v[i]) *
                                                     (bv[i] - r.lambda_max * v[i]);
    CHECK(std::sqrt(sum) < 1e-8);
}

TEST_CASE("violation curve matches the published table and grows with n") {
    const auto rows = violation_curve(3, 7);
    REQUIRE(rows.size() == 5);
    const double want[5][2] = {{0.786151, 0.236068},
                               {0.830913, 0.249757},
                               {0.860012, 0.257836},
                               {0.880509, 0.263187},
                               {0.895745, 0.266998}};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(rows[i].n == i + 3);
        CHECK(std::abs(rows[i].x - want[i][0]) < 1e-5);
        CHECK(std::abs(rows[i].lambda_max - want[i][1]) < 1e-5);
    }

    const auto single = violation_curve(2, 2);
    REQUIRE(single.size() == 1);
    CHECK(std::abs(single[0].x - 0.707107) < 1e-5);
    CHECK(std::abs(single[0].lambda_max - 0.207107) < 1e-5);

    const auto full = violation_curve(2, 7);
    for (std::size_t i = 1; i < full.size(); ++i)
        CHECK(full[i].lambda_max > full[i - 1].lambda_max);

    CHECK_THROWS_AS(violation_curve(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(violation_curve(4, 3), std::invalid_argument);
}

TEST_CASE("full search agrees with the equal-angle route") {
    const ViolationResult two = maximize_full(2, 8, 1);
    CHECK(std::abs(two.lambda_max - 0.207107) < 1e-6);
    CHECK(std::abs(two.xs.xs[0] - 0.7071) < 1e-4);
    CHECK(std::abs(two.xs.xs[1] - 0.7071) < 1e-4);
    CHECK(two.method == Method::full_operator);

    const ViolationResult three = maximize_full(3, 16, 1);
    for (double x : three.xs.xs) CHECK(std::abs(x - 0.786151) < 1e-4);

    for (std::size_t n = 2; n <= 7; ++n) {
        const double full = maximize_full(n, 8, 3).lambda_max;
        const double cubic = maximize_equal_angle(n).lambda_max;
        CHECK(std::abs(full - cubic) < 1e-6);
    }

    CHECK_THROWS_AS(maximize_full(1, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(maximize_full(8, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(maximize_full(3, 0, 0), std::invalid_argument);
}

TEST_CASE("full search is bit-reproducible for a fixed seed") {
    const ViolationResult a = maximize_full(3, 6, 123);
    const ViolationResult b = maximize_full(3, 6, 123);
    CHECK(a.lambda_max == b.lambda_max);
    CHECK(a.converged == b.converged);
    REQUIRE(a.xs.xs.size() == b.xs.xs.size());
    for (std::size_t i = 0; i < a.xs.xs.size(); ++i) CHECK(a.xs.xs[i] == b.xs.xs[i]);
    REQUIRE(a.eigvec.size() == b.eigvec.size());
    for (std::size_t i = 0; i < a.eigvec.size(); ++i) CHECK(a.eigvec[i] == b.eigvec[i]);
}

TEST_CASE("reported optima are local maxima") {
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
        const ViolationResult r = maximize_full(n, 8, 5);
        CHECK(residual_norm(r) < 1e-8);
        for (std::size_t l = 0; l < n; ++l) {
            for (double step : {-1e-3, 1e-3}) {
                JordanParams nudged = r.xs;
                nudged.xs[l] = std::min(1.0, std::max(0.0, nudged.xs[l] + step));
                const double lam = hermitian_eigenvalues(bell_operator(nudged).matrix).back();
                CHECK(lam <= r.lambda_max + 1e-6);
            }
        }
    }
}

TEST_CASE("stationarity report at the symmetric optimum") {
    const ViolationResult opt = maximize_equal_angle(3);
    const StationarityReport report = stationarity_report(opt.xs, opt.lambda_max);
    REQUIRE(report.gradient.size() == 3);
    CHECK(report.max_abs <= 1e-5);
    REQUIRE(report.identity_residuals.size() == 3);
    for (double r : report.identity_residuals) CHECK(std::abs(r) < 1e-6);
    REQUIRE(report.pairwise_residuals.size() == 3);
    for (double r : report.pairwise_residuals) CHECK(std::abs(r) < 1e-12);
    CHECK(report.printed_form_consistent);
}

TEST_CASE("stationarity report flags an asymmetric point") {
    const JordanParams params(3, {0.7, 0.8, 0.786});
    const double lambda = hermitian_eigenvalues(bell_operator(params).matrix).back();
    CHECK(std::abs(lambda - 0.2320055128213002) < 1e-10);

    const StationarityReport report = stationarity_report(params, lambda);
    CHECK(report.max_abs > 1e-3);
    CHECK(std::abs(report.gradient[0] - 0.09096543403669) < 1e-6);

    // the implicit-function identity holds at every interior point
    for (double r : report.identity_residuals) CHECK(std::abs(r) < 1e-6);

    // displayed pair conditions are far from zero away from stationarity
    double worst = 0.0;
    for (double r : report.pairwise_residuals) worst = std::max(worst, std::abs(r));
    CHECK(worst > 1e-4);
    CHECK(report.printed_form_consistent);

    CHECK_THROWS_AS(stationarity_report(params, 5.0), std::invalid_argument);
}

TEST_CASE("equal-coefficient pair condition forces lambda = -1") {
    Xoshiro256StarStar rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const double xa = rng.uniform(0.1, 0.9), xb = rng.uniform(0.1, 0.9);
        const AppendixSystem sys = AppendixSystem::from(JordanParams(3, {xa, xb, 1.0}));
        CHECK(std::abs(sys.f0 - sys.f1) < 1e-12);
        CHECK(std::abs(sys.lambda_from_pair(0, 1) + 1.0) < 1e-9);
    }
}
