#pragma once

// Maximization of the largest operator eigenvalue over the overlap cosines:
// the fast equal-angle route through the cubic, the full multistart simplex
// search over all n overlaps, the violation-versus-parties curve, and the
// numerical audit of the analytic claim that the optimum is symmetric.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellviol/bell_core.hpp"
#include "bellviol/linalg.hpp"
#include "bellviol/states.hpp"

namespace bellviol {

// ---------------------------------------------------------------------------
// Deterministic PRNG for reproducible multistart seeding.
// ---------------------------------------------------------------------------

// xoshiro256** seeded through splitmix64; fixed algorithm so identical seeds
// give identical optimization runs on every platform.
class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

// ---------------------------------------------------------------------------
// Results.
// ---------------------------------------------------------------------------

enum class Method { equal_angle_cubic, full_operator };

inline const char* method_name(Method m) {
    return m == Method::equal_angle_cubic ? "equal-angle-cubic" : "full-operator";
}

// A certified maximum: the overlaps, the largest eigenvalue there, and the
// eigenvector of the full 2^n operator that realizes it (unit norm, first
// nonzero amplitude real-positive).
struct ViolationResult {
    std::size_t n = 0;
    JordanParams xs;
    double lambda_max = 0.0;
    std::vector<cdouble> eigvec;
    Method method = Method::equal_angle_cubic;
    bool converged = false;
};

// One point of the violation-versus-parties curve.
struct CurvePoint {
    std::size_t n = 0;
    double x = 0.0;
    double lambda_max = 0.0;
};

namespace detail {

// Largest eigenvalue of the full operator, evaluated through the equivalent
// (n+2)-dimensional block: the block carries every nonzero eigenvalue, and
// the full operator always has the eigenvalue 0 in its kernel directions, so
// lambda_max = max(0, largest real block eigenvalue).  Falls back to the
// dense 2^n solver if the small nonsymmetric solve misbehaves.
inline double lambda_max_of(const JordanParams& params) {
    try {
        const auto evs = real_eigenvalues(reduced_matrix(params));
        double best = 0.0;
        for (const cdouble& v : evs) {
            if (std::abs(v.imag()) > 1e-6) throw std::runtime_error("complex block eigenvalue");
            best = std::max(best, v.real());
        }
        return best;
    } catch (const std::runtime_error&) {
        const auto evs = hermitian_eigenvalues(bell_operator(params).matrix);
        return std::max(0.0, evs.back());
    }
}

// Unit-norm top eigenvector of the full operator with the canonical phase.
inline std::vector<cdouble> top_eigenvector(const JordanParams& params, double& lambda_out) {
    const std::size_t dim = std::size_t{1} << params.n;
    if (params.n <= 10) {
        const auto eig = hermitian_eigen(bell_operator(params).matrix);
        lambda_out = eig.eigenvalues.back();
        std::vector<cdouble> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = eig.eigenvectors(i, dim - 1);
        return PureState::from_vector(params.n, std::move(v)).amplitudes;
    }
    const BellApplier apply(params);
    std::vector<double> start(dim);
    for (std::size_t i = 0; i < dim; ++i)
        start[i] = 1.0 + 0.01 * static_cast<double>(i % 7);  // break symmetries
    const auto result = lanczos_largest(
        dim, [&apply](const double* in, double* out) { apply(in, out); }, start);
    if (!result.converged)
        throw std::runtime_error("top_eigenvector: iterative eigensolver did not converge");
    lambda_out = result.value;
    std::vector<cdouble> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = result.vector[i];
    return PureState::from_vector(params.n, std::move(v)).amplitudes;
}

// Equal-angle characteristic cubic F(x, lambda) and its x-derivatives, used
// by the Newton polish of the grid+golden-section optimum.
struct EqualAngleCubic {
    double nn;
    explicit EqualAngleCubic(std::size_t n) : nn(static_cast<double>(n)) {}

    double value(double x, double l) const {
        const double x2 = x * x;
        const double x2n = std::pow(x2, nn);
        const double p2 = nn - (nn - 1.0) * x2;
        const double p1 = (nn - 1.0) - nn * x2 + x2n;
        const double p0 = nn * x2n - (nn - 1.0) * x2n * x2 - x2;
        return ((l + p2) * l + p1) * l + p0;
    }
    double dlambda(double x, double l) const {
        const double x2 = x * x;
        const double x2n = std::pow(x2, nn);
        const double p2 = nn - (nn - 1.0) * x2;
        const double p1 = (nn - 1.0) - nn * x2 + x2n;
        return (3.0 * l + 2.0 * p2) * l + p1;
    }
    double dx(double x, double l) const {
        const double x2nm1 = std::pow(x, 2.0 * nn - 1.0);
        const double d2 = -2.0 * (nn - 1.0) * x;
        const double d1 = -2.0 * nn * x + 2.0 * nn * x2nm1;
        const double d0 = 2.0 * nn * nn * x2nm1 -
                          (nn - 1.0) * (2.0 * nn + 2.0) * x2nm1 * x * x - 2.0 * x;
        return (d2 * l + d1) * l + d0;
    }
    double dx_dlambda(double x, double l) const {
        const double x2nm1 = std::pow(x, 2.0 * nn - 1.0);
        return 2.0 * (-2.0 * (nn - 1.0) * x) * l + (-2.0 * nn * x + 2.0 * nn * x2nm1);
    }
    double dx_dx(double x, double l) const {
        const double x2nm2 = std::pow(x, 2.0 * nn - 2.0);
        const double s2 = -2.0 * (nn - 1.0);
        const double s1 = -2.0 * nn + 2.0 * nn * (2.0 * nn - 1.0) * x2nm2;
        const double s0 = 2.0 * nn * nn * (2.0 * nn - 1.0) * x2nm2 -
                          (nn - 1.0) * (2.0 * nn + 2.0) * (2.0 * nn + 1.0) * x2nm2 * x * x - 2.0;
        return (s2 * l + s1) * l + s0;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Equal-angle maximization.
// ---------------------------------------------------------------------------

// Maximizes the largest real root of the equal-angle cubic over x in [0,1]:
// 1000-point grid seed, golden-section refinement to 1e-12 in x, then a 2x2
// Newton polish on (F = 0, dF/dx = 0) to pin the stationary point to full
// precision.  The eigenvector comes from the full operator at the optimum
// (dense solve for n <= 10, matrix-free iteration beyond).
inline ViolationResult maximize_equal_angle(std::size_t n) {
    if (n < 2 || n > 16)
        throw std::invalid_argument("maximize_equal_angle: supported for 2 <= n <= 16");
    const auto objective = [n](double x) { return max_real_root(cubic_equal_angle(n, x)); };

    double best_x = 0.0, best_f = -1.0;
    constexpr int grid = 1000;
    for (int i = 0; i < grid; ++i) {
        const double x = static_cast<double>(i) / (grid - 1);
        const double f = objective(x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }

    double lo = std::max(0.0, best_x - 1.0 / (grid - 1));
    double hi = std::min(1.0, best_x + 1.0 / (grid - 1));
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double m1 = hi - inv_phi * (hi - lo), m2 = lo + inv_phi * (hi - lo);
    double f1 = objective(m1), f2 = objective(m2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = objective(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = objective(m1);
        }
    }
    double x_star = 0.5 * (lo + hi);
    double lambda_star = objective(x_star);

    // Newton on (F, dF/dx) = 0 sharpens the golden-section result to the
    // limits of double precision; keep the polished point only while it
    // improves the joint residual and stays inside the domain.
    const detail::EqualAngleCubic cubic(n);
    const auto joint_residual = [&cubic](double x, double l) {
        return std::abs(cubic.value(x, l)) + std::abs(cubic.dx(x, l));
    };
    double px = x_star, pl = lambda_star;
    double best_px = px, best_pl = pl, best_resid = joint_residual(px, pl);
    for (int it = 0; it < 50; ++it) {
        const double r0 = cubic.value(px, pl), r1 = cubic.dx(px, pl);
        const double j00 = cubic.dx(px, pl), j01 = cubic.dlambda(px, pl);
        const double j10 = cubic.dx_dx(px, pl), j11 = cubic.dx_dlambda(px, pl);
        const double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-300) break;
        px += (-r0 * j11 + r1 * j01) / det;
        pl += (-j00 * r1 + j10 * r0) / det;
        if (!(px > 0.0 && px < 1.0 && pl > 0.0)) break;
        const double resid = joint_residual(px, pl);
        if (resid < best_resid) {
            best_resid = resid;
            best_px = px;
            best_pl = pl;
        }
        if (resid < 1e-15 || resid > 1e3 * best_resid) break;
    }
    x_star = best_px;
    lambda_star = best_pl;

    const JordanParams params = JordanParams::equal(n, x_star);
    double lambda_from_operator = 0.0;
    std::vector<cdouble> eigvec = detail::top_eigenvector(params, lambda_from_operator);
    return {n, params, lambda_star, std::move(eigvec), Method::equal_angle_cubic, true};
}

// ---------------------------------------------------------------------------
// Full multistart search.
// ---------------------------------------------------------------------------

// Derivative-free Nelder-Mead maximization of lambda_max over xs in [0,1]^n,
// restarted `restarts` times from PRNG-seeded simplices.  Deterministic for
// fixed (n, restarts, seed); ties across restarts keep the earliest restart.
// Convergence per restart: simplex diameter <= 1e-9 or 2000 iterations.  The
// returned eigenpair is recomputed from the dense operator at the winner.
inline ViolationResult maximize_full(std::size_t n, std::size_t restarts = 32,
                                     std::uint64_t seed = 0) {
    if (n < 2 || n > 7)
        throw std::invalid_argument("maximize_full: dense search supported for 2 <= n <= 7");
    if (restarts < 1) throw std::invalid_argument("maximize_full: need at least one restart");

    const auto clamp_point = [](std::vector<double>& p) {
        for (auto& v : p) v = std::min(1.0, std::max(0.0, v));
    };
    const auto objective = [n, &clamp_point](std::vector<double> p) {
        clamp_point(p);
        return detail::lambda_max_of(JordanParams(n, std::move(p)));
    };

    Xoshiro256StarStar rng(seed);
    std::vector<double> best_point;
    double best_value = -1.0;
    bool best_converged = false;

    for (std::size_t restart = 0; restart < restarts; ++restart) {
        // simplex: seed vertex uniform in [0.05, 0.95]^n plus n axis steps
        std::vector<std::vector<double>> vertex(n + 1);
        vertex[0].resize(n);
        for (auto& v : vertex[0]) v = rng.uniform(0.05, 0.95);
        for (std::size_t i = 0; i < n; ++i) {
            vertex[i + 1] = vertex[0];
            vertex[i + 1][i] += (vertex[0][i] <= 0.9) ? 0.1 : -0.1;
        }
        std::vector<double> value(n + 1);
        for (std::size_t i = 0; i <= n; ++i) value[i] = -objective(vertex[i]);

        bool converged = false;
        for (int iter = 0; iter < 2000; ++iter) {
            // order ascending in value (best first); stable for determinism
            std::vector<std::size_t> order(n + 1);
            for (std::size_t i = 0; i <= n; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&value](std::size_t a, std::size_t b) { return value[a] < value[b]; });
            std::vector<std::vector<double>> sv(n + 1);
            std::vector<double> sf(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                sv[i] = vertex[order[i]];
                sf[i] = value[order[i]];
            }
            vertex = std::move(sv);
            value = std::move(sf);

            double diameter = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t d = 0; d < n; ++d)
                    diameter = std::max(diameter, std::abs(vertex[i][d] - vertex[0][d]));
            if (diameter <= 1e-9) {
                converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += vertex[i][d];
            for (auto& c : centroid) c /= static_cast<double>(n);

            const auto blend = [&](double t) {
                std::vector<double> p(n);
                for (std::size_t d = 0; d < n; ++d)
                    p[d] = centroid[d] + t * (centroid[d] - vertex[n][d]);
                clamp_point(p);
                return p;
            };

            const std::vector<double> reflected = blend(1.0);
            const double fr = -objective(reflected);
            if (fr < value[0]) {
                const std::vector<double> expanded = blend(2.0);
                const double fe = -objective(expanded);
                if (fe < fr) {
                    vertex[n] = expanded;
                    value[n] = fe;
                } else {
                    vertex[n] = reflected;
                    value[n] = fr;
                }
            } else if (fr < value[n - 1]) {
                vertex[n] = reflected;
                value[n] = fr;
            } else if (fr < value[n]) {
                const std::vector<double> outside = blend(0.5);
                const double fc = -objective(outside);
                if (fc <= fr) {
                    vertex[n] = outside;
                    value[n] = fc;
                } else {
                    for (std::size_t i = 1; i <= n; ++i) {  // shrink
                        for (std::size_t d = 0; d < n; ++d)
                            vertex[i][d] = vertex[0][d] + 0.5 * (vertex[i][d] - vertex[0][d]);
                        value[i] = -objective(vertex[i]);
                    }
                }
            } else {
                const std::vector<double> inside = blend(-0.5);
                const double fc = -objective(inside);
                if (fc < value[n]) {
                    vertex[n] = inside;
                    value[n] = fc;
                } else {
                    for (std::size_t i = 1; i <= n; ++i) {  // shrink
                        for (std::size_t d = 0; d < n; ++d)
                            vertex[i][d] = vertex[0][d] + 0.5 * (vertex[i][d] - vertex[0][d]);
                        value[i] = -objective(vertex[i]);
                    }
                }
            }
        }

        std::size_t top = 0;
        for (std::size_t i = 1; i <= n; ++i)
            if (value[i] < value[top]) top = i;
        std::vector<double> candidate = vertex[top];
        clamp_point(candidate);
        const double candidate_value = -value[top];
        if (candidate_value > best_value) {  // strict: ties keep earliest restart
            best_value = candidate_value;
            best_point = candidate;
            best_converged = converged;
        }
    }

    const JordanParams params(n, best_point);
    double lambda_dense = 0.0;
    std::vector<cdouble> eigvec = detail::top_eigenvector(params, lambda_dense);
    return {n, params, std::max(0.0, lambda_dense), std::move(eigvec), Method::full_operator,
            best_converged};
}

// ---------------------------------------------------------------------------
// Violation curve.
// ---------------------------------------------------------------------------

// One equal-angle maximization per party count; over the published range the
// maximal violation grows strictly with n.
inline std::vector<CurvePoint> violation_curve(std::size_t n_min, std::size_t n_max) {
    if (n_min < 2 || n_min > n_max)
        throw std::invalid_argument("violation_curve: need 2 <= n_min <= n_max");
    std::vector<CurvePoint> curve;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        const ViolationResult r = maximize_equal_angle(n);
        curve.push_back({n, r.xs.xs[0], r.lambda_max});
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Stationarity audit of the symmetric-optimum claim.
// ---------------------------------------------------------------------------

// The three-party characteristic polynomial as F(lambda; x) together with
// the analytic partial derivatives of its coefficient functions
// f0 = beta(alpha - 2 beta - 1), f1 = beta(2 gamma - alpha - 3),
// f2 = gamma - alpha + beta with respect to each overlap.
struct AppendixSystem {
    std::array<double, 3> xs{};
    double f0 = 0.0, f1 = 0.0, f2 = 0.0;
    std::array<double, 3> f0_partials{}, f1_partials{}, f2_partials{};

    static AppendixSystem from(const JordanParams& params) {
        if (params.n != 3)
            throw std::invalid_argument("AppendixSystem: defined for exactly 3 parties");
        AppendixSystem s;
        for (std::size_t i = 0; i < 3; ++i) s.xs[i] = params.xs[i];
        const auto inv = SymmetricInvariants::from(s.xs[0], s.xs[1], s.xs[2]);
        s.f0 = inv.beta * (inv.alpha - 2.0 * inv.beta - 1.0);
        s.f1 = inv.beta * (2.0 * inv.gamma - inv.alpha - 3.0);
        s.f2 = inv.gamma - inv.alpha + inv.beta;
        for (std::size_t p = 0; p < 3; ++p) {
            const double xp = s.xs[p], xq = s.xs[(p + 1) % 3], xr = s.xs[(p + 2) % 3];
            const double q2 = xq * xq, r2 = xr * xr;
            s.f2_partials[p] = 2.0 * xp * (1.0 - q2) * (1.0 - r2);
            s.f1_partials[p] =
                2.0 * xp * (q2 * r2 * (2.0 * inv.gamma - inv.alpha - 3.0) +
                            inv.beta * (2.0 - q2 - r2));
            s.f0_partials[p] =
                2.0 * xp * (q2 * r2 * (inv.alpha - 4.0 * inv.beta - 1.0) +
                            inv.beta * (q2 + r2));
        }
        return s;
    }

    // (dF/dx_l) at fixed lambda: df2 (l^3 + l^2) + df1 l + df0.
    double constraint(double lambda, std::size_t l) const {
        const double l2 = lambda * lambda;
        return f2_partials[l] * (l2 * lambda + l2) + f1_partials[l] * lambda + f0_partials[l];
    }

    // Coupling term of the rearranged pair (p,q) condition, spectator r:
    // x_p^2 x_q^2 beta (1 - x_r^2).
    double pair_coupling(std::size_t p, std::size_t q) const {
        const std::size_t r = 3 - p - q;
        const double beta = (xs[0] * xs[1] * xs[2]) * (xs[0] * xs[1] * xs[2]);
        return xs[p] * xs[p] * xs[q] * xs[q] * beta * (1.0 - xs[r] * xs[r]);
    }

    // The rearranged condition exactly as displayed:
    // (x_p^2 - x_q^2) [ (f1 + g) lambda + (f0 + g) ] with g the coupling.
    double printed_residual(double lambda, std::size_t p, std::size_t q) const {
        const double g = pair_coupling(p, q);
        return (xs[p] * xs[p] - xs[q] * xs[q]) * ((f1 + g) * lambda + (f0 + g));
    }

    // The same condition before rearrangement, straight from eliminating the
    // lambda^3 and lambda^2 terms of the two per-party constraints.
    double intermediate_residual(double lambda, std::size_t p, std::size_t q) const {
        const double lhs =
            xs[q] * (xs[p] * xs[p] - 1.0) * (f1_partials[p] * lambda + f0_partials[p]);
        const double rhs =
            xs[p] * (xs[q] * xs[q] - 1.0) * (f1_partials[q] * lambda + f0_partials[q]);
        return lhs - rhs;
    }

    // Root of the linear pair condition (f1+g, f0+g bracket); equals -1
    // whenever f0 = f1 and the bracket is nonzero.
    double lambda_from_pair(std::size_t p, std::size_t q) const {
        const double g = pair_coupling(p, q);
        if (std::abs(f1 + g) < 1e-300)
            throw std::runtime_error("lambda_from_pair: degenerate linear condition");
        return -(f0 + g) / (f1 + g);
    }
};

// Numerical stationarity evidence at a candidate optimum: finite-difference
// gradient of lambda_max, and for n=3 the implicit-function identity and the
// displayed pairwise conditions.
struct StationarityReport {
    std::vector<double> gradient;            // central differences, step 1e-5
    std::vector<double> identity_residuals;  // dF/dlambda * grad_l + (dF/dx_l)_lambda
    std::vector<double> pairwise_residuals;  // displayed rearranged conditions
    double max_abs = 0.0;                    // max |gradient|
    bool printed_form_consistent = true;     // displayed form tracks the derivation
};

inline StationarityReport stationarity_report(const JordanParams& params, double lambda) {
    const auto spectrum = hermitian_eigenvalues(bell_operator(params).matrix);
    double nearest = std::numeric_limits<double>::infinity();
    for (double v : spectrum) nearest = std::min(nearest, std::abs(v - lambda));
    if (nearest > 1e-6)
        throw std::invalid_argument("stationarity_report: lambda is " +
                                    detail::format_double(nearest) +
                                    " away from the nearest eigenvalue");

    StationarityReport report;
    const double h = 1e-5;
    report.gradient.resize(params.n);
    for (std::size_t l = 0; l < params.n; ++l) {
        JordanParams plus = params, minus = params;
        plus.xs[l] += h;
        minus.xs[l] -= h;
        const double up = hermitian_eigenvalues(bell_operator(plus).matrix).back();
        const double down = hermitian_eigenvalues(bell_operator(minus).matrix).back();
        report.gradient[l] = (up - down) / (2.0 * h);
        report.max_abs = std::max(report.max_abs, std::abs(report.gradient[l]));
    }

    if (params.n == 3) {
        const AppendixSystem sys = AppendixSystem::from(params);
        const RealPolynomial f = char_poly_n3(params);
        const double df_dlambda = f.derivative()(lambda);
        report.identity_residuals.resize(3);
        for (std::size_t l = 0; l < 3; ++l)
            report.identity_residuals[l] =
                df_dlambda * report.gradient[l] + sys.constraint(lambda, l);

        const std::array<std::pair<std::size_t, std::size_t>, 3> pairs{
            {{0, 1}, {0, 2}, {1, 2}}};
        report.pairwise_residuals.resize(3);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto [p, q] = pairs[k];
            const double printed = sys.printed_residual(lambda, p, q);
            const double derived = sys.intermediate_residual(lambda, p, q);
            report.pairwise_residuals[k] = printed;
            // displayed form should equal (x_p x_q / 2) * derived identically
            const double expected = 0.5 * sys.xs[p] * sys.xs[q] * derived;
            const double scale = std::max({1.0, std::abs(printed), std::abs(expected)});
            if (std::abs(printed - expected) > 1e-9 * scale)
                report.printed_form_consistent = false;
        }
    }
    return report;
}

}  // namespace bellviol
