#include "blwork/diffeo.hpp"
#include "blwork/model.hpp"
#include "blwork/sequences.hpp"

#include <doctest.h>

#include <cmath>

using namespace blwork;

namespace {
const ModelRef k00{{0, 0}}, k11{{1, 1}};
}

TEST_SUITE("diffeo") {

TEST_CASE("shift constants of (0,0)")
{
    CHECK(std::abs(solve_shift({0, 0}, Variant::plain).value - std::log(std::log(2.0))) < 1e-12);
    CHECK(std::abs(solve_shift({0, 0}, Variant::half_shift).value - std::log(std::log(3.0))) < 1e-12);
    CHECK(solve_shift({0, 0}, Variant::plain).value == doctest::Approx(-0.366513).epsilon(1e-6));
    CHECK(solve_shift({0, 0}, Variant::half_shift).value == doctest::Approx(0.094047).epsilon(1e-5));
}

TEST_CASE("shift constants put the model value at 2")
{
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n)
            for (Variant v : {Variant::plain, Variant::half_shift}) {
                ShiftConstant s = solve_shift({m, n}, v);
                CHECK(s.residual < 1e-12);
                ScaledComplex g = eval_model({m, n}, s.value, v);
                CHECK(std::abs(g.log_modulus - std::log(2.0)) < 1e-12);
            }
}

TEST_CASE("half-shift constants approach log N + r0 monotonically")
{
    double r0 = lemma3_trans_r0();
    CHECK(std::abs(r0 + 1.27846454) < 1e-7);
    CHECK(std::abs(std::exp(r0) + r0 + 1.0) < 1e-12);
    double prev = INFINITY;
    for (int N : {9, 17, 33, 65}) {
        double d = std::abs(solve_shift({0, (N - 1) / 2}, Variant::half_shift).value - std::log(double(N)) - r0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("phi is the identity for equal models")
{
    DiffeoSpec s(k11, k11);
    CHECK(s.identity());
    for (double x = -20.0; x <= 20.0; x += 2.5) CHECK(s.phi(x) == x);
    CHECK(asymptotic_report(s).exact);
    CHECK(find_fixed_points(s, 0.0, 10.0).identity);
}

TEST_CASE("phi (0,0)->(1,1): linear tail at -inf with kappa 4 and c = -log 72")
{
    DiffeoSpec s(k00, k11);
    CHECK(s.kappa() == 4.0);
    CHECK(std::abs(s.c() + std::log(72.0)) < 1e-12);
    CHECK(std::abs(s.phi(-30.0) - (-120.0 - std::log(72.0))) < 1e-6);
}

TEST_CASE("phi (0,0)->(1,1): phi(x) - x is tiny at +20")
{
    DiffeoSpec s(k00, k11);
    CHECK(std::abs(s.phi(20.0) - 20.0) < std::exp(-10.0));
}

TEST_CASE("phi: conjugacy residual and monotonicity on [-40, 40]")
{
    for (auto [a, b] : {std::pair{k00, k11}, std::pair{ModelRef{{1, 0}}, ModelRef{{2, 3}}},
                        std::pair{ModelRef{{0, 2}}, ModelRef{{0, 2}, Variant::half_shift}}}) {
        DiffeoSpec s(a, b);
        double prev = -INFINITY;
        for (double x = -40.0; x <= 40.0; x += 0.25) {
            double p = s.phi(x);
            CHECK(s.residual(x, p) < 1e-11);
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("phi and phi' stay exact far to the right")
{
    // regressions: e^x overflow above 700, cancellation in phi' for large x
    DiffeoSpec s(k00, k11);
    CHECK(s.phi(750.0) == 750.0);
    CHECK(s.phi(1e4) == 1e4);
    CHECK(s.phi_prime(750.0) == 1.0);
    for (double x : {30.0, 60.0, 200.0, 650.0}) {
        double d = s.phi_prime(x);
        REQUIRE(std::isfinite(d));
        CHECK(std::abs(d - 1.0) < 1e-9);
    }
    for (double x : {-10.0, -1.0, 0.0, 1.5, 4.0}) CHECK(std::abs(s.phi_prime(x) - s.phi_prime_fd(x)) < 1e-7);
}

TEST_CASE("asymptotic report (0,0)->(1,1): fitted constants")
{
    AsymptoticReport r = asymptotic_report(DiffeoSpec(k00, k11), 30.0);
    CHECK(std::abs(r.kappa_hat - 4.0) < 1e-4);
    CHECK(std::abs(r.c_hat + std::log(72.0)) < 1e-4);
    CHECK(std::abs(r.dphi_minus - 4.0) < 1e-6);
    CHECK(std::abs(r.dphi_plus - 1.0) < 1e-6);
    CHECK(r.max_residual < 1e-11);
}

TEST_CASE("asymptotic report (0,0)->(1,1): decay slope band [-0.6, -0.4]")
{
    // The true decay is of order x e^{-x}, so the fitted slope is near -0.93.
    AsymptoticReport r = asymptotic_report(DiffeoSpec(k00, k11), 30.0);
    CHECK(r.decay_slope >= -0.6);
    CHECK(r.decay_slope <= -0.4);
}

TEST_CASE("asymptotic report: half-shift target gives c = -log 2")
{
    AsymptoticReport r = asymptotic_report(DiffeoSpec(k00, {{0, 0}, Variant::half_shift}), 30.0);
    CHECK(std::abs(r.kappa_hat - 1.0) < 1e-4);
    CHECK(std::abs(r.c_hat + std::log(2.0)) < 1e-4);
}

TEST_CASE("asymptotic report rejects short grids")
{
    CHECK_THROWS_AS(asymptotic_report(DiffeoSpec(k00, k11), 10.0), std::invalid_argument);
}

TEST_CASE("psi: identity for equal chain entries")
{
    Psi p = build_psi({k11, k11}, Side::right, 3);
    CHECK(p.identity());
    CHECK(p(7.25) == 7.25);
    CHECK_THROWS_AS(build_psi({k11}, Side::right), std::invalid_argument);
    CHECK_THROWS_AS(build_psi({k00, k11}, Side::right, 0), std::invalid_argument);
}

TEST_CASE("psi: normalization, monotonicity and bounded deviation on the right")
{
    Psi p = build_psi({k00, {{1, 0}}}, Side::right, 1);
    CHECK(std::abs(p(0.0)) < 1e-9);
    double prev = -INFINITY, sup = 0.0;
    for (double x = 0.0; x <= 40.0; x += 0.1) {
        double v = p(x);
        CHECK(v > prev);
        prev = v;
        sup = std::max(sup, std::abs(v - x));
    }
    CHECK(sup < 2.0);
    // phi(x) -> x, so psi(x) - x -> s_{k+1} - s_k
    double ds = solve_shift({1, 0}, Variant::plain).value - solve_shift({0, 0}, Variant::plain).value;
    CHECK(std::abs(p(40.0) - 40.0 - ds) < 1e-9);
}

TEST_CASE("psi: left side scaling and psi(0) = 0")
{
    Psi p = build_psi({{{0, 1}}, {{2, 1}}}, Side::left);
    CHECK(p.outer() == 3.0);
    CHECK(p.inner() == 5.0);
    CHECK(std::abs(p(0.0)) < 1e-9);
    for (double x = -30.0; x < 0.0; x += 1.0) CHECK(p.derivative(x) > 0.0);
}

TEST_CASE("fixed points: same m gives exactly one, near log N")
{
    for (auto [a, b] : {std::pair{ModelRef{{1, 0}}, ModelRef{{1, 1}}}, std::pair{k00, ModelRef{{0, 1}}}}) {
        DiffeoSpec s(a, b);
        FixedPointReport r = find_fixed_points(s, 0.0, 2.0 * std::log(double(a.pair.N())) + 10.0);
        REQUIRE(r.points.size() == 1);
        CHECK(r.residuals[0] < 1e-10);
        CHECK(std::abs(r.points[0] - r.logN) < 2.0);
    }
}

TEST_CASE("fixed points: larger m still has one in [0, 2 log N + 10]")
{
    DiffeoSpec s({{1, 1}}, {{2, 3}});
    FixedPointReport r = find_fixed_points(s, 0.0, 2.0 * std::log(4.0) + 10.0);
    REQUIRE(!r.points.empty());
    for (double res : r.residuals) CHECK(res < 1e-10);
}

} // TEST_SUITE
