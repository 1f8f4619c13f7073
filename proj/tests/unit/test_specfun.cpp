#include "blwork/analysis.hpp"
#include "blwork/coefficients.hpp"
#include "blwork/model.hpp"
#include "blwork/operators.hpp"
#include "blwork/scaled_complex.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace blwork;

TEST_SUITE("specfun") {

TEST_CASE("coefficients of (0,0) are trivial")
{
    CoefficientTable t = build_coefficients({0, 0});
    REQUIRE(t.A.size() == 1);
    REQUIRE(t.B.size() == 1);
    CHECK(t.A[0] == 1);
    CHECK(t.B[0] == 1);
    CHECK(t.identity_holds());
}

TEST_CASE("coefficients of (1,1) are the Pade coefficients")
{
    CoefficientTable t = build_coefficients({1, 1});
    REQUIRE(t.A.size() == 2);
    REQUIRE(t.B.size() == 3);
    CHECK(t.A[0] == 1);
    CHECK(t.A[1] == mpq_class(1, 3));
    CHECK(t.B[0] == 1);
    // frozen from the derivative identity; see the ledger on the printed -1/2
    CHECK(t.B[1] == mpq_class(-2, 3));
    CHECK(t.B[2] == mpq_class(1, 6));
    CHECK(t.leading_product() == mpq_class(1, 18));
    CHECK(CoefficientTable::identity_value({1, 1}) == mpq_class(1, 18));
}

TEST_CASE("leading product identity holds exactly up to (20,20)")
{
    for (int m = 0; m <= 20; ++m)
        for (int n = 0; n <= 20; ++n) CHECK_MESSAGE(build_coefficients({m, n}).identity_holds(), "pair ", m, ",", n);
}

TEST_CASE("coefficient signs: A positive, B alternating, unit constant terms")
{
    for (int m = 0; m <= 8; ++m)
        for (int n = 0; n <= 8; ++n) {
            CoefficientTable t = build_coefficients({m, n});
            CHECK(t.A[0] == 1);
            CHECK(t.B[0] == 1);
            for (const auto& a : t.A) CHECK(sgn(a) > 0);
            for (size_t j = 0; j < t.B.size(); ++j) CHECK(sgn(t.B[j]) == (j % 2 == 0 ? 1 : -1));
        }
}

TEST_CASE("P e^w - Q vanishes to order N at w = 0")
{
    // the remainder series starts at w^N with a nonzero coefficient
    for (auto p : {PairIndex{1, 1}, PairIndex{2, 3}, PairIndex{0, 4}}) {
        auto c = remainder_series(build_coefficients(p), 3);
        REQUIRE(c.size() == 3);
        CHECK(c[0] != 0);
    }
}

TEST_CASE("pair cap is enforced")
{
    CHECK_THROWS_AS(build_coefficients({pair_cap_default() + 1, 0}), CapError);
    CHECK_THROWS_AS(build_coefficients({5, 0}, 4), CapError);
    CHECK_THROWS_AS(check_pair({-1, 0}), std::exception);
    CHECK_NOTHROW(build_coefficients({4, 0}, 4));
}

TEST_CASE("eval: exp(e^0) = e")
{
    ScaledComplex v = eval_model({0, 0}, 0.0);
    CHECK(v.is_finite());
    CHECK(std::abs(v.to_complex() - cplx(std::exp(1.0), 0)) < 1e-15);
}

TEST_CASE("eval: pole of g_{1,1} at log 3 + i pi is tagged")
{
    CHECK(eval_model({1, 1}, cplx(std::log(3.0), kPi)).is_pole());
    CHECK_THROWS_AS(eval_model_derivative({1, 1}, cplx(std::log(3.0), kPi)), PoleError);
}

TEST_CASE("eval: g -> 1 from above as x -> -inf")
{
    auto g = Model::get({0, 0});
    // log(g(-20) - 1) = log(expm1(e^-20))
    CHECK(std::abs(g->log_gm1_real(-20.0) - std::log(std::expm1(std::exp(-20.0)))) < 1e-13);
    double v = eval_model({0, 0}, -20.0).to_complex().real();
    CHECK(v > 1.0);
    CHECK(std::abs(v - 1.0) < std::exp(-19.0));
}

TEST_CASE("eval: huge values stay in log space")
{
    ScaledComplex v = eval_model({0, 0}, 10.0);
    CHECK(std::abs(v.log_modulus - std::exp(10.0)) < 1e-9);
    CHECK_THROWS_AS(v.to_complex(), std::overflow_error);
}

TEST_CASE("real axis: g > 1, increasing, log(g - 1) finite")
{
    // regression: log(g - 1) used to return NaN for moderate positive x
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) {
            auto g = Model::get({m, n});
            double prev = -INFINITY;
            for (double x = -50.0; x <= 50.0; x += 0.5) {
                double l = g->log_gm1_real(x);
                REQUIRE(std::isfinite(l));
                CHECK(l > prev);
                prev = l;
                CHECK(g->log_g_real(x) > 0.0);
            }
        }
}

TEST_CASE("derivative: closed form at (0,0), z = 0 and (1,1), z = 1")
{
    CHECK(std::abs(eval_model_derivative({0, 0}, 0.0).to_complex() - std::exp(1.0)) < 1e-15);
    const double e = std::exp(1.0);
    double want = std::exp(e + 4.0) / (18.0 * (1.0 + e / 3.0) * (1.0 + e / 3.0));
    cplx got = eval_model_derivative({1, 1}, 1.0).to_complex();
    CHECK(std::abs(got - want) / want < 1e-14);
    // central difference oracle, step 1e-6
    const double h = 1e-6;
    double fd = (eval_model({1, 1}, 1.0 + h).to_complex().real() - eval_model({1, 1}, 1.0 - h).to_complex().real()) / (2 * h);
    CHECK(std::abs(fd - want) / want < 1e-8);
}

TEST_CASE("derivative: real and positive on the real axis, never zero")
{
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n)
            for (double x = -30.0; x <= 30.0; x += 1.5) {
                ScaledComplex d = eval_model_derivative({m, n}, x);
                CHECK(d.is_finite());
                CHECK(std::abs(wrap_phase(d.phase)) < 1e-12);
            }
}

TEST_CASE("apply_B: constant c gives -1/c^2")
{
    const cplx c(2.0, 1.0);
    FunctionHandle E = FunctionHandle::entire_function([c](cplx) { return c; });
    cplx b = apply_B(E, cplx(0.3, 0.2), 0.5);
    CHECK(std::abs(b + 1.0 / (c * c)) < 1e-12);
}

TEST_CASE("apply_B: zero of E inside the disk is a contract violation")
{
    FunctionHandle E = FunctionHandle::entire_function([](cplx z) { return z; });
    CHECK_THROWS_AS(apply_B(E, 0.1, 0.5), ContractViolation);
}

TEST_CASE("apply_B: product of a normalized pair gives 4A")
{
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::expq(1), 0.0, {-1, 4, -2, 2});
    FunctionHandle E = pair.E_handle();
    // the disk must avoid zeros of E, which depend on the base point
    ZeroSet zs = locate_zeros(E, {1, 3, -1, 1});
    double gap = 0.5;
    for (cplx z : zs.points) gap = std::min(gap, 0.5 * std::abs(z - 2.0));
    REQUIRE(gap > 0.01);
    cplx b = apply_B(E, 2.0, gap);
    cplx want = 4.0 * (std::exp(2.0) - 1.0 / 16.0);
    CHECK(std::abs(b - want) / std::abs(want) < 1e-8);
}

TEST_CASE("apply_schwarzian: Moebius and exponential")
{
    FunctionHandle id = FunctionHandle::entire_function([](cplx z) { return z; });
    CHECK(std::abs(apply_schwarzian(id, cplx(0.4, -0.3), 0.5)) < 1e-12);
    FunctionHandle mob = FunctionHandle::entire_function([](cplx z) { return (2.0 * z + 1.0) / (z + 3.0); });
    CHECK(std::abs(apply_schwarzian(mob, 0.0, 0.5)) < 1e-10);
    FunctionHandle ex = FunctionHandle::entire_function([](cplx z) { return std::exp(z); });
    CHECK(std::abs(apply_schwarzian(ex, cplx(0.7, 1.1), 0.5) + 0.5) < 1e-12);
}

TEST_CASE("apply_schwarzian: critical point inside the disk is a contract violation")
{
    FunctionHandle sq = FunctionHandle::entire_function([](cplx z) { return z * z; });
    CHECK_THROWS_AS(apply_schwarzian(sq, 0.1, 0.5), ContractViolation);
}

TEST_CASE("Schwarzian factorization S(F) = B(F/F')/2 for F = g_{0,1}")
{
    auto g = Model::get({0, 1});
    FunctionHandle F;
    F.entire = true;
    F.eval = [g](cplx z) { return g->eval(z); };
    FunctionHandle E;
    E.entire = true;
    E.eval = [g](cplx z) { return g->eval(z) / g->derivative(z); };
    for (cplx z : {cplx(0.5, 0.5), cplx(-1.0, 2.0), cplx(1.2, -0.4)}) {
        cplx S = apply_schwarzian(F, z, 0.1);
        cplx B = apply_B(E, z, 0.1);
        CHECK(std::abs(S - 0.5 * B) / std::max(1.0, std::abs(S)) < 1e-8);
    }
}

TEST_CASE("lemma3_residual at (0,0), y = 1")
{
    const double e = std::exp(1.0);
    double want = std::log(e - 1.0) - 1.0 + std::log(2.0);
    CHECK(std::abs(lemma3_residual({0, 0}, 1.0) - want) < 1e-13);
    CHECK(std::abs(want - 0.2345) < 1e-3);
}

TEST_CASE("lemma3_residual stays bounded for m = 0 pairs")
{
    for (int n = 1; n <= 16; n *= 2) {
        PairIndex p{0, n};
        for (double y = 0.25; y <= 4.0 * p.N(); y *= 1.5) CHECK(std::abs(lemma3_residual(p, y)) < 1.0);
    }
}

TEST_CASE("ScaledComplex: products add log moduli and wrap phases")
{
    ScaledComplex a = ScaledComplex::from_log({800.0, 3.0});
    ScaledComplex b = ScaledComplex::from_log({-100.0, 2.0});
    ScaledComplex p = a * b;
    CHECK(p.log_modulus == doctest::Approx(700.0).epsilon(1e-15));
    CHECK(p.phase == doctest::Approx(5.0 - kTwoPi).epsilon(1e-15));
    CHECK(p.phase > -kPi);
    CHECK(p.phase <= kPi);
    ScaledComplex q = a.pow(2.0);
    CHECK(q.log_modulus == doctest::Approx(1600.0));
    CHECK(std::abs(q.phase - wrap_phase(6.0)) < 1e-15);
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
    CHECK((ScaledComplex::zero() * a).is_zero());
    CHECK((ScaledComplex::pole() * a).is_pole());
    CHECK(ScaledComplex::zero().inv().is_pole());
}

TEST_CASE("ScaledComplex: sums resolve cancellation in double precision")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        cplx s = (ScaledComplex::from_complex(x) + ScaledComplex::from_complex(y)).to_complex();
        CHECK(std::abs(s - (x + y)) < 1e-13 * (std::abs(x) + std::abs(y)));
    }
}

} // TEST_SUITE
