#include "blwork/analysis.hpp"
#include "blwork/surgery.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace blwork;

namespace {

// zeros of g_{1,1}: w = 2 +- i sqrt 2, i.e. log 6 / 2 +- i atan(sqrt 2 / 2)
const double kZeroRe = 0.5 * std::log(6.0);
const double kZeroIm = std::atan(std::sqrt(2.0) / 2.0);

FunctionHandle numerator_handle(const PairIndex& p)
{
    auto g = Model::get(p);
    FunctionHandle f;
    f.entire = true;
    f.eval = [g](cplx z) {
        PolyLog l = g->log_P(z);
        return l.exact_zero ? ScaledComplex::zero() : ScaledComplex::from_log(l.log_value);
    };
    return f;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("count: exp(e^z) has no zeros or poles")
{
    CountResult c = count_zeros_poles(model_handle({0, 0}), {-5, 5, 0, kTwoPi});
    CHECK(c.Z == 0);
    CHECK(c.P == 0);
    CHECK(c.defect < 1e-6);
}

TEST_CASE("count: g_{1,1} has two zeros and one pole per period")
{
    CountResult c = count_zeros_poles(model_handle({1, 1}), {-5, 5, 0, kTwoPi});
    CHECK(c.Z == 2);
    CHECK(c.P == 1);
    CHECK(c.defect < 1e-6);
    CHECK(c.retries == 0);
}

TEST_CASE("count: periodicity over K strips")
{
    for (int K = 1; K <= 8; ++K) {
        CountResult c = count_zeros_poles(model_handle({1, 1}), {-5, 5, 0, kTwoPi * K});
        CHECK(c.Z == 2 * K);
        CHECK(c.P == K);
    }
}

TEST_CASE("count: larger pairs match the polynomial degrees")
{
    for (auto p : {PairIndex{2, 1}, PairIndex{3, 2}, PairIndex{0, 3}}) {
        CountResult c = count_zeros_poles(model_handle(p), {-8, 8, -kPi + 0.1, kPi + 0.1});
        CHECK(c.Z == p.L());
        CHECK(c.P == p.m);
    }
}

TEST_CASE("count: a pole on the boundary is nudged or refused")
{
    const Rect through{-5, 5, 0, kPi};   // top edge passes through log 3 + i pi
    CountOptions strict;
    strict.allow_nudge = false;
    CHECK_THROWS_AS(count_zeros_poles(model_handle({1, 1}), through, strict), BoundaryProximityError);
    CountResult c = count_zeros_poles(model_handle({1, 1}), through);
    CHECK(c.retries >= 1);
    CHECK(c.P == 1);
    CHECK(c.Z == 1);
}

TEST_CASE("locate: exp(e^z) has an empty zero set")
{
    ZeroSet z = locate_zeros(model_handle({0, 0}), {-3, 3, 0, kTwoPi});
    CHECK(z.points.empty());
}

TEST_CASE("locate: zeros of g_{1,1} from the exact quadratic")
{
    ZeroSet z = locate_zeros(model_handle({1, 1}), {-3, 3, 0, kTwoPi});
    REQUIRE(z.points.size() == 2);
    std::vector<cplx> want{{kZeroRe, kZeroIm}, {kZeroRe, kTwoPi - kZeroIm}};
    for (cplx w : want) {
        double d = 1e300;
        for (cplx p : z.points) d = std::min(d, std::abs(p - w));
        CHECK(d < 1e-10);
    }
    for (double r : z.residual) CHECK(r < 1e-9);
    CHECK(kZeroIm == doctest::Approx(0.6154797087).epsilon(1e-10));
}

TEST_CASE("locate: numerator P_2(e^z) of (1,1) has exactly the two quadratic roots")
{
    ZeroSet z = locate_zeros(numerator_handle({1, 1}), {-3, 3, 0, kTwoPi});
    REQUIRE(z.points.size() == 2);
    for (cplx p : z.points) {
        CHECK(std::abs(p.real() - kZeroRe) < 1e-10);
        double im = std::min(std::abs(p.imag() - kZeroIm), std::abs(p.imag() - (kTwoPi - kZeroIm)));
        CHECK(im < 1e-10);
    }
}

TEST_CASE("locate: poles of g_{1,1} and g_{2,0}")
{
    ZeroSet p = locate_poles(model_handle({1, 1}), {-3, 3, 0, kTwoPi});
    REQUIRE(p.points.size() == 1);
    CHECK(std::abs(p.points[0] - cplx(std::log(3.0), kPi)) < 1e-10);
    // Q(w) = 1 + w + w^2/2 has roots -1 +- i
    ZeroSet q = locate_poles(model_handle({2, 0}), {-3, 3, -kPi + 0.1, kPi + 0.1});
    REQUIRE(q.points.size() == 2);
    for (cplx z : q.points) CHECK(std::abs(z - cplx(0.5 * std::log(2.0), z.imag() > 0 ? 0.75 * kPi : -0.75 * kPi)) < 1e-10);
}

TEST_CASE("ode: A = 0 gives f1 = 1, f2 = z - base")
{
    const cplx base(0.5, 0.25);
    const Rect region{-2, 2, -2, 2};
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::poly({0.0}), base, region);
    for (cplx z : {cplx(1.0, 1.0), cplx(-1.5, 0.3)}) {
        PairState s = pair.state(z);
        CHECK(std::abs(s.f1 - 1.0) < 1e-14);
        CHECK(std::abs(s.f2 - (z - base)) < 1e-14);
    }
    auto zs = banklaine_check(pair, region);
    REQUIRE(zs.size() == 1);
    CHECK(std::abs(zs[0].z - base) < 1e-14);
    CHECK(zs[0].residual == doctest::Approx(0.0));
    CHECK(zs[0].sign == 1);
}

TEST_CASE("ode: A = 1 gives E = sin(2(z - base))/2 with alternating signs")
{
    const Rect region{-4, 4, -1, 1};
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::poly({1.0}), 0.0, region);
    for (cplx z : {cplx(1.0, 0.5), cplx(-3.0, -0.7)}) CHECK(std::abs(pair.E(z) - 0.5 * std::sin(2.0 * z)) < 1e-13);
    auto zs = banklaine_check(pair, region);
    REQUIRE(zs.size() == 5);
    for (size_t i = 0; i < zs.size(); ++i) {
        CHECK(std::abs(zs[i].z - cplx(0.5 * kPi * (double(i) - 2.0), 0.0)) < 1e-12);
        CHECK(zs[i].residual < 1e-12);
        if (i > 0) CHECK(zs[i].sign == -zs[i - 1].sign);
    }
}

TEST_CASE("ode: q = 1 against the Bessel-type closed form")
{
    // f'' + (e^z - 1/16) f = 0 is solved by e^{-z/4} (a sin t + b cos t), t = 2 e^{z/2}
    const Rect region{-2, 3, -3, 3};
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::expq(1), 0.0, region);
    auto basis = [](cplx z, bool sine) {
        cplx t = 2.0 * std::exp(0.5 * z), e = std::exp(-0.25 * z);
        cplx f = e * (sine ? std::sin(t) : std::cos(t));
        // d/dz: -f/4 + e * (cos t or -sin t) * t/2
        cplx d = -0.25 * f + e * (sine ? std::cos(t) : -std::sin(t)) * 0.5 * t;
        return std::pair{f, d};
    };
    auto [s0, sd0] = basis(0.0, true);
    auto [c0, cd0] = basis(0.0, false);
    const cplx det = s0 * cd0 - c0 * sd0;
    // coefficients with (f1, f1') = (1, 0), (f2, f2') = (0, 1) at the base
    const cplx a1 = cd0 / det, b1 = -sd0 / det, a2 = -c0 / det, b2 = s0 / det;
    for (cplx z : {cplx(2.5, 1.0), cplx(-1.5, -2.5), cplx(1.0, 2.9)}) {
        auto [s, sd] = basis(z, true);
        auto [c, cd] = basis(z, false);
        PairState st = pair.state(z);
        cplx f1 = a1 * s + b1 * c, f2 = a2 * s + b2 * c;
        CHECK(std::abs(st.f1 - f1) < 1e-11 * std::max(1.0, std::abs(f1)));
        CHECK(std::abs(st.f2 - f2) < 1e-11 * std::max(1.0, std::abs(f2)));
        CHECK(std::abs(st.d1 - (a1 * sd + b1 * cd)) < 1e-11 * std::max(1.0, std::abs(st.d1)));
    }
    CHECK(pair.max_drift() < 1e-9);
}

TEST_CASE("ode: q = 3 Bank-Laine zeros and identity")
{
    const Rect region{-2, 6, -8, 8};
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::expq(3), 0.0, region);
    auto zs = banklaine_check(pair, region);
    REQUIRE(!zs.empty());
    for (const auto& z : zs) {
        CHECK(z.residual < 1e-6);
        CHECK(z.simple);
    }
    CHECK(pair.max_drift() < 1e-9);
    for (const auto& c : pair.drift_log()) CHECK(c.drift < 1e-9);
    CHECK(banklaine_identity_residual(pair, 0.0, 2.0) < 1e-6);
}

TEST_CASE("ode: zeros of E are stable under a tighter tolerance")
{
    const Rect region{-2, 6, -8, 8};
    NormalizedPair pair = ode_normalized_pair(OdeCoefficient::expq(1), 0.0, region);
    ZeroSet a = locate_zeros(pair.E_handle(), region, 1e-10);
    ZeroSet b = locate_zeros(pair.E_handle(), region, 1e-11);
    CHECK(a.points.size() == b.points.size());
    for (double r : a.residual) CHECK(r < 1e-9);
}

TEST_CASE("ode: coefficient from a handle matches the analytic Taylor data")
{
    FunctionHandle h = FunctionHandle::entire_function([](cplx z) { return std::exp(z) - 1.0 / 16.0; });
    OdeCoefficient a = OdeCoefficient::from_handle(h), b = OdeCoefficient::expq(1);
    std::vector<cplx> ta, tb;
    a.taylor(cplx(0.5, 1.0), 10, ta);
    b.taylor(cplx(0.5, 1.0), 10, tb);
    for (int k = 0; k <= 10; ++k) CHECK(std::abs(ta[k] - tb[k]) < 1e-9 * std::max(1.0, std::abs(tb[k])));
}

TEST_CASE("ode: huge coefficients are refused")
{
    CHECK_THROWS_AS(ode_normalized_pair(OdeCoefficient::expq(1), 40.0, {38, 42, -1, 1}), PathRefusalError);
}

TEST_CASE("nevanlinna: constants and the exp(e^z) model")
{
    NevanlinnaSample c = nevanlinna_model("const:3", 10.0);
    CHECK(c.m == doctest::Approx(std::log(3.0)));
    CHECK(c.N_count == 0.0);
    CHECK(c.T == doctest::Approx(std::log(3.0)));
    NevanlinnaSample e = nevanlinna_model("exp_exp", 30.0);
    double ratio = e.T / (std::exp(30.0) / std::sqrt(2.0 * kPi * kPi * kPi * 30.0));
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
    CHECK(e.T == doctest::Approx(e.m + e.N_count));
    CHECK_THROWS(nevanlinna_model("bogus", 1.0));
}

TEST_CASE("nevanlinna: generic proximity agrees with the closed-form model")
{
    FunctionHandle f = model_handle({0, 0});
    for (double r : {2.0, 5.0, 12.0}) {
        double m = proximity(f.eval, r);
        CHECK(m == doctest::Approx(nevanlinna_model("exp_exp", r).m).epsilon(1e-9));
    }
}

TEST_CASE("nevanlinna: pole counting of g_{1,1} at r = 40")
{
    // poles at log 3 + i pi (2k + 1); n(t) ~ t / pi
    std::vector<double> mods;
    for (int k = -20; k < 20; ++k) mods.push_back(std::hypot(std::log(3.0), kPi * (2 * k + 1)));
    auto n = [&](double t) { return double(std::count_if(mods.begin(), mods.end(), [t](double m) { return m <= t; })); };
    const double r = 40.0;
    double exact = counting_integral_exact(mods, r);
    double trap = counting_integral(n, r);
    CHECK(std::abs(trap - exact) / exact < 0.02);
    CHECK(std::abs(exact / (r / kPi) - 1.0) < 0.1);
    NevanlinnaSample s = nevanlinna(model_handle({1, 1}), r, n);
    CHECK(s.m >= 0.0);
    CHECK(s.N_count >= 0.0);
    CHECK(s.T == doctest::Approx(s.m + s.N_count));
}

TEST_CASE("exponent fit: n = r^2 exactly")
{
    std::vector<std::pair<double, double>> c;
    for (int k = 0; k < 10; ++k) {
        double r = 10.0 * std::pow(2.0, k);
        c.push_back({r, r * r});
    }
    ExponentFit f = exponent_of_convergence(c);
    CHECK(std::abs(f.lambda - 2.0) < 1e-12);
    CHECK(f.band_hi / f.band_lo == doctest::Approx(1.0));
    c.resize(7);
    CHECK_THROWS(exponent_of_convergence(c));
}

TEST_CASE("exponent fit: (log r)^2 counts prefer the log-log fit")
{
    std::vector<std::pair<double, double>> c;
    for (int k = 0; k < 12; ++k) {
        double r = 50.0 * std::pow(2.0, k);
        c.push_back({r, std::floor(std::log(r) * std::log(r))});
    }
    ExponentFit f = exponent_of_convergence(c);
    CHECK(f.prefer_loglog);
    CHECK(std::abs(f.loglog_beta - 2.0) < 0.1);
}

TEST_CASE("exponent fit: poles of g_{1,1} grow linearly")
{
    auto G = Model::get({1, 1});
    std::vector<std::pair<double, double>> c;
    for (int k = 0; k <= 8; ++k) {
        double r = 25.0 * std::pow(2.0, 0.5 * k);
        int n = 0;
        for (int j = -2000; j < 2000; ++j)
            if (std::hypot(std::log(3.0), kPi * (2 * j + 1)) <= r) ++n;
        c.push_back({r, double(n)});
    }
    ExponentFit f = exponent_of_convergence(c);
    CHECK(std::abs(f.lambda - 1.0) < 0.05);
}

TEST_CASE("exponent fit: thm4 case I zeros follow r^{1/2}")
{
    StripMap G(0.0, 0.5, false);
    std::vector<std::pair<double, double>> c;
    for (int k = 0; k <= 8; ++k) {
        double r = 50.0 * std::pow(2.0, 0.5 * k);
        c.push_back({r, double(G.zeros_within(r).size())});
    }
    ExponentFit f = exponent_of_convergence(c);
    CHECK(std::abs(f.lambda - 0.5) < 0.15);
}

} // TEST_SUITE
