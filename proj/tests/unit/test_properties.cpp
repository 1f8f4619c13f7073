// Randomized invariants with small hand-rolled generators and fixed seeds.

#include "blwork/analysis.hpp"
#include "blwork/coefficients.hpp"
#include "blwork/diffeo.hpp"
#include "blwork/model.hpp"
#include "blwork/sequences.hpp"
#include "blwork/surgery.hpp"
#include "config.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace blwork;

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(unsigned long long seed) : rng(seed) {}
    double real(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    cplx complex(double r) { return {real(-r, r), real(-r, r)}; }
    PairIndex pair(int mmax, int nmax) { return {integer(0, mmax), integer(0, nmax)}; }
    Variant variant() { return integer(0, 1) ? Variant::half_shift : Variant::plain; }
    SlopeSequence binary(int len, double p)
    {
        SlopeSequence s;
        s.kind = SeqKind::lemma_a;
        s.entries.assign(len, 0);
        for (int k = 4; k <= len; ++k)
            if (real(0, 1) < p) {
                s.entries[k - 1] = 1;
                s.marked.push_back(k);
            }
        return s;
    }
};

} // namespace

TEST_SUITE("properties") {

TEST_CASE("coefficient identity for random pairs up to (60, 30)")
{
    Gen g(101);
    for (int i = 0; i < 40; ++i) {
        PairIndex p = g.pair(60, 30);
        CHECK_MESSAGE(build_coefficients(p).identity_holds(), p.str());
    }
}

TEST_CASE("ScaledComplex: multiplication and powers are exact in log space")
{
    Gen g(202);
    for (int i = 0; i < 500; ++i) {
        cplx la(g.real(-900, 900), g.real(-kPi, kPi)), lb(g.real(-900, 900), g.real(-kPi, kPi));
        ScaledComplex a = ScaledComplex::from_log(la), b = ScaledComplex::from_log(lb);
        ScaledComplex p = a * b, q = a / b;
        CHECK(p.log_modulus == la.real() + lb.real());
        CHECK(std::abs(p.phase - wrap_phase(la.imag() + lb.imag())) < 1e-15);
        CHECK(q.log_modulus == la.real() - lb.real());
        CHECK(p.phase > -kPi);
        CHECK(p.phase <= kPi);
        double e = g.real(-3, 3);
        CHECK(a.pow(e).log_modulus == doctest::Approx(e * la.real()));
    }
}

TEST_CASE("model: conjugation symmetry and 2 pi i periodicity")
{
    Gen g(303);
    for (int i = 0; i < 200; ++i) {
        PairIndex p = g.pair(4, 4);
        cplx z = g.complex(4.0);
        ScaledComplex a = eval_model(p, z), b = eval_model(p, std::conj(z)), c = eval_model(p, z + cplx(0, kTwoPi));
        if (!a.is_finite()) continue;
        CHECK(log_gap(a, b.conj()) < 1e-12);
        CHECK(log_gap(a, c) < 1e-12);
    }
}

TEST_CASE("phi: conjugacy, monotonicity and phi' > 0 for random model pairs")
{
    Gen g(404);
    for (int i = 0; i < 12; ++i) {
        ModelRef a{g.pair(3, 3), g.variant()}, b{g.pair(3, 3), g.variant()};
        DiffeoSpec s(a, b);
        double prev = -INFINITY;
        for (int j = 0; j < 60; ++j) {
            double x = -40.0 + 80.0 * j / 59.0;
            double p = s.phi(x);
            CHECK(s.residual(x, p) < 1e-11);
            CHECK(p > prev);
            CHECK(s.phi_prime(x) > 0.0);
            prev = p;
        }
    }
}

TEST_CASE("profiles: H(g(x)) = x and omega >= 0 for random 0/1 sequences")
{
    Gen g(505);
    for (int i = 0; i < 10; ++i) {
        const int len = 3000;
        ProfileBundle b = build_profiles(g.binary(len, g.real(0.01, 0.5)), g.binary(len, g.real(0.01, 0.5)));
        double top = kTwoPi * double(b.calN[len]) * 0.99;
        for (int j = 0; j < 500; ++j) {
            double x = g.real(0.0, top);
            CHECK(std::abs(b.H(b.g(x)) - x) <= 1e-12 * std::max(1.0, x));
            double y = g.real(0.0, kTwoPi * len * 0.99);
            CHECK(b.omega(y) >= 0.0);
        }
    }
}

TEST_CASE("0/1 slope sequence: entries are 0/1 with a zero prefix for random lambda")
{
    Gen g(606);
    for (int i = 0; i < 10; ++i) {
        SlopeSequence s = build_lemma_a(g.real(0.0, 0.99), 5000);
        for (int k = 1; k <= 3; ++k) CHECK(s.at(k) == 0);
        for (int k = 1; k <= s.size(); ++k) CHECK((s.at(k) == 0 || s.at(k) == 1));
    }
}

TEST_CASE("spiral charts: p and h are inverse for random kappa")
{
    Gen g(707);
    for (int i = 0; i < 20; ++i) {
        SpiralCharts ch = spiral_charts(std::exp(g.real(std::log(0.125), std::log(8.0))));
        for (int j = 0; j < 20; ++j) {
            cplx z = std::polar(g.real(0.01, 50.0), g.real(-kPi + 1e-9, kPi));
            CHECK(std::abs(ch.p(ch.h(z)) - z) < 1e-12 * std::abs(z));
        }
    }
}

TEST_CASE("Beltrami: |mu| < 1 at random points of every flavor")
{
    Gen g(808);
    AssembleParams p;
    p.lambda1 = 0.0;
    p.lambda2 = 0.5;
    for (Flavor f : {Flavor::thm3, Flavor::thm4, Flavor::thm5, Flavor::thm6}) {
        auto G = assemble(f, p);
        for (int i = 0; i < 300; ++i) {
            Beltrami b = G->beltrami_at(g.complex(150.0));
            if (b.indeterminate) continue;
            CHECK(std::abs(b.mu) < 1.0);
            CHECK(b.K >= 1.0);
        }
    }
}

TEST_CASE("argument principle: counts of g_{1,1} on random period-aligned rectangles")
{
    Gen g(909);
    for (int i = 0; i < 8; ++i) {
        int K = g.integer(1, 4);
        double y0 = g.real(-1.0, 1.0);
        // real parts of the zeros (0.896) and pole (1.099) lie in [0.5, 1.5]
        Rect r{g.real(-6.0, 0.5), g.real(1.5, 6.0), y0, y0 + kTwoPi * K};
        CountResult c = count_zeros_poles(model_handle({1, 1}), r);
        CHECK(c.Z == 2 * K);
        CHECK(c.P == K);
    }
}

TEST_CASE("config: random parameter sets round-trip")
{
    Gen g(1001);
    using namespace blwork::cli;
    for (int i = 0; i < 50; ++i) {
        ExperimentConfig c = default_config("zeros");
        c.seed = (unsigned long long)g.integer(0, 1 << 30);
        c.threads = g.integer(1, 16);
        c.params["pair"] = {std::to_string(g.integer(0, 30)) + "," + std::to_string(g.integer(0, 30))};
        c.params["lambda2"] = {std::to_string(g.real(0, 1))};
        std::vector<std::string> radii;
        for (int k = 0; k < g.integer(1, 9); ++k) radii.push_back(std::to_string(g.real(1, 1000)));
        c.params["radii"] = radii;
        if (g.integer(0, 1)) c.tol = g.real(1e-14, 1e-3);
        ExperimentConfig back = parse_config(c.to_yaml());
        CHECK(back == c);
    }
}

} // TEST_SUITE
