#include "blwork/sequences.hpp"
#include "blwork/scaled_complex.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace blwork;

TEST_SUITE("sequences") {

TEST_CASE("0/1 slope sequence, lambda = 0: marks follow exp((2 pi i)^{1/2})")
{
    SlopeSequence s = build_lemma_a(0.0);
    REQUIRE(s.marked.size() > 20);
    for (size_t i = 10; i < s.marked.size(); ++i) {
        double ratio = kTwoPi * s.marked[i] / std::exp(std::sqrt(kTwoPi * double(i + 1)));
        CHECK(std::abs(ratio - 1.0) < 2e-3);
    }
}

TEST_CASE("0/1 slope sequence, lambda = 1/2: first mark at 7")
{
    SlopeSequence s = build_lemma_a(0.5);
    REQUIRE(!s.marked.empty());
    CHECK(s.marked.front() == 7);
    CHECK(std::sqrt(kTwoPi * 7) >= kTwoPi);
    CHECK(std::sqrt(kTwoPi * 6) < kTwoPi);
}

TEST_CASE("0/1 slope sequence, lambda = 1/2: h stays within 2 pi + 1 of x^{1/2} up to 1e6")
{
    SlopeSequence s = build_lemma_a(0.5, 160000);
    ProfileBundle b = build_profiles(s, zero_sequence(160000));
    double sup = 0.0;
    for (int k = 1; kTwoPi * k <= 1e6; ++k) sup = std::max(sup, std::abs(b.h1(kTwoPi * k) - std::sqrt(kTwoPi * k)));
    CHECK(sup <= kTwoPi + 1.0);
}

TEST_CASE("0/1 slope sequence, lambda = 0.9: h stays within 2 pi + 1 of x^{0.9} up to 1e6")
{
    // The zero prefix alone forces a deviation of (6 pi)^0.9 ~ 14.06 at x = 6 pi.
    SlopeSequence s = build_lemma_a(0.9, 160000);
    ProfileBundle b = build_profiles(s, zero_sequence(160000));
    double sup = 0.0;
    for (int k = 1; kTwoPi * k <= 1e6; ++k) sup = std::max(sup, std::abs(b.h1(kTwoPi * k) - std::pow(kTwoPi * k, 0.9)));
    CHECK(sup <= kTwoPi + 1.0);
}

TEST_CASE("0/1 slope sequence rejects lambda outside [0, 1)")
{
    CHECK_THROWS_AS(build_lemma_a(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_lemma_a(1.0), std::invalid_argument);
}

TEST_CASE("weighted slope sequence: delta = 0 gives the zero sequence")
{
    SlopeSequence s = build_lemma_1(2.0, 0.0, 500);
    for (int k = 1; k <= s.size(); ++k) CHECK(s.at(k) == 0);
}

TEST_CASE("weighted slope sequence: delta gamma = 1 gives ones from the first mark")
{
    SlopeSequence s = build_lemma_1(2.0, 0.5, 500);
    for (int k = 1; k <= 3; ++k) CHECK(s.at(k) == 0);
    for (int k = 4; k <= s.size(); ++k) CHECK(s.at(k) == 1);
}

TEST_CASE("weighted slope sequence: gamma = 2, delta = 1 tracks 2 alpha(k) 2 pi k")
{
    SlopeSequence s = build_lemma_1(2.0, 1.0, 20000);
    const int k = 10000;
    double ratio = s.at(k) / (2.0 * lemma1_alpha(k) * kTwoPi * k);
    CHECK(std::abs(ratio - 1.0) < 0.15);
}

TEST_CASE("weighted slope sequence, second branch: entries nondecreasing with odd positive increments")
{
    for (auto [g, d] : {std::pair{2.0, 1.0}, std::pair{1.5, 1.0}, std::pair{3.0, 0.5}}) {
        SlopeSequence s = build_lemma_1(g, d, 5000);
        for (int k = 2; k <= s.size(); ++k) {
            int inc = s.at(k) - s.at(k - 1);
            CHECK(inc >= 0);
            if (inc > 0) CHECK(inc % 2 == 1);
        }
    }
}

TEST_CASE("step-count sequence: prefix has N_k = 1")
{
    SlopeSequence m = build_lemma_1(1.01, 1.0, 100);
    SlopeSequence n = build_lemma_2(1.01, m);
    for (int k = 1; k <= 3; ++k) CHECK(m.at(k) + 2 * n.at(k) + 1 == 1);
}

TEST_CASE("step-count sequence: gamma = 2 gives N_k ~ 2 (2 pi k)")
{
    SlopeSequence m = build_lemma_1(2.0, 1.0, 20000);
    SlopeSequence n = build_lemma_2(2.0, m);
    const int k = 10000;
    double Nk = m.at(k) + 2.0 * n.at(k) + 1.0;
    CHECK(std::abs(Nk / (2.0 * kTwoPi * k) - 1.0) < 0.05);
}

TEST_CASE("step-count sequence: gamma = 3/2 inversion error constant below 10")
{
    // The N = 1 prefix forces g(10) >= 18.85, so the fitted constant is about 12.
    SlopeSequence m = build_lemma_1(1.5, 1.0, 20000);
    SlopeSequence n = build_lemma_2(1.5, m);
    ProfileBundle b = build_profiles(m, n, 1.5);
    double C = 0.0;
    for (double x = 10.0; x <= 1e4; x *= 1.01) C = std::max(C, std::abs(b.g(x) - x) / (1.0 / x + 1.0 / std::sqrt(x)));
    CHECK(C < 10.0);
}

TEST_CASE("step-count sequence: g approaches the identity for gamma = 2")
{
    SlopeSequence m = build_lemma_1(2.0, 1.0, 20000);
    ProfileBundle b = build_profiles(m, build_lemma_2(2.0, m), 2.0);
    double early = std::abs(b.g(100.0) - 100.0), late = std::abs(b.g(1e4) - 1e4);
    CHECK(late < early);
    CHECK(late < 0.1);
}

TEST_CASE("select_case: the three cases")
{
    CaseSelection c1 = select_case(0.0, 0.0);
    CHECK(c1.case_id == 1);
    CHECK(c1.l == 1);
    CaseSelection c2 = select_case(0.5, 1.0);
    CHECK(c2.case_id == 2);
    CHECK(c2.l == 3);
    for (int k = 4; k <= 200; ++k) CHECK(c2.n_seq.at(k) == 1);
    CaseSelection c3 = select_case(1.0, 1.0);
    CHECK(c3.case_id == 3);
    CHECK(c3.l == 4);
    for (int k = 4; k <= 200; ++k) CHECK(c3.m_seq.at(k) + 2 * c3.n_seq.at(k) + 1 == 4);
    CHECK_THROWS_AS(select_case(0.6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(select_case(0.0, 1.5), std::invalid_argument);
}

TEST_CASE("select_case: N_k <= 4 and zero prefix in every case")
{
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.0, 0.5}, std::pair{0.3, 0.9}, std::pair{0.5, 1.0},
                        std::pair{1.0, 1.0}}) {
        CaseSelection c = select_case(a, b, 5000);
        for (int k = 1; k <= 3; ++k) {
            CHECK(c.m_seq.at(k) == 0);
            CHECK(c.n_seq.at(k) == 0);
        }
        for (int k = 1; k <= 5000; ++k) CHECK(c.m_seq.at(k) + 2 * c.n_seq.at(k) + 1 <= 4);
    }
}

TEST_CASE("step profile: values, breakpoints and inverse")
{
    StepProfile p({1, 0, 2, 3});
    CHECK(p(0.0) == 0.0);
    CHECK(p.cum(1) == 1);
    CHECK(p.cum(4) == 6);
    CHECK(p(kTwoPi * 1.5) == doctest::Approx(kTwoPi));
    CHECK(p(kTwoPi * 2.5) == doctest::Approx(kTwoPi * 2.0));
    StepProfile q({1, 2, 3});
    for (double y = 0.0; y < kTwoPi * 6.0; y += 0.37) CHECK(q(q.inverse(y)) == doctest::Approx(y).epsilon(1e-14));
}

TEST_CASE("profiles: H(g(x)) = x at breakpoints and between; omega >= 0")
{
    CaseSelection c = select_case(0.0, 0.5, 20000);
    ProfileBundle b = build_profiles(c.m_seq, c.n_seq);
    for (int k = 1; k <= 2000; ++k) {
        double y = kTwoPi * double(b.calN[k]);
        CHECK(std::abs(b.H(b.g(y)) - y) <= 1e-12 * y);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1e5);
    for (int i = 0; i < 2000; ++i) {
        double x = u(rng);
        CHECK(std::abs(b.H(b.g(x)) - x) <= 1e-12 * std::max(1.0, x));
        CHECK(b.omega(x) >= 0.0);
    }
}

TEST_CASE("profiles: strip of height")
{
    CaseSelection c = select_case(1.0, 1.0, 100);
    ProfileBundle b = build_profiles(c.m_seq, c.n_seq);
    CHECK(b.strip_of_height(0.0) == 1);
    CHECK(b.strip_of_height(kTwoPi * 3.5) == 4);
    CHECK(b.strip_of_height(kTwoPi * double(b.calN[10])) == 11);
}

TEST_CASE("sequence CSV export")
{
    CaseSelection c = select_case(1.0, 1.0, 100);
    std::string csv = sequences_csv(c.m_seq, c.n_seq, 5);
    CHECK(csv.rfind("k,m_k,n_k,N_k,calN_k\n", 0) == 0);
    CHECK(csv.find("5,1,1,4,11") != std::string::npos);
}

} // TEST_SUITE
