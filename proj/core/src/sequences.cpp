#include "blwork/sequences.hpp"

#include "blwork/scaled_complex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blwork {

const char* seq_kind_name(SeqKind k)
{
    switch (k) {
    case SeqKind::lemma_a: return "lemma-a";
    case SeqKind::lemma_1: return "lemma-1";
    case SeqKind::lemma_2: return "lemma-2";
    case SeqKind::ones: return "ones";
    case SeqKind::zeros: return "zeros";
    }
    return "?";
}

int SlopeSequence::at(int k) const
{
    if (k < 1 || k > size()) throw std::out_of_range("slope sequence index " + std::to_string(k));
    return entries[k - 1];
}

double lemma1_alpha(double x)
{
    return std::pow(std::log(x + kTwoPi), -3.0);
}

namespace {

// 0/1 sequence: k_i is the unique k with T(2 pi (k-1)) < 2 pi i <= T(2 pi k).
// Hits inside the zero prefix k <= 3 (or several hits at one k) are deferred
// to the next free index, so h stays within 2 pi of T.
SlopeSequence unit_track(SeqKind kind, const std::function<double(double)>& T, int kcap)
{
    SlopeSequence s;
    s.kind = kind;
    s.entries.assign(kcap, 0);
    int i = 1, pending = 0;
    for (int k = 1; k <= kcap; ++k) {
        double t = T(kTwoPi * k);
        while (t >= kTwoPi * i) {
            ++pending;
            ++i;
        }
        if (pending > 0 && k > 3) {
            s.entries[k - 1] = 1;
            s.marked.push_back(k);
            --pending;
        }
    }
    return s;
}

} // namespace

SlopeSequence build_lemma_a(double lambda, int kcap)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lemma a: lambda must lie in [0, 1)");
    std::function<double(double)> T;
    if (lambda == 0.0) T = [](double x) { double l = std::log(x); return l * l; };
    else T = [lambda](double x) { return std::pow(x, lambda); };
    SlopeSequence s = unit_track(SeqKind::lemma_a, T, kcap);
    s.p1 = lambda;
    return s;
}

SlopeSequence unit_from(int k0, int kcap)
{
    SlopeSequence s;
    s.kind = SeqKind::ones;
    s.entries.assign(kcap, 0);
    for (int k = std::max(k0, 4); k <= kcap; ++k) {
        s.entries[k - 1] = 1;
        s.marked.push_back(k);
    }
    return s;
}

SlopeSequence zero_sequence(int kcap)
{
    SlopeSequence s;
    s.kind = SeqKind::zeros;
    s.entries.assign(kcap, 0);
    return s;
}

SlopeSequence build_lemma_1(double gamma, double delta, int kcap)
{
    if (!(gamma > 1.0)) throw std::invalid_argument("lemma 1: gamma must exceed 1");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("lemma 1: delta must lie in [0, 1]");
    const double beta = delta * gamma;
    SlopeSequence s;
    if (beta == 0.0) {
        s = zero_sequence(kcap);
    } else if (beta < 1.0) {
        s = unit_track(SeqKind::lemma_1, [beta](double x) { return std::pow(x, beta); }, kcap);
    } else if (beta == 1.0) {
        s = unit_from(4, kcap);
    } else {
        // level target beta alpha(k) (2 pi k)^{beta-1}; odd increments, remainder carried
        s.entries.assign(kcap, 0);
        s.remainder_carry = true;
        double carry = 0.0;
        int prev = 0;
        for (int k = 4; k <= kcap; ++k) {
            double target = beta * lemma1_alpha(k) * std::pow(kTwoPi * k, beta - 1.0);
            double a = target + carry;
            int mk = prev;
            if (a >= prev + 1.0) {
                long c = long(std::floor(a));
                if ((c - prev) % 2 == 0) --c;
                mk = int(c);
            }
            carry = a - mk;
            s.entries[k - 1] = mk;
            prev = mk;
        }
    }
    s.kind = SeqKind::lemma_1;
    s.p1 = gamma;
    s.p2 = delta;
    return s;
}

SlopeSequence build_lemma_2(double gamma, const SlopeSequence& m_seq)
{
    if (!(gamma > 1.0)) throw std::invalid_argument("lemma 2: gamma must exceed 1");
    const int kcap = m_seq.size();
    SlopeSequence s;
    s.kind = SeqKind::lemma_2;
    s.p1 = gamma;
    s.remainder_carry = true;
    s.entries.assign(kcap, 0);
    // Profile deficit of the fixed prefix N_1 = N_2 = N_3 = 1 is carried into k >= 4.
    double carry = 0.0;
    for (int k = 1; k <= kcap; ++k) {
        double target = (std::pow(kTwoPi * k, gamma) - std::pow(kTwoPi * (k - 1), gamma)) / kTwoPi;
        int mk = m_seq.entries[k - 1];
        long Nk = 1;
        if (k > 3) {
            double a = target + carry;
            Nk = std::lround(a);
            if ((Nk - mk) % 2 == 0) Nk += (a >= double(Nk)) ? 1 : -1;
            if (Nk < mk + 1) Nk = mk + 1;
            if ((Nk - mk - 1) % 2 != 0) throw std::logic_error("lemma 2: parity construction failed");
        } else if (mk != 0) {
            throw std::logic_error("lemma 2: m-sequence prefix must vanish");
        }
        carry += target - double(Nk);
        if (k <= 3) continue;
        s.entries[k - 1] = int((Nk - mk - 1) / 2);
    }
    return s;
}

StepProfile::StepProfile(std::vector<long long> slopes) : slopes_(std::move(slopes))
{
    cum_.assign(slopes_.size() + 1, 0);
    for (size_t k = 0; k < slopes_.size(); ++k) cum_[k + 1] = cum_[k] + slopes_[k];
}

double StepProfile::operator()(double x) const
{
    if (x <= 0.0) return x * (slopes_.empty() ? 1.0 : double(slopes_[0]));
    long k = long(std::floor(x / kTwoPi));
    if (k >= long(slopes_.size())) {
        if (x > kTwoPi * double(slopes_.size()) * (1.0 + 1e-15))
            throw std::out_of_range("profile evaluated beyond the sequence cap");
        k = long(slopes_.size()) - 1;
    }
    return kTwoPi * double(cum_[k]) + double(slopes_[k]) * (x - kTwoPi * double(k));
}

double StepProfile::inverse(double y) const
{
    if (y <= 0.0) return y / double(slopes_.at(0));
    double t = y / kTwoPi;
    // largest k with cum_[k] <= t
    auto it = std::upper_bound(cum_.begin(), cum_.end(), t,
                               [](double v, long long c) { return v < double(c); });
    long k = long(it - cum_.begin()) - 1;
    if (k >= long(slopes_.size())) {
        if (t > double(cum_.back()) * (1.0 + 1e-15))
            throw std::out_of_range("profile inverse beyond the sequence cap");
        k = long(slopes_.size()) - 1;
    }
    if (slopes_[k] <= 0) throw std::domain_error("profile inverse on a flat segment");
    return kTwoPi * double(k) + (y - kTwoPi * double(cum_[k])) / double(slopes_[k]);
}

int ProfileBundle::strip_of_height(double y) const
{
    double t = y / kTwoPi;
    auto it = std::upper_bound(calN.begin(), calN.end(), t,
                               [](double v, long long c) { return v < double(c); });
    long k = long(it - calN.begin());
    if (k > long(N.size())) throw std::out_of_range("height beyond the sequence cap");
    return int(std::max(1L, k));
}

ProfileBundle build_profiles(const SlopeSequence& m, const SlopeSequence& n, double gamma)
{
    if (m.size() != n.size()) throw std::invalid_argument("profiles: sequences differ in length");
    ProfileBundle b;
    const int K = m.size();
    std::vector<long long> sm(K), sn(K), sN(K);
    b.calN.assign(K + 1, 0);
    for (int k = 0; k < K; ++k) {
        sm[k] = m.entries[k];
        sn[k] = n.entries[k];
        sN[k] = 1 + sm[k] + 2 * sn[k];
        b.calN[k + 1] = b.calN[k] + sN[k];
    }
    b.N = sN;
    b.h1 = StepProfile(sm);
    b.h2 = StepProfile(sn);
    b.H = StepProfile(sN);
    if (gamma == 1.0) b.target = [](double x) { return x; };
    else b.target = [gamma](double x) { return x <= 0.0 ? x : std::pow(x, gamma); };
    return b;
}

CaseSelection select_case(double lambda1, double lambda2, int kcap)
{
    if (lambda1 < 0.0 || lambda2 > 1.0 || lambda1 > 1.0 || lambda2 < 0.0)
        throw std::invalid_argument("select_case: lambdas must lie in [0, 1]");
    if (lambda1 > lambda2) throw std::invalid_argument("select_case: requires lambda1 <= lambda2");
    CaseSelection c;
    if (lambda2 < 1.0) {
        c.case_id = 1;
        c.l = 1;
        c.m_seq = build_lemma_a(lambda1, kcap);
        c.n_seq = build_lemma_a(lambda2, kcap);
    } else if (lambda1 < 1.0) {
        c.case_id = 2;
        c.l = 3;
        c.m_seq = build_lemma_a(lambda1, kcap);
        c.n_seq = unit_from(4, kcap);
    } else {
        c.case_id = 3;
        c.l = 4;
        c.m_seq = unit_from(4, kcap);
        c.n_seq = unit_from(4, kcap);
    }
    return c;
}

std::string sequences_csv(const SlopeSequence& m, const SlopeSequence& n, int kmax)
{
    std::ostringstream os;
    os << "k,m_k,n_k,N_k,calN_k\n";
    long long cal = 0;
    for (int k = 1; k <= std::min({kmax, m.size(), n.size()}); ++k) {
        long long Nk = 1 + m.entries[k - 1] + 2LL * n.entries[k - 1];
        cal += Nk;
        os << k << ',' << m.entries[k - 1] << ',' << n.entries[k - 1] << ',' << Nk << ',' << cal << '\n';
    }
    return os.str();
}

} // namespace blwork
